"""Exception types raised by qsle."""


class QSLEError(Exception):
    """Base class for all qsle errors."""


class ShapeError(QSLEError, ValueError):
    """Dimensions of two objects do not agree."""


class DomainError(QSLEError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateContractionError(QSLEError, ArithmeticError):
    """A partial contraction vanished, so the factor update is undefined."""


class DegeneratePairError(QSLEError, ValueError):
    """The two states coincide up to phase; no rotation plane exists."""


class ConsistencyError(QSLEError, ArithmeticError):
    """A floating point guard tripped by more than rounding can explain."""


class OracleScaleError(QSLEError, ValueError):
    """The brute-force oracle was asked to search a space it cannot cover."""


class StateFileError(QSLEError, ValueError):
    """A state file is malformed.  ``field`` names the first bad entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
