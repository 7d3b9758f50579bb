"""
Mandelstam-Tamm speed limit and the Hamiltonian that saturates it.

Internal units set hbar = 1, so energies are angular frequencies and
times are in units of 1/omega.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegeneratePairError, DomainError, ShapeError
from .states import PureState, _check_same_dims, inner_product

DEGENERATE_OVERLAP = 1.0 - 1e-12
ORTHOGONALITY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
VARIANCE_FLOOR = 1e-12


def phase_align(psi: PureState, phi: PureState) -> PureState:
    """Multiply ``phi`` by a phase so that ``<psi|phi>`` is real and non-negative.

    ``phi`` itself is returned when the overlap is already non-negative
    real or exactly zero.
    """
    ov = inner_product(psi, phi)
    if ov == 0 or (ov.imag == 0 and ov.real > 0):
        return phi
    return PureState(phi.amplitudes * np.exp(-1j * np.angle(ov)), phi.dims)


def orthogonal_complement(psi: PureState, phi: PureState) -> PureState:
    """Unit vector ``psi_bar`` in ``span{psi, phi}`` orthogonal to ``psi``.

    ``psi_bar = (phi - <psi|phi> psi) / sqrt(1 - |<psi|phi>|^2)``.
    """
    ov = inner_product(psi, phi)
    if abs(ov) >= DEGENERATE_OVERLAP:
        raise DegeneratePairError(f"|<psi|phi>| = {abs(ov)!r}; states coincide")
    if ov == 0:
        return phi
    vec = phi.amplitudes - ov * psi.amplitudes
    vec = vec / np.sqrt(1.0 - abs(ov) ** 2)
    # one Gram-Schmidt pass against rounding
    vec = vec - np.vdot(psi.amplitudes, vec) * psi.amplitudes
    return PureState(vec, psi.dims)


@dataclass(frozen=True, eq=False)
class DenseHamiltonian:
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"Hamiltonian must be square, got shape {mat.shape}")
        if mat.size and np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise DomainError("Hamiltonian is not Hermitian")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class OptHamiltonian:
    """``H = -i omega (|psi><psi_bar| - |psi_bar><psi|)`` kept in factored form."""

    psi: PureState
    psi_bar: PureState
    omega: float

    def __post_init__(self):
        _check_same_dims(self.psi, self.psi_bar)
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if abs(inner_product(self.psi, self.psi_bar)) > ORTHOGONALITY_TOL:
            raise DomainError("psi and psi_bar are not orthogonal")

    def apply(self, vec: np.ndarray) -> np.ndarray:
        a, b = self.psi.amplitudes, self.psi_bar.amplitudes
        return -1j * self.omega * (a * np.vdot(b, vec) - b * np.vdot(a, vec))

    def dense(self) -> DenseHamiltonian:
        a, b = self.psi.amplitudes, self.psi_bar.amplitudes
        return DenseHamiltonian(-1j * self.omega * (np.outer(a, b.conj()) - np.outer(b, a.conj())))

    @property
    def gap(self) -> float:
        return 2.0 * self.omega


def build_h_opt(psi: PureState, phi: PureState, omega: float) -> OptHamiltonian:
    """Time-optimal generator rotating ``psi`` into (the phase-aligned) ``phi``.

    In the basis ``{psi, psi_bar}`` it acts as ``omega * sigma_y`` and it
    vanishes on the orthogonal complement of that plane.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    _check_same_dims(psi, phi)
    phi = phase_align(psi, phi)
    return OptHamiltonian(psi, orthogonal_complement(psi, phi), float(omega))


def evolve_opt(h: OptHamiltonian, t: float) -> PureState:
    """``exp(-i H t)|psi> = cos(omega t)|psi> + sin(omega t)|psi_bar>``."""
    if t < 0:
        raise DomainError("t must be non-negative")
    wt = h.omega * t
    return PureState(np.cos(wt) * h.psi.amplitudes + np.sin(wt) * h.psi_bar.amplitudes,
                     h.psi.dims)


def fubini_study_angle(psi: PureState, phi: PureState) -> float:
    """``arccos|<psi|phi>|``; exactly zero once the overlap passes the degeneracy threshold."""
    c = abs(inner_product(psi, phi))
    if c >= DEGENERATE_OVERLAP:
        return 0.0
    return float(np.arccos(c))


def transit_time(psi: PureState, phi: PureState, omega: float) -> float:
    """Time for the optimal Hamiltonian at frequency ``omega`` to reach ``phi``."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    return fubini_study_angle(psi, phi) / omega


def _as_dense(h) -> DenseHamiltonian:
    if isinstance(h, OptHamiltonian):
        return h.dense()
    if isinstance(h, DenseHamiltonian):
        return h
    return DenseHamiltonian(h)


def propagator(h, t: float) -> np.ndarray:
    """``exp(-i H t)`` via the Hermitian eigendecomposition."""
    h = _as_dense(h)
    w, v = np.linalg.eigh(h.matrix)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve_dense(h, psi: PureState, t) -> PureState | list[PureState]:
    """Evolve ``psi`` under a time-independent Hermitian ``h``.

    ``t`` may be a scalar or a 1-d array of times; one eigendecomposition
    serves the whole array.
    """
    h = _as_dense(h)
    if h.dim != psi.dim:
        raise ShapeError(f"Hamiltonian dimension {h.dim} vs state dimension {psi.dim}")
    w, v = np.linalg.eigh(h.matrix)
    coeffs = v.conj().T @ psi.amplitudes
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = (np.exp(-1j * np.outer(ts, w)) * coeffs) @ v.T
    states = [PureState(row, psi.dims) for row in out]
    return states[0] if np.ndim(t) == 0 else states


def variance(h, psi: PureState) -> float:
    """Energy spread ``sqrt(<H^2> - <H>^2)`` of ``psi``.

    Despite the name this is the standard deviation that enters the
    speed limit.
    """
    if isinstance(h, OptHamiltonian):
        hpsi = h.apply(psi.amplitudes)
    else:
        h = _as_dense(h)
        if h.dim != psi.dim:
            raise ShapeError(f"Hamiltonian dimension {h.dim} vs state dimension {psi.dim}")
        hpsi = h.matrix @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, hpsi).real
    second = np.vdot(hpsi, hpsi).real
    var = second - mean * mean
    if var < 0:
        if var < -VARIANCE_FLOOR:
            raise ConsistencyError(f"negative variance {var!r}")
        var = 0.0
    return float(np.sqrt(var))


def qsl_bound(psi: PureState, phi: PureState, delta_h: float) -> float:
    """Mandelstam-Tamm lower bound ``arccos|<psi|phi>| / delta_h``."""
    if not delta_h > 0:
        raise DomainError(f"energy spread must be positive, got {delta_h}")
    return fubini_study_angle(psi, phi) / delta_h


def scan_step(delta_h: float) -> float:
    return np.pi / (2000.0 * delta_h)


def first_passage_time(h, psi: PureState, phi: PureState, threshold: float = 1 - 1e-6,
                       step: float | None = None, t_max: float | None = None,
                       chunk: int = 4096) -> float | None:
    """Earliest scanned time at which ``|<phi|exp(-iHt)|psi>|^2 >= threshold``.

    Times are sampled on the grid ``k * step``; the default step is
    ``pi / (2000 * Delta H)``.  Returns None if the threshold is not met
    up to ``t_max`` (default ``100 pi / Delta H``).
    """
    h = _as_dense(h)
    if step is None:
        step = scan_step(variance(h, psi))
    if t_max is None:
        t_max = 2000.0 * 100 * step
    w, v = np.linalg.eigh(h.matrix)
    a = v.conj().T @ psi.amplitudes
    b = v.conj().T @ phi.amplitudes
    weights = b.conj() * a
    n_total = int(np.floor(t_max / step)) + 1
    for start in range(0, n_total, chunk):
        ks = np.arange(start, min(start + chunk, n_total))
        amp = np.exp(-1j * np.outer(ks * step, w)) @ weights
        hit = np.nonzero(np.abs(amp) ** 2 >= threshold)[0]
        if hit.size:
            return float(ks[hit[0]] * step)
    return None
