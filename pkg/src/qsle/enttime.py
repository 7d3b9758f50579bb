"""
Minimal time to make a pure state m-separable.

Under the time-optimal qubit-type Hamiltonian with frequency omega the
closest m-separable state is reached after ``arcsin(sqrt(E_m)) / omega``
and no Hamiltonian with the same energy spread does better.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePairError, DomainError
from .qsl import build_h_opt, evolve_opt
from .separable import CLAMP_FLOOR, OptConfig, OverlapResult, geometric_entanglement
from .states import Partition, ProductState, PureState, assemble, inner_product

HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True, eq=False)
class TimeReport:
    m: int
    E_m: float
    tau_internal: float
    omega: float
    closest_separable: ProductState
    partition: Partition
    converged: bool
    tau_seconds: float | None = None

    @property
    def rotation_angle(self) -> float:
        """``omega * tau``, in [0, pi/2]."""
        return self.tau_internal * self.omega


def time_from_entanglement(e: float, omega: float) -> float:
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if not 0.0 <= e <= 1.0:
        raise DomainError(f"entanglement must lie in [0, 1], got {e}")
    return math.asin(math.sqrt(e)) / omega


def entanglement_from_time(tau: float, omega: float) -> float:
    """Invert ``tau = arcsin(sqrt(E)) / omega`` on the principal branch."""
    x = omega * tau
    if not 0.0 <= x <= math.pi / 2:
        raise DomainError(f"omega * tau = {x!r} lies outside [0, pi/2]")
    return math.sin(x) ** 2


def energy_gap(omega: float, si: bool = False) -> float:
    """Gap between the two nonzero levels of the optimal Hamiltonian.

    Returns ``2 omega`` (hbar = 1), or ``2 hbar omega`` in joules with
    ``si=True`` and omega in rad/s.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    return 2.0 * omega * (HBAR if si else 1.0)


def _report(m, e, best: OverlapResult, omega, si) -> TimeReport:
    # below the floor the state counts as separable: E and tau are both zero
    if e <= CLAMP_FLOOR:
        e = 0.0
    tau = time_from_entanglement(e, omega)
    return TimeReport(
        m=m, E_m=e, tau_internal=tau, omega=float(omega),
        closest_separable=best.product, partition=best.partition,
        converged=best.converged, tau_seconds=tau if si else None)


def tau_m(psi: PureState, m: int, omega: float, cfg: OptConfig = OptConfig(),
          si: bool = False, workers: int | None = None) -> TimeReport:
    """Minimal evolution time from ``psi`` to the set of ``m``-separable states.

    With ``si=True`` omega is read as rad/s and ``tau_seconds`` is filled
    in; the internal value is the same number either way since hbar only
    enters through the energy gap.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    e, best = geometric_entanglement(psi, m, cfg, workers)
    return _report(m, e, best, omega, si)


@dataclass(frozen=True, eq=False)
class VerificationRecord:
    m: int
    E_m: float
    tau_internal: float
    omega: float
    target_fidelity: float
    residual_E_m: float
    certified: bool
    skipped: bool
    evolved: PureState

    @property
    def fidelity_deficit(self) -> float:
        return 1.0 - self.target_fidelity

    def passed(self, tol: float = 1e-6) -> bool:
        return self.skipped or self.residual_E_m < tol


def verify_separabilization(psi: PureState, m: int, omega: float,
                            cfg: OptConfig = OptConfig(),
                            workers: int | None = None) -> VerificationRecord:
    """Evolve ``psi`` under the optimal Hamiltonian for ``tau_m`` and re-measure.

    The Hamiltonian points at the closest ``m``-separable state found by
    the optimizer.  The record holds the fidelity of the evolved state
    with that target and its own ``E_m``.  It is marked non-certified if
    the optimizer did not converge.  States that are already separable
    (``E_m`` at the clamp floor) are not evolved and their residual is
    their input ``E_m``.
    """
    report = tau_m(psi, m, omega, cfg, workers=workers)
    target = assemble(report.closest_separable)
    skipped = report.tau_internal == 0.0
    if not skipped:
        try:
            h = build_h_opt(psi, target, omega)
        except DegeneratePairError:
            skipped = True
    if skipped:
        evolved = psi
        residual = report.E_m
        converged = report.converged
    else:
        evolved = evolve_opt(h, report.tau_internal)
        residual, again = geometric_entanglement(evolved, m, cfg, workers)
        converged = report.converged and again.converged
    fidelity = abs(inner_product(target, evolved)) ** 2
    return VerificationRecord(
        m=m, E_m=report.E_m, tau_internal=report.tau_internal, omega=float(omega),
        target_fidelity=float(fidelity), residual_E_m=float(residual),
        certified=bool(converged), skipped=skipped, evolved=evolved)


def figure_data(omegas: Sequence[float], e_grid: Sequence[float]) -> np.ndarray:
    """Rows ``(E, omega, tau)`` for every omega, then every E.

    Returns an array of shape ``(len(omegas) * len(e_grid), 3)``.
    """
    omegas = np.asarray(omegas, dtype=float)
    e_grid = np.asarray(e_grid, dtype=float)
    if np.any(omegas <= 0):
        raise DomainError("all omega values must be positive")
    if np.any((e_grid < 0) | (e_grid > 1)):
        raise DomainError("all E values must lie in [0, 1]")
    om, ee = np.meshgrid(omegas, e_grid, indexing="ij")
    tau = np.arcsin(np.sqrt(ee)) / om
    return np.column_stack([ee.ravel(), om.ravel(), tau.ravel()])


def format_csv(rows: np.ndarray, header: str = "E,omega,tau") -> str:
    """CSV text, LF line endings, 12 digits after the mantissa point."""
    lines = [header]
    lines += [",".join(f"{x:.12e}" for x in row) for row in rows]
    return "\n".join(lines) + "\n"
