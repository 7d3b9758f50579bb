"""
Geometric measures of entanglement by alternating rank-1 optimization.

For a fixed partition the closest product state is found by sweeping
over the blocks and replacing each factor with the normalized partial
contraction of the target against all other factors.  Each update solves
its subproblem exactly, so the overlap never decreases.  The first
restart is seeded from leading singular vectors of the block-versus-rest
matricizations; the rest start from Haar-random factors.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError, ShapeError
from .partitions import enumerate_partitions
from .states import (DEGENERATE_TOL, Partition, ProductState, PureState,
                     _contract, block_tensor, random_vector)

CLAMP_FLOOR = 1e-9
MONOTONE_TOL = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 20
    max_iters: int = 1000
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True, eq=False)
class OverlapResult:
    """Best product-state overlap found for one partition.

    ``history`` holds the overlap after every sweep of the winning restart,
    starting with the value at initialization.
    """

    overlap: float
    product: ProductState
    partition: Partition
    iterations_used: int
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)


def default_workers() -> int:
    env = os.environ.get("QSLE_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _svd_seed(t: np.ndarray) -> list[np.ndarray]:
    vecs = []
    for j in range(t.ndim):
        mat = np.moveaxis(t, j, 0).reshape(t.shape[j], -1)
        u, _, _ = np.linalg.svd(mat, full_matrices=False)
        vecs.append(u[:, 0].copy())
    return vecs


def _sweeps(t, vecs, cfg, rng):
    """Alternating updates in place.  Returns (overlap, sweeps, converged, history)."""
    m = len(vecs)
    overlap = abs(np.vdot(vecs[0], _contract(t, vecs, 0)))
    history = [overlap]
    for it in range(1, cfg.max_iters + 1):
        prev = overlap
        reseeded = False
        for j in range(m):
            v = _contract(t, vecs, j)
            n = np.linalg.norm(v)
            if n < DEGENERATE_TOL:
                vecs[j] = random_vector(t.shape[j], rng)
                overlap = abs(np.vdot(vecs[j], v))
                reseeded = True
                continue
            vecs[j] = v / n
            overlap = n
        if not reseeded and overlap < prev - MONOTONE_TOL:
            raise ConsistencyError(f"overlap decreased from {prev!r} to {overlap!r}")
        history.append(overlap)
        if overlap - prev < cfg.tol:
            return overlap, it, True, history
    return overlap, cfg.max_iters, False, history


def _rng(cfg: OptConfig, partition_index: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, partition_index, restart])


def max_overlap_for_partition(psi: PureState, partition: Partition,
                              cfg: OptConfig = OptConfig(), *,
                              partition_index: int = 0) -> OverlapResult:
    """Maximize ``|<psi|phi>|`` over product states ``phi`` across ``partition``.

    Parameters
    ----------
    psi : PureState
    partition : Partition
        Must cover exactly the subsystems of ``psi``.
    cfg : OptConfig
    partition_index : int, optional
        Mixed into the random stream so that every partition handled by
        ``geometric_entanglement`` draws independent restarts.

    Returns
    -------
    OverlapResult
        Best result over all restarts.  ``converged`` is true if that
        restart met the tolerance before ``max_iters`` sweeps.
    """
    if partition.num_sites != psi.num_subsystems:
        raise ShapeError(
            f"partition covers {partition.num_sites} sites, state has {psi.num_subsystems}")
    t = block_tensor(psi, partition)
    best = None
    for r in range(cfg.restarts):
        rng = _rng(cfg, partition_index, r)
        if r == 0:
            vecs = _svd_seed(t)
        else:
            vecs = [random_vector(d, rng) for d in t.shape]
        overlap, iters, converged, history = _sweeps(t, vecs, cfg, rng)
        if best is None or overlap > best[0]:
            best = (overlap, vecs, iters, converged, history)
    overlap, vecs, iters, converged, history = best
    if overlap > 1.0 + CLAMP_FLOOR:
        raise ConsistencyError(f"overlap {overlap!r} exceeds 1")
    product = ProductState.from_vectors(partition, vecs, psi.dims)
    return OverlapResult(
        overlap=float(min(overlap, 1.0)),
        product=product,
        partition=partition,
        iterations_used=iters,
        converged=converged,
        history=tuple(float(h) for h in history),
    )


def entanglement_from_overlap(overlap: float) -> float:
    """``1 - overlap**2`` clamped to [0, 1].

    Values below zero by at most ``CLAMP_FLOOR`` are rounding noise and
    become zero; anything more negative means the overlap exceeded one
    and raises ConsistencyError.
    """
    e = 1.0 - overlap * overlap
    if e < 0.0:
        if e < -CLAMP_FLOOR:
            raise ConsistencyError(f"overlap {overlap!r} exceeds 1")
        return 0.0
    return min(e, 1.0)


def geometric_entanglement(psi: PureState, m: int, cfg: OptConfig = OptConfig(),
                           workers: int | None = None) -> tuple[float, OverlapResult]:
    """Geometric measure ``E_m`` of ``psi`` and the closest ``m``-separable state.

    The maximum is taken over every partition of the subsystems into
    exactly ``m`` blocks.  Coarser products are contained in these, so
    nothing is lost by not enumerating them.  Partitions are processed
    independently (in a thread pool when ``workers > 1``) and the first
    maximizer in canonical order is reported.
    """
    K = psi.num_subsystems
    if not 2 <= m <= K:
        raise DomainError(f"m must satisfy 2 <= m <= K={K}, got {m}")
    parts = enumerate_partitions(K, m)
    workers = default_workers() if workers is None else workers

    def work(item):
        idx, p = item
        return max_overlap_for_partition(psi, p, cfg, partition_index=idx)

    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, enumerate(parts)))
    else:
        results = [work(item) for item in enumerate(parts)]
    best = results[0]
    for res in results[1:]:
        if res.overlap > best.overlap + TIE_TOL:
            best = res
    return entanglement_from_overlap(best.overlap), best


def entanglement_hierarchy(psi: PureState, cfg: OptConfig = OptConfig(),
                           workers: int | None = None) -> dict[int, tuple[float, OverlapResult]]:
    """``E_m`` for every ``m`` from 2 to K."""
    return {m: geometric_entanglement(psi, m, cfg, workers)
            for m in range(2, psi.num_subsystems + 1)}
