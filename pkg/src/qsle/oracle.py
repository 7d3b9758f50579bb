"""
Brute-force reference values for the maximal product-state overlap.

Two routes that share no code with the optimizer:

* ``schmidt_overlap`` is exact for bipartitions: the largest singular
  value of the block-A by block-B amplitude matrix.
* ``brute_force_overlap`` scans a grid of generalized spherical angles
  for every block except the largest one, solves that last block in
  closed form (the norm of the partial contraction), then polishes the
  best grid point with a fixed number of alternating sweeps.  The
  result is the overlap of an explicit product state and therefore a
  lower bound on the true maximum.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DomainError, OracleScaleError
from .partitions import enumerate_partitions
from .states import Partition, PureState

MAX_BLOCK_DIM = 4
MAX_GRID_POINTS = 5 * 10**7
REFINE_SWEEPS = 100


def default_resolution(partition: Partition, dims) -> int:
    """64 for all-qubit blocks, 32 once any block has odd or larger dimension."""
    return 64 if all(d == 2 for d in partition.block_dims(dims)) else 32


def _ordered_matrix(psi: PureState, rows):
    """Amplitudes reshaped to (prod dims[rows], rest) by explicit index loops."""
    K = psi.num_subsystems
    rest = [i for i in range(K) if i not in rows]
    r_dim = math.prod(psi.dims[i] for i in rows)
    c_dim = math.prod(psi.dims[i] for i in rest)
    mat = np.zeros((r_dim, c_dim), dtype=np.complex128)
    for flat, multi in enumerate(itertools.product(*(range(d) for d in psi.dims))):
        r = c = 0
        for i in rows:
            r = r * psi.dims[i] + multi[i]
        for i in rest:
            c = c * psi.dims[i] + multi[i]
        mat[r, c] = psi.amplitudes[flat]
    return mat


def schmidt_overlap(psi: PureState, bipartition: Partition) -> float:
    """Largest Schmidt coefficient of ``psi`` across a two-block partition."""
    if bipartition.num_blocks != 2:
        raise DomainError(f"need exactly 2 blocks, got {bipartition.num_blocks}")
    mat = _ordered_matrix(psi, list(bipartition.blocks[0]))
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def sphere_grid(d: int, resolution: int) -> np.ndarray:
    """Unit vectors in ``C^d`` on a grid of ``2d - 2`` angles.

    Moduli come from ``d - 1`` hyperspherical angles in ``[0, pi/2]``
    (endpoints included, so basis vectors are on the grid) and the
    relative phases of components ``1..d-1`` from ``resolution`` points in
    ``[0, 2 pi)``.  The phase of component 0 is fixed to zero.
    """
    theta = np.linspace(0.0, np.pi / 2, resolution)
    phase = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    thetas = np.array(list(itertools.product(theta, repeat=d - 1))).reshape(-1, d - 1)
    mods = np.ones((thetas.shape[0], d))
    for k in range(d - 1):
        mods[:, k] *= np.cos(thetas[:, k])
        mods[:, k + 1:] *= np.sin(thetas[:, k])[:, None]
    phases = np.array(list(itertools.product(phase, repeat=d - 1))).reshape(-1, d - 1)
    phases = np.exp(1j * np.hstack([np.zeros((phases.shape[0], 1)), phases]))
    vecs = mods[:, None, :] * phases[None, :, :]
    vecs = vecs.reshape(-1, d)
    # drop duplicates produced where a modulus vanishes
    keys = np.round(vecs, 12)
    _, idx = np.unique(keys.view(np.float64).reshape(len(vecs), -1), axis=0, return_index=True)
    return vecs[np.sort(idx)]


def _block_tensor(psi: PureState, partition: Partition):
    dims = psi.dims
    shape = [math.prod(dims[i] for i in b) for b in partition.blocks]
    t = np.empty(shape, dtype=np.complex128)
    for flat, multi in enumerate(itertools.product(*(range(d) for d in dims))):
        idx = []
        for b in partition.blocks:
            j = 0
            for i in b:
                j = j * dims[i] + multi[i]
            idx.append(j)
        t[tuple(idx)] = psi.amplitudes[flat]
    return t


def _contract_all_but(t, vecs, j):
    letters = "abcdefghijklmnop"
    m = t.ndim
    spec = letters[:m]
    operands = [t]
    subs = [spec]
    for k in range(m):
        if k != j:
            operands.append(vecs[k].conj())
            subs.append(letters[k])
    return np.einsum(",".join(subs) + "->" + letters[j], *operands)


def brute_force_overlap(psi: PureState, partition: Partition, resolution: int | None = None,
                        return_factors: bool = False):
    """Grid-and-refine estimate of ``max |<psi|phi>|`` over product ``phi``.

    Parameters
    ----------
    psi : PureState
    partition : Partition
        Every block must have composite dimension at most 4.
    resolution : int, optional
        Points per angle, at least 16.  Defaults to ``default_resolution``.
    return_factors : bool
        Also return the maximizing factor vectors, one per block.
    """
    dims = psi.dims
    bdims = partition.block_dims(dims)
    if max(bdims) > MAX_BLOCK_DIM:
        raise OracleScaleError(f"block dimensions {bdims} exceed {MAX_BLOCK_DIM}")
    if resolution is None:
        resolution = default_resolution(partition, dims)
    if resolution < 16:
        raise DomainError("resolution must be at least 16")
    t = _block_tensor(psi, partition)
    m = t.ndim
    if m == 1:
        vecs = [t / np.linalg.norm(t)]
        return (1.0, vecs) if return_factors else 1.0

    free = int(np.argmax(bdims))
    gridded = [k for k in range(m) if k != free]
    grids = {k: sphere_grid(bdims[k], resolution) for k in gridded}
    total = math.prod(len(grids[k]) for k in gridded)
    if total > MAX_GRID_POINTS:
        raise OracleScaleError(f"grid of {total} points is too large")

    # move the free block last, then contract gridded blocks one by one
    tt = np.moveaxis(t, free, -1)
    first, rest = gridded[0], gridded[1:]
    best_val, best_idx = -1.0, None
    chunk = max(1, MAX_GRID_POINTS // 50 // max(1, total // len(grids[first])))
    g0 = grids[first]
    for s in range(0, len(g0), chunk):
        block = np.tensordot(g0[s:s + chunk].conj(), tt, axes=([1], [0]))
        # block axes: (chunk, candidates so far..., remaining block dims..., free)
        for i, k in enumerate(rest, start=1):
            block = np.tensordot(block, grids[k].conj(), axes=([i], [1]))
            block = np.moveaxis(block, -1, i)
        vals = np.linalg.norm(block, axis=-1)
        flat = int(np.argmax(vals))
        if vals.flat[flat] > best_val:
            best_val = float(vals.flat[flat])
            best_idx = np.unravel_index(flat, vals.shape)
            best_idx = (best_idx[0] + s,) + tuple(best_idx[1:])

    vecs = [None] * m
    vecs[first] = g0[best_idx[0]]
    for pos, k in enumerate(rest):
        vecs[k] = grids[k][best_idx[pos + 1]]
    v = _contract_all_but(t, vecs, free)
    vecs[free] = v / np.linalg.norm(v)

    for _ in range(REFINE_SWEEPS):
        for j in range(m):
            v = _contract_all_but(t, vecs, j)
            n = np.linalg.norm(v)
            if n > 0:
                vecs[j] = v / n
    val = abs(np.vdot(vecs[0], _contract_all_but(t, vecs, 0)))
    val = min(float(val), 1.0)
    return (val, vecs) if return_factors else val


def oracle_entanglement(psi: PureState, m: int, resolution: int | None = None) -> float:
    """``E_m`` from the oracles: exact SVD when m = 2, grid search otherwise."""
    parts = enumerate_partitions(psi.num_subsystems, m)
    if m == 2:
        best = max(schmidt_overlap(psi, p) for p in parts)
    else:
        best = max(brute_force_overlap(psi, p, resolution) for p in parts)
    return max(0.0, 1.0 - best * best)
