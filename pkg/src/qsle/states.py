"""
Multipartite pure states, partitions of subsystems and product states.

Amplitudes are stored row-major over the multi-index ``(i_1, ..., i_K)``
with ``i_1`` varying slowest, i.e. the layout produced by
``np.reshape(tensor, -1)`` on a tensor of shape ``dims``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateContractionError, ShapeError, StateFileError

NORM_TOL = 1e-12
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on ``H_1 (x) ... (x) H_K``.

    Parameters
    ----------
    amplitudes : array_like of complex
        Flat amplitude vector, length ``prod(dims)``.
    dims : sequence of int
        Local dimensions, each at least 2.

    Inputs whose norm drifts from one by more than ``NORM_TOL`` are
    renormalized; a zero vector is rejected.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 0:
            raise ShapeError("a state needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ShapeError(f"subsystem dimensions must be >= 2, got {dims}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise ShapeError(
                f"{amps.size} amplitudes do not fit dims {dims} (need {math.prod(dims)})")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0.0:
            raise ShapeError("amplitude vector has zero or non-finite norm")
        if abs(norm - 1.0) > NORM_TOL:
            amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def __repr__(self):
        return f"PureState(dims={self.dims}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True)
class Partition:
    """Division of subsystems ``0..K-1`` into disjoint nonempty blocks.

    Blocks are stored canonically: indices ascending inside a block and
    blocks ordered by their smallest element.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = [tuple(sorted(int(i) for i in b)) for b in self.blocks]
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks {blocks} do not partition 0..{len(flat) - 1}")
        blocks.sort(key=lambda b: b[0])
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def num_sites(self) -> int:
        return sum(len(b) for b in self.blocks)

    def order(self) -> tuple[int, ...]:
        """Subsystem indices listed block after block."""
        return tuple(i for b in self.blocks for i in b)

    def block_dims(self, dims: Sequence[int]) -> tuple[int, ...]:
        """Composite dimension of every block."""
        return tuple(math.prod(dims[i] for i in b) for b in self.blocks)

    def __str__(self):
        return "|".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Inverse of ``str``: ``"{0,2}|{1}"`` -> ``Partition(((0, 2), (1,)))``."""
        blocks = re.findall(r"\{([^}]*)\}", text)
        return cls(tuple(tuple(int(s) for s in b.split(",")) for b in blocks))

    @classmethod
    def trivial(cls, num_sites: int) -> "Partition":
        """Every subsystem in its own block."""
        return cls(tuple((i,) for i in range(num_sites)))


@dataclass(frozen=True, eq=False)
class ProductState:
    """One factor per block of ``partition``.

    Factor ``i`` is a PureState whose ``dims`` are the dims of the members
    of block ``i`` in ascending order.
    """

    partition: Partition
    factors: tuple[PureState, ...] = field(default_factory=tuple)

    def __post_init__(self):
        factors = tuple(self.factors)
        if len(factors) != self.partition.num_blocks:
            raise ShapeError(
                f"{len(factors)} factors for a partition with {self.partition.num_blocks} blocks")
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self) -> tuple[int, ...]:
        out = [0] * self.partition.num_sites
        for block, f in zip(self.partition.blocks, self.factors):
            if len(f.dims) == len(block):
                for i, d in zip(block, f.dims):
                    out[i] = d
            elif len(block) == 1:
                out[block[0]] = f.dim
            else:
                raise ShapeError(
                    f"factor dims {f.dims} cannot be matched to block {block}")
        return tuple(out)

    @classmethod
    def from_vectors(cls, partition: Partition, vectors, dims: Sequence[int]) -> "ProductState":
        factors = tuple(
            PureState(v, tuple(dims[i] for i in b))
            for b, v in zip(partition.blocks, vectors))
        return cls(partition, factors)


def _check_same_dims(a: PureState, b: PureState):
    if a.dims != b.dims:
        raise ShapeError(f"dimension mismatch: {a.dims} vs {b.dims}")


def inner_product(a: PureState, b: PureState) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    _check_same_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def block_tensor(psi: PureState, partition: Partition) -> np.ndarray:
    """Reshape ``psi`` into a tensor with one axis per block of ``partition``."""
    if partition.num_sites != psi.num_subsystems:
        raise ShapeError(
            f"partition covers {partition.num_sites} sites, state has {psi.num_subsystems}")
    t = psi.tensor().transpose(partition.order())
    return t.reshape(partition.block_dims(psi.dims))


def _contract(t: np.ndarray, vectors: Sequence[np.ndarray], j: int) -> np.ndarray:
    # contract from the last axis down so earlier axis numbers stay valid
    for k in range(len(vectors) - 1, -1, -1):
        if k != j:
            t = np.tensordot(t, vectors[k].conj(), axes=([k], [0]))
    return t


def assemble(p: ProductState) -> PureState:
    """Tensor the factors of ``p`` and restore the original subsystem order."""
    dims = p.dims
    t = np.ones((), dtype=np.complex128)
    for f in p.factors:
        t = np.multiply.outer(t, f.amplitudes)
    order = p.partition.order()
    t = t.reshape([dims[i] for i in order])
    t = t.transpose(np.argsort(order))
    return PureState(t.reshape(-1), dims)


def contract_except(psi: PureState, p: ProductState, j: int) -> np.ndarray:
    """Contract ``psi`` with the conjugate of every factor but the ``j``-th.

    The returned vector ``v`` satisfies ``<assemble(p)|psi> = <f_j|v>``, so
    the factor maximizing the overlap with the others held fixed is
    ``v / |v|``.

    Raises
    ------
    DegenerateContractionError
        If ``|v| < 1e-14``; the caller should re-randomize factor ``j``.
    """
    if p.dims != psi.dims:
        raise ShapeError(f"product state dims {p.dims} differ from state dims {psi.dims}")
    if not 0 <= j < p.partition.num_blocks:
        raise IndexError(f"block index {j} out of range")
    t = block_tensor(psi, p.partition)
    v = _contract(t, [f.amplitudes for f in p.factors], j)
    if np.linalg.norm(v) < DEGENERATE_TOL:
        raise DegenerateContractionError(f"contraction for block {j} vanished")
    return v


def random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed unit vector in ``C^dim``."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_random_state(dims: Sequence[int], seed=None) -> PureState:
    """Haar-random pure state from normalized i.i.d. complex Gaussians.

    ``seed`` may be anything accepted by ``np.random.default_rng``,
    including an existing Generator.
    """
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in dims)
    return PureState(random_vector(math.prod(dims), rng), dims)


def basis_state(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    """Computational basis state ``|i_1 ... i_K>``."""
    dims = tuple(dims)
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(amps, dims)


def bell_state() -> PureState:
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def ghz_state(num_qubits: int = 3) -> PureState:
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return PureState(amps, (2,) * num_qubits)


def w_state(num_qubits: int = 3) -> PureState:
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[[2**k for k in range(num_qubits)]] = 1 / np.sqrt(num_qubits)
    return PureState(amps, (2,) * num_qubits)


def schmidt_state(coefficients: Sequence[float], dims: Sequence[int] | None = None) -> PureState:
    """Bipartite state ``sum_k c_k |k>|k>``.

    With ``dims`` omitted both sides have dimension ``len(coefficients)``.
    The largest squared coefficient after normalization equals
    ``1 - E_2`` of the result.
    """
    c = np.asarray(coefficients, dtype=float)
    if dims is None:
        dims = (c.size, c.size)
    da, db = dims
    if c.size > min(da, db):
        raise ShapeError(f"{c.size} Schmidt terms do not fit dims {tuple(dims)}")
    mat = np.zeros((da, db), dtype=np.complex128)
    mat[np.arange(c.size), np.arange(c.size)] = c
    return PureState(mat.reshape(-1), (da, db))


def state_with_entanglement(e: float, rank: int | None = None) -> PureState:
    """Two-qudit state whose bipartite geometric entanglement is ``e``.

    The largest Schmidt weight is ``1 - e`` and the remaining weight is
    spread evenly over just enough further terms to stay below it.
    """
    if not 0.0 <= e < 1.0:
        raise ValueError("e must lie in [0, 1)")
    top = 1.0 - e
    if rank is None:
        rank = max(1, math.ceil(1.0 / top - 1e-12))
    rest = (1.0 - top) / (rank - 1) if rank > 1 else 0.0
    if rest > top + 1e-15:
        raise ValueError(f"rank {rank} too small for e = {e}")
    weights = [top] + [rest] * (rank - 1)
    d = max(rank, 2)
    return schmidt_state(np.sqrt(weights), (d, d))


def state_to_json(psi: PureState) -> str:
    """Serialize to the state file format."""
    doc = {
        "dims": list(psi.dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }
    return json.dumps(doc)


def state_from_json(text: str) -> PureState:
    """Parse the state file format ``{"dims": [...], "amplitudes": [[re, im], ...]}``.

    Raises StateFileError naming the first invalid field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError("document", f"not valid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise StateFileError("document", "top level must be an object")
    if "dims" not in doc:
        raise StateFileError("dims", "missing")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims:
        raise StateFileError("dims", "must be a nonempty list of integers")
    for i, d in enumerate(dims):
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            raise StateFileError(f"dims[{i}]", f"must be an integer >= 2, got {d!r}")
    if "amplitudes" not in doc:
        raise StateFileError("amplitudes", "missing")
    raw = doc["amplitudes"]
    if not isinstance(raw, list):
        raise StateFileError("amplitudes", "must be a list of [re, im] pairs")
    if len(raw) != math.prod(dims):
        raise StateFileError(
            "amplitudes", f"expected {math.prod(dims)} entries, got {len(raw)}")
    amps = np.empty(len(raw), dtype=np.complex128)
    for i, pair in enumerate(raw):
        ok = (isinstance(pair, list) and len(pair) == 2
              and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair))
        if not ok or not all(math.isfinite(x) for x in pair):
            raise StateFileError(f"amplitudes[{i}]", f"must be a finite [re, im] pair, got {pair!r}")
        amps[i] = complex(pair[0], pair[1])
    if np.linalg.norm(amps) == 0.0:
        raise StateFileError("amplitudes", "zero vector cannot be normalized")
    return PureState(amps, tuple(dims))


def load_state(path) -> PureState:
    with open(path, encoding="utf-8") as fh:
        return state_from_json(fh.read())


def save_state(psi: PureState, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(state_to_json(psi))
        fh.write("\n")
