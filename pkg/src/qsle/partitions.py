"""Set partitions of ``{0, ..., K-1}`` via restricted growth strings."""
from __future__ import annotations

import warnings

from .errors import DomainError
from .states import Partition

MAX_SITES = 12
WARN_SITES = 8


def _growth_strings(n, m):
    # a[i] <= 1 + max(a[:i]); lexicographic order, exactly m distinct labels
    a = [0] * n

    def rec(i, top):
        if n - i < m - 1 - top:
            return
        if i == n:
            if top == m - 1:
                yield tuple(a)
            return
        for v in range(min(top + 1, m - 1) + 1):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    if n == 0:
        return
    yield from rec(1, 0)


def partition_from_growth_string(rgs) -> Partition:
    blocks = {}
    for i, label in enumerate(rgs):
        blocks.setdefault(label, []).append(i)
    return Partition(tuple(tuple(blocks[k]) for k in sorted(blocks)))


def enumerate_partitions(num_sites: int, num_blocks: int) -> list[Partition]:
    """All partitions of ``num_sites`` subsystems into exactly ``num_blocks`` blocks.

    The order is lexicographic in the restricted growth string encoding,
    so for three sites and two blocks the result is
    ``{0,1}|{2}``, ``{0,2}|{1}``, ``{0}|{1,2}``.
    """
    if not 1 <= num_blocks <= num_sites:
        raise DomainError(
            f"need 1 <= m <= K, got K={num_sites}, m={num_blocks}")
    if num_sites > MAX_SITES:
        raise DomainError(f"K={num_sites} exceeds the supported maximum of {MAX_SITES}")
    if num_sites > WARN_SITES:
        warnings.warn(
            f"enumerating partitions of {num_sites} sites; the count grows like the Bell numbers",
            stacklevel=2)
    return [partition_from_growth_string(s) for s in _growth_strings(num_sites, num_blocks)]
