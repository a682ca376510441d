"""Colexicographic ranking of k-subsets of {0, ..., p-1}.

In colex order sets are compared by their largest element first, so the rank
of a sorted subset ``(c_0 < c_1 < ... < c_{k-1})`` is ``sum_j C(c_j, j + 1)``.
Ranks index seed blocks when the enumeration is split into chunks.
"""

from __future__ import annotations

from math import comb

import numpy as np

__all__ = ["rank_subset", "unrank_subset", "colex_block", "n_subsets"]


def n_subsets(p: int, k: int) -> int:
    return comb(p, k)


def rank_subset(s, p: int | None = None) -> int:
    """Colex rank of a subset (any iterable of distinct non-negative ints)."""
    idx = sorted(int(c) for c in s)
    if len(set(idx)) != len(idx) or (idx and idx[0] < 0):
        raise ValueError(f"not a set of non-negative indices: {list(s)}")
    if p is not None and idx and idx[-1] >= p:
        raise ValueError(f"index {idx[-1]} out of range for p={p}")
    return sum(comb(c, j + 1) for j, c in enumerate(idx))


def unrank_subset(rank: int, p: int, k: int) -> tuple[int, ...]:
    """The k-subset of {0, ..., p-1} with the given colex rank."""
    total = comb(p, k)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total}) for C({p}, {k})")
    out = [0] * k
    n = p
    r = rank
    for j in range(k, 0, -1):
        # largest c < n with C(c, j) <= r
        n -= 1
        while comb(n, j) > r:
            n -= 1
        out[j - 1] = n
        r -= comb(n, j)
    return tuple(out)


def colex_block(lo: int, hi: int, p: int, k: int) -> np.ndarray:
    """All k-subsets with colex rank in ``[lo, hi)`` as a ``(hi - lo, k)`` int64 array."""
    count = hi - lo
    out = np.empty((max(count, 0), k), dtype=np.int64)
    if count <= 0:
        return out
    if k == 0:
        return out
    cur = list(unrank_subset(lo, p, k))
    out[0] = cur
    for row in range(1, count):
        # colex successor: bump the lowest position that can move, reset those below it
        j = 0
        while j < k - 1 and cur[j] + 1 == cur[j + 1]:
            j += 1
        cur[j] += 1
        for i in range(j):
            cur[i] = i
        out[row] = cur
    return out
