"""Set scores on principal submatrices and the incremental greedy score.

Three set functions are supported:

* ``F_AVG``: ``(1/|S|) * sum_{i,j in S} M[i, j]`` (full |S|^2 grid).
* ``F_L1``: the same with ``|M[i, j]|``.
* ``F_LAMBDA1``: the largest eigenvalue of ``M[S, S]``.

For a seed ``S`` and candidate ``i`` the average score of ``S + {i}`` expands as
``(|S| f_avg(S) + 2 c_i + M[i, i]) / (|S| + 1)`` with ``c_i = sum_{s in S} M[i, s]``.
Only ``2 c_i + M[i, i]`` depends on ``i``, so that is what the greedy step ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import EmptySet, InvalidIndex
from .linalg import DEFAULT_SETTINGS, EigSolveSettings, SymmetricMatrix, lambda_max_batch

__all__ = [
    "ScoreKind",
    "ScoreFunction",
    "F_AVG",
    "F_L1",
    "F_LAMBDA1",
    "as_index_set",
    "f_avg",
    "f_l1",
    "f_lambda1",
    "score_set",
    "score_sets",
    "incremental_scores",
]


class ScoreKind(str, Enum):
    AVG = "F_AVG"
    L1 = "F_L1"
    LAMBDA1 = "F_LAMBDA1"


@dataclass(frozen=True)
class ScoreFunction:
    """A set score plus the ``ignore_diagonal`` flag.

    ``ignore_diagonal`` only changes incremental scoring for ``F_AVG`` and
    ``F_L1``: the candidate's own variance term is dropped.
    """

    kind: ScoreKind
    ignore_diagonal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ScoreKind(self.kind))

    @classmethod
    def parse(cls, value, ignore_diagonal: bool | None = None) -> "ScoreFunction":
        if isinstance(value, ScoreFunction):
            if ignore_diagonal is None:
                return value
            return cls(value.kind, ignore_diagonal)
        return cls(ScoreKind(str(value).upper()), bool(ignore_diagonal))

    def __str__(self):
        return self.kind.value + ("[nodiag]" if self.ignore_diagonal else "")


F_AVG = ScoreFunction(ScoreKind.AVG)
F_L1 = ScoreFunction(ScoreKind.L1)
F_LAMBDA1 = ScoreFunction(ScoreKind.LAMBDA1)


def as_index_set(indices, p: int, allow_empty: bool = False) -> tuple[int, ...]:
    """Validate and normalize to a sorted, duplicate-free tuple of ints in [0, p)."""
    idx = sorted({int(i) for i in indices})
    if not idx and not allow_empty:
        raise EmptySet("index set is empty")
    if idx and (idx[0] < 0 or idx[-1] >= p):
        raise InvalidIndex(f"indices must lie in [0, {p}): {idx}")
    return tuple(idx)


def _submatrices(dense: np.ndarray, sets: np.ndarray) -> np.ndarray:
    # (B, k) index array -> (B, k, k) stack of principal submatrices
    return dense[sets[:, :, None], sets[:, None, :]]


def score_sets(
    dense: np.ndarray,
    sets,
    score: ScoreFunction,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
) -> np.ndarray:
    """Score every row of a ``(B, k)`` index array against a dense symmetric array."""
    sets = np.asarray(sets, dtype=np.int64)
    if sets.ndim != 2 or sets.shape[1] == 0:
        raise EmptySet("each set needs at least one index")
    sub = _submatrices(dense, sets)
    kind = ScoreFunction.parse(score).kind
    if kind is ScoreKind.LAMBDA1:
        return lambda_max_batch(sub, settings)
    if kind is ScoreKind.L1:
        sub = np.abs(sub)
    return sub.sum(axis=(1, 2)) / sets.shape[1]


def score_set(m: SymmetricMatrix, s, score: ScoreFunction, settings=DEFAULT_SETTINGS) -> float:
    idx = np.asarray(as_index_set(s, m.dim), dtype=np.int64)
    block = m.rows(idx)[:, idx]
    return float(score_sets(block, np.arange(idx.size)[None], score, settings)[0])


def f_avg(m: SymmetricMatrix, s) -> float:
    """Average row sum of the principal submatrix on ``s``."""
    return score_set(m, s, F_AVG)


def f_l1(m: SymmetricMatrix, s) -> float:
    """Average row l1-norm of the principal submatrix on ``s``."""
    return score_set(m, s, F_L1)


def f_lambda1(m: SymmetricMatrix, s, settings: EigSolveSettings = DEFAULT_SETTINGS) -> float:
    """Largest eigenvalue of the principal submatrix on ``s``."""
    return score_set(m, s, F_LAMBDA1, settings)


def linear_scores(base: np.ndarray, diag: np.ndarray | None, seeds: np.ndarray) -> np.ndarray:
    """``2 * sum_{s in seed} base[s, :] + diag`` for every row of a ``(B, k*)`` seed array.

    ``base`` is the dense matrix (``F_AVG``) or its absolute value (``F_L1``);
    pass ``diag=None`` to drop the variance term. Seed entries are not masked.
    """
    nb, ks = seeds.shape
    acc = np.zeros((nb, base.shape[1]))
    for j in range(ks):
        acc += base[seeds[:, j]]
    acc *= 2.0
    if diag is not None:
        acc += diag
    return acc


def incremental_scores(
    m: SymmetricMatrix,
    seed,
    f1: ScoreFunction,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
):
    """Greedy scores ``a_i`` for every candidate ``i`` outside ``seed``.

    Returns ``(candidates, scores)`` with candidates in ascending order. For
    ``F_AVG`` and ``F_L1`` the seed-only constant is dropped, so only the
    ordering matches ``f(seed + {i})``; for ``F_LAMBDA1`` the scores are the
    full eigenvalues.
    """
    f1 = ScoreFunction.parse(f1)
    seed = np.asarray(as_index_set(seed, m.dim, allow_empty=True), dtype=np.int64)
    mask = np.ones(m.dim, dtype=bool)
    mask[seed] = False
    candidates = np.flatnonzero(mask)
    if f1.kind is ScoreKind.LAMBDA1:
        if candidates.size == 0:
            return candidates, np.empty(0)
        sets = np.empty((candidates.size, seed.size + 1), dtype=np.int64)
        sets[:, :-1] = seed
        sets[:, -1] = candidates
        sets.sort(axis=1)
        return candidates, score_sets(m.dense(), sets, F_LAMBDA1, settings)
    rows = m.rows(seed)
    diag = m.diagonal()
    if f1.kind is ScoreKind.L1:
        rows = np.abs(rows)
        diag = np.abs(diag)
    acc = linear_scores(rows, None if f1.ignore_diagonal else diag, np.arange(seed.size)[None])
    return candidates, acc[0, candidates]
