"""Greedy seeded sparse PCA and the baselines it is compared against.

``greedy_spca`` completes a seed to ``k`` indices by ranking every outside
candidate with the incremental score; ``sspca`` runs it from every seed of a
given size and keeps the completion with the best second score. Seed ``k*=0``
reduces to diagonal thresholding and ``k*=k`` to exhaustive search.

Tie-breaking is by ascending index when ranking candidates, and by the
lexicographically smallest set when two completions share the best score.
Seed enumeration is split into fixed colex rank chunks; chunk results are
reduced in chunk order, so the answer does not depend on ``worker_count``.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .exceptions import CtFailed, InvalidSeed, NoConvergence, TooManySeeds
from .linalg import DEFAULT_SETTINGS, EigSolveSettings, SymmetricMatrix, top_eigvec
from .scorers import (
    F_AVG,
    F_LAMBDA1,
    ScoreFunction,
    ScoreKind,
    as_index_set,
    linear_scores,
    score_set,
    score_sets,
)
from .subsets import colex_block, n_subsets

__all__ = [
    "GreedyVariant",
    "SspcaConfig",
    "SspcaStats",
    "SspcaResult",
    "SearchResult",
    "CtSelector",
    "CtResult",
    "greedy_spca",
    "sspca",
    "diagonal_thresholding",
    "covariance_thresholding",
    "default_thresholds",
    "exhaustive_search",
]

CHUNK_SIZE = 4096
_INT64_MAX = 2**63 - 1


class GreedyVariant(str, Enum):
    BULK = "BULK"  # rank all candidates once, take the top k - |seed|
    ITERATIVE = "ITERATIVE"  # add the best candidate, re-score, repeat


@dataclass(frozen=True)
class SspcaConfig:
    k: int
    k_star: int
    f1: ScoreFunction = F_AVG
    f2: ScoreFunction = F_LAMBDA1
    variant: GreedyVariant = GreedyVariant.BULK
    worker_count: int = 1
    chunk_size: int = CHUNK_SIZE

    def __post_init__(self):
        object.__setattr__(self, "f1", ScoreFunction.parse(self.f1))
        object.__setattr__(self, "f2", ScoreFunction.parse(self.f2))
        object.__setattr__(self, "variant", GreedyVariant(self.variant))
        if not 0 <= self.k_star <= self.k:
            raise ValueError(f"need 0 <= k_star <= k, got k_star={self.k_star}, k={self.k}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")


@dataclass
class SspcaStats:
    greedy_calls: int = 0
    f2_evaluations: int = 0
    chunks: int = 0
    elapsed_s: float = 0.0


class SspcaResult(NamedTuple):
    support: tuple[int, ...]
    f2_value: float
    stats: SspcaStats


class SearchResult(NamedTuple):
    support: tuple[int, ...]
    value: float
    evaluations: int


class _Completer:
    """Batched greedy completion against one dense copy of the matrix."""

    def __init__(self, m: SymmetricMatrix, f1: ScoreFunction, k: int, variant, settings):
        self.p = m.dim
        self.k = k
        self.f1 = ScoreFunction.parse(f1)
        self.variant = GreedyVariant(variant)
        self.settings = settings
        self.dense = m.dense()
        if self.f1.kind is ScoreKind.L1:
            self.base = np.abs(self.dense)
        else:
            self.base = self.dense
        diag = np.diagonal(self.base).copy()
        self.diag = None if self.f1.ignore_diagonal else diag

    def complete(self, seeds: np.ndarray) -> np.ndarray:
        seeds = np.asarray(seeds, dtype=np.int64)
        nb, ks = seeds.shape
        m = self.k - ks
        if m == 0:
            return np.sort(seeds, axis=1)
        if self.f1.kind is ScoreKind.LAMBDA1:
            picks = np.stack([self._lambda1_row(row, m) for row in seeds]) if nb else np.empty((0, m), np.int64)
        elif self.variant is GreedyVariant.BULK:
            picks = self._bulk_linear(seeds, m)
        else:
            picks = self._iterative_linear(seeds, m)
        return np.sort(np.concatenate([seeds, picks], axis=1), axis=1)

    def _bulk_linear(self, seeds, m):
        nb, ks = seeds.shape
        scores = linear_scores(self.base, self.diag, seeds)
        rows = np.arange(nb)[:, None]
        scores[rows, seeds] = -np.inf
        neg = -scores
        ncand = self.p - ks
        if m < ncand:
            part = np.argpartition(neg, (m - 1, m), axis=1)
            top = part[:, :m].copy()
            last = np.take_along_axis(neg, part[:, m - 1 : m], axis=1)[:, 0]
            nxt = np.take_along_axis(neg, part[:, m : m + 1], axis=1)[:, 0]
            tie = last == nxt
            if tie.any():
                # a tie straddles the cut: fall back to the stable full ranking
                top[tie] = np.argsort(neg[tie], axis=1, kind="stable")[:, :m]
            return top
        return np.argsort(neg, axis=1, kind="stable")[:, :m]

    def _iterative_linear(self, seeds, m):
        nb, ks = seeds.shape
        rows = np.arange(nb)
        acc = np.zeros((nb, self.p))
        for j in range(ks):
            acc += self.base[seeds[:, j]]
        chosen = np.zeros((nb, self.p), dtype=bool)
        chosen[rows[:, None], seeds] = True
        picks = np.empty((nb, m), dtype=np.int64)
        for r in range(m):
            a = acc * 2.0
            if self.diag is not None:
                a += self.diag
            a[chosen] = -np.inf
            j = np.argmax(a, axis=1)
            picks[:, r] = j
            chosen[rows, j] = True
            acc += self.base[j]
        return picks

    def _lambda1_row(self, seed, m):
        current = list(int(s) for s in seed)
        if self.variant is GreedyVariant.BULK:
            cand, scores = self._lambda1_scores(current)
            order = np.argsort(-scores, kind="stable")[:m]
            return cand[order]
        picked = []
        for _ in range(m):
            cand, scores = self._lambda1_scores(current)
            j = int(cand[int(np.argmax(scores))])
            picked.append(j)
            current.append(j)
        return np.asarray(picked, dtype=np.int64)

    def _lambda1_scores(self, current):
        mask = np.ones(self.p, dtype=bool)
        mask[current] = False
        cand = np.flatnonzero(mask)
        sets = np.empty((cand.size, len(current) + 1), dtype=np.int64)
        sets[:, :-1] = current
        sets[:, -1] = cand
        sets.sort(axis=1)
        return cand, score_sets(self.dense, sets, F_LAMBDA1, self.settings)


def _check_k(p: int, k: int):
    if not 0 <= k <= p:
        raise ValueError(f"k must satisfy 0 <= k <= p, got k={k}, p={p}")


def greedy_spca(
    m: SymmetricMatrix,
    f1: ScoreFunction,
    seed,
    k: int,
    variant: GreedyVariant = GreedyVariant.BULK,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
) -> tuple[int, ...]:
    """Greedily complete ``seed`` to a sorted set of exactly ``k`` indices."""
    seed = as_index_set(seed, m.dim, allow_empty=True)
    if len(seed) > k:
        raise InvalidSeed(f"seed has {len(seed)} indices but k={k}")
    _check_k(m.dim, k)
    comp = _Completer(m, f1, k, variant, settings)
    out = comp.complete(np.asarray(seed, dtype=np.int64).reshape(1, len(seed)))
    return tuple(int(i) for i in out[0])


def _better(val, s, best_val, best_s) -> bool:
    if best_s is None:
        return True
    return val > best_val or (val == best_val and s < best_s)


def _best_of(completions: np.ndarray, dense: np.ndarray, f2: ScoreFunction, settings):
    # np.unique sorts rows lexicographically, and argmax keeps the first maximum
    uniq = np.unique(completions, axis=0)
    vals = score_sets(dense, uniq, f2, settings)
    i = int(np.argmax(vals))
    return tuple(int(x) for x in uniq[i]), float(vals[i]), uniq.shape[0]


def sspca(
    m: SymmetricMatrix,
    cfg: SspcaConfig,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
) -> SspcaResult:
    """Run the greedy completion from every ``k_star``-subset and keep the best by ``f2``."""
    start = time.perf_counter()
    p = m.dim
    _check_k(p, cfg.k)
    total = n_subsets(p, cfg.k_star)
    if total > _INT64_MAX:
        raise TooManySeeds(total)
    comp = _Completer(m, cfg.f1, cfg.k, cfg.variant, settings)
    dense = comp.dense
    bounds = [(lo, min(total, lo + cfg.chunk_size)) for lo in range(0, total, cfg.chunk_size)]

    def run(bound):
        lo, hi = bound
        seeds = colex_block(lo, hi, p, cfg.k_star)
        s, val, nuniq = _best_of(comp.complete(seeds), dense, cfg.f2, settings)
        return s, val, hi - lo, nuniq

    if cfg.worker_count > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            results = list(pool.map(run, bounds))
    else:
        results = [run(b) for b in bounds]

    stats = SspcaStats(chunks=len(bounds))
    best_s, best_val = None, -np.inf
    for s, val, calls, nuniq in results:
        stats.greedy_calls += calls
        stats.f2_evaluations += nuniq
        if _better(val, s, best_val, best_s):
            best_s, best_val = s, val
    stats.elapsed_s = time.perf_counter() - start
    return SspcaResult(best_s, best_val, stats)


def diagonal_thresholding(m: SymmetricMatrix, k: int) -> tuple[int, ...]:
    """Indices of the ``k`` largest diagonal entries (ties by ascending index)."""
    _check_k(m.dim, k)
    order = np.argsort(-m.diagonal(), kind="stable")[:k]
    return tuple(int(i) for i in np.sort(order))


def exhaustive_search(
    m: SymmetricMatrix,
    k: int,
    f2: ScoreFunction = F_LAMBDA1,
    budget: int | None = None,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
    chunk_size: int = CHUNK_SIZE,
) -> SearchResult:
    """Best ``k``-subset by ``f2`` among the first ``budget`` subsets in colex order.

    Without a budget every subset is scored, which solves the support search
    exactly (feasible only for small ``C(p, k)``).
    """
    p = m.dim
    _check_k(p, k)
    if k == 0:
        raise ValueError("exhaustive search needs k >= 1")
    total = n_subsets(p, k)
    if budget is not None:
        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")
        total = min(total, int(budget))
    dense = m.dense()
    best_s, best_val = None, -np.inf
    for lo in range(0, total, chunk_size):
        hi = min(total, lo + chunk_size)
        s, val, _ = _best_of(colex_block(lo, hi, p, k), dense, f2, settings)
        if _better(val, s, best_val, best_s):
            best_s, best_val = s, val
    return SearchResult(best_s, best_val, total)


class CtSelector(str, Enum):
    ORACLE = "ORACLE"  # benchmark only: picks the candidate closest to the true support
    UNSUPERVISED = "UNSUPERVISED"  # picks the candidate with the largest lambda_1


@dataclass
class CtResult:
    thresholds: np.ndarray
    candidates: list  # per threshold: sorted tuple, or None when the eigensolver failed
    scores: list  # selection score per threshold (None when skipped)
    failures: list[int] = field(default_factory=list)
    selected: tuple[int, ...] = ()
    selected_threshold: float = float("nan")


def default_thresholds(m: SymmetricMatrix, count: int = 50) -> np.ndarray:
    """``count`` equally spaced empirical percentiles (100/count %, ..., 100 %) of |off-diagonal|."""
    off = np.abs(m.off_diagonal())
    if off.size == 0:
        return np.zeros(1)
    q = np.arange(1, count + 1) * (100.0 / count)
    return np.percentile(off, q)


def _top_abs(v: np.ndarray, k: int) -> tuple[int, ...]:
    order = np.argsort(-np.abs(v), kind="stable")[:k]
    return tuple(int(i) for i in np.sort(order))


def covariance_thresholding(
    m: SymmetricMatrix,
    k: int,
    thresholds=None,
    selector: CtSelector = CtSelector.UNSUPERVISED,
    truth=None,
    settings: EigSolveSettings = DEFAULT_SETTINGS,
) -> CtResult:
    """Hard-threshold the off-diagonal, take the top eigenvector, keep its ``k`` largest entries.

    One candidate per threshold. ``selector`` decides which candidate is the
    output; ``ORACLE`` needs ``truth`` and is meant for benchmarks only.
    """
    _check_k(m.dim, k)
    selector = CtSelector(selector)
    if selector is CtSelector.ORACLE:
        if truth is None:
            raise ValueError("the ORACLE selector needs the true support")
        truth_set = set(as_index_set(truth, m.dim))
    thresholds = default_thresholds(m) if thresholds is None else np.asarray(thresholds, dtype=float)
    if thresholds.size == 0:
        raise ValueError("thresholds must be non-empty")

    result = CtResult(thresholds=thresholds, candidates=[], scores=[])
    best_i, best_score = None, -np.inf
    for i, t in enumerate(thresholds):
        mt = m.hard_threshold(float(t))
        if not np.any(mt.off_diagonal()):
            cand = diagonal_thresholding(mt, k)
        else:
            try:
                cand = _top_abs(top_eigvec(mt, settings), k)
            except NoConvergence:
                result.failures.append(i)
                result.candidates.append(None)
                result.scores.append(None)
                continue
        if selector is CtSelector.ORACLE:
            score = len(truth_set.intersection(cand)) / len(truth_set)
        else:
            score = score_set(m, cand, F_LAMBDA1, settings)
        result.candidates.append(cand)
        result.scores.append(score)
        if score > best_score:
            best_i, best_score = i, score
    if best_i is None:
        raise CtFailed(f"power iteration failed for all {thresholds.size} thresholds")
    result.selected = result.candidates[best_i]
    result.selected_threshold = float(thresholds[best_i])
    return result
