"""Recovery metrics and empirical audits of the recovery guarantees.

The guarantees are asymptotic and carry unspecified constants, so the audits
report what they observe (fractions, violation counts) instead of failing.
``log`` is the natural logarithm throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, is_dataclass

import numpy as np

from .algorithms import GreedyVariant, greedy_spca
from .linalg import DEFAULT_SETTINGS, SymmetricMatrix
from .scorers import F_LAMBDA1, ScoreFunction, as_index_set, score_sets
from .subsets import colex_block, n_subsets

__all__ = [
    "success_rate",
    "k_star_bound",
    "RegimeThresholds",
    "regime_thresholds",
    "SpectralInterval",
    "spectral_interval",
    "xi_formula",
    "GoldenSeedReport",
    "golden_seed_audit",
    "DeltaAudit",
    "SpectralAuditReport",
    "spectral_interval_audit",
    "SeparabilityReport",
    "separability_audit",
    "report_to_json",
    "DEFAULT_SEED_CONSTANT",
    "DEFAULT_SPECTRAL_CONSTANT",
]

# Reference constant for the seed-size schedule used in the golden-seed proof.
DEFAULT_SEED_CONSTANT = 1800.0
# Constant in the spectral half-width; demos/calibrate_spectral_constant.py measures the margin.
DEFAULT_SPECTRAL_CONSTANT = 3.0


def success_rate(found, truth) -> float:
    """Fraction of the true support recovered: ``|found & truth| / |truth|``."""
    truth = set(int(i) for i in truth)
    if not truth:
        raise ValueError("truth must contain at least one index")
    return len(truth.intersection(int(i) for i in found)) / len(truth)


def k_star_bound(n: int, k: int, beta: float, C: float = DEFAULT_SEED_CONSTANT) -> int:
    """Seed size ``floor(C k^2 log n / (beta^2 n))`` clamped to ``[0, k]``."""
    if n < 2 or beta <= 0 or C <= 0:
        raise ValueError("need n >= 2, beta > 0 and C > 0")
    raw = math.floor(C * k * k * math.log(n) / (beta * beta * n))
    return int(min(max(raw, 0), k))


@dataclass(frozen=True)
class RegimeThresholds:
    """Order-of-magnitude regime boundaries (asymptotic constants set to 1)."""

    k_comp: float
    k_info: float
    alpha: float


def regime_thresholds(n: int, p: int, beta: float, k: int | None = None) -> RegimeThresholds:
    """``k_comp = sqrt(beta^2 n)``, ``k_info = beta^2 n / log p``, ``alpha = (1+beta) k / k_info``."""
    k_comp = math.sqrt(beta * beta * n)
    k_info = beta * beta * n / math.log(p)
    alpha = float("nan") if k is None else (1 + beta) * k / k_info
    return RegimeThresholds(k_comp, k_info, alpha)


@dataclass(frozen=True)
class SpectralInterval:
    lo: float
    hi: float
    delta: float
    gamma: float
    constant_C: float


def spectral_interval(delta: float, beta: float, k: int, n: int, constant_C: float = DEFAULT_SPECTRAL_CONSTANT) -> SpectralInterval:
    """Window ``[1 + delta beta - G, 1 + delta beta + G + beta / k]`` with
    ``G = C sqrt((1 + beta) k log n / n)``."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    gamma = constant_C * math.sqrt((1 + beta) * k * math.log(n) / n)
    center = 1 + delta * beta
    return SpectralInterval(center - gamma, center + gamma + beta / k, delta, gamma, constant_C)


def xi_formula(k: int, n: int, p: int, beta: float, c: float = 1.0) -> float:
    """Separability gap ``1/k + c sqrt((1 + beta) k / k_info)`` with an explicit constant ``c``."""
    k_info = regime_thresholds(n, p, beta).k_info
    return 1.0 / k + c * math.sqrt((1 + beta) * k / k_info)


@dataclass
class GoldenSeedReport:
    fraction: float  # share of audited seeds whose completion is exactly the truth
    best_success: float
    mean_success: float
    seeds_audited: int
    exhaustive: bool


def golden_seed_audit(
    m: SymmetricMatrix,
    truth,
    f1: ScoreFunction,
    k: int,
    k_star: int,
    variant: GreedyVariant = GreedyVariant.BULK,
    trials: int = 100,
    rng=None,
) -> GoldenSeedReport:
    """Complete seeds drawn from inside the true support and measure recovery.

    Every ``k_star``-subset of ``truth`` is audited when there are at most
    ``trials`` of them; otherwise ``trials`` random ones are.
    """
    truth = np.asarray(as_index_set(truth, m.dim), dtype=np.int64)
    if truth.size != k:
        raise ValueError(f"|truth| = {truth.size} but k = {k}")
    if not 0 <= k_star <= k:
        raise ValueError(f"need 0 <= k_star <= k, got {k_star}")
    total = n_subsets(k, k_star)
    if total <= trials:
        local = colex_block(0, total, k, k_star)
        exhaustive = True
    else:
        rng = np.random.default_rng(rng)
        local = np.stack([np.sort(rng.choice(k, size=k_star, replace=False)) for _ in range(trials)])
        exhaustive = False
    rates = []
    for row in local:
        found = greedy_spca(m, f1, truth[row], k, variant)
        rates.append(success_rate(found, truth))
    rates = np.asarray(rates)
    return GoldenSeedReport(
        fraction=float(np.mean(rates == 1.0)),
        best_success=float(rates.max()),
        mean_success=float(rates.mean()),
        seeds_audited=int(rates.size),
        exhaustive=exhaustive,
    )


def _sample_with_overlap(rng, truth: np.ndarray, outside: np.ndarray, k: int, overlap: int) -> np.ndarray:
    inner = rng.choice(truth, size=overlap, replace=False)
    outer = rng.choice(outside, size=k - overlap, replace=False)
    return np.sort(np.concatenate([inner, outer]))


@dataclass
class DeltaAudit:
    delta: float
    overlap: int
    lo: float
    hi: float
    samples: int
    min: float
    max: float
    mean: float
    violations: int


@dataclass
class SpectralAuditReport:
    constant_C: float
    entries: list[DeltaAudit]
    skipped: list[str] = field(default_factory=list)

    @property
    def total_samples(self) -> int:
        return sum(e.samples for e in self.entries)

    @property
    def total_violations(self) -> int:
        return sum(e.violations for e in self.entries)

    def by_delta(self, delta: float) -> DeltaAudit:
        for e in self.entries:
            if abs(e.delta - delta) < 1e-12:
                return e
        raise KeyError(delta)


def spectral_interval_audit(
    m: SymmetricMatrix,
    truth,
    n: int,
    beta: float,
    constant_C: float = DEFAULT_SPECTRAL_CONSTANT,
    samples_per_delta: int = 200,
    deltas=None,
    rng=None,
) -> SpectralAuditReport:
    """Sample size-k sets with a fixed overlap with ``truth`` and check where lambda_1 lands.

    ``deltas`` defaults to every feasible overlap fraction ``j / k``. A
    requested delta with ``delta * k`` not an integer is skipped and noted.
    """
    rng = np.random.default_rng(rng)
    truth = np.asarray(as_index_set(truth, m.dim), dtype=np.int64)
    k = truth.size
    outside = np.setdiff1d(np.arange(m.dim), truth)
    if deltas is None:
        deltas = [j / k for j in range(k + 1)]
    dense = m.dense()
    report = SpectralAuditReport(constant_C=constant_C, entries=[])
    for delta in deltas:
        overlap = round(delta * k)
        if abs(overlap - delta * k) > 1e-9 or not 0 <= overlap <= k:
            report.skipped.append(f"delta={delta}: delta*k={delta * k} is not a feasible overlap")
            continue
        if k - overlap > outside.size:
            report.skipped.append(f"delta={delta}: not enough indices outside the support")
            continue
        sets = np.stack([_sample_with_overlap(rng, truth, outside, k, overlap) for _ in range(samples_per_delta)])
        lam = score_sets(dense, sets, F_LAMBDA1)
        window = spectral_interval(overlap / k, beta, k, n, constant_C)
        bad = int(np.sum((lam < window.lo) | (lam > window.hi)))
        report.entries.append(
            DeltaAudit(
                delta=overlap / k,
                overlap=overlap,
                lo=window.lo,
                hi=window.hi,
                samples=int(lam.size),
                min=float(lam.min()),
                max=float(lam.max()),
                mean=float(lam.mean()),
                violations=bad,
            )
        )
    return report


@dataclass
class SeparabilityReport:
    xi: float
    pairs_tested: int
    violations: list  # (I, J, lambda_1(I), lambda_1(J)) with lambda_1(I) <= lambda_1(J)

    @property
    def violation_rate(self) -> float:
        return len(self.violations) / self.pairs_tested if self.pairs_tested else 0.0


def separability_audit(
    m: SymmetricMatrix,
    truth,
    xi: float,
    pair_samples: int = 500,
    inclusive: bool = False,
    rng=None,
) -> SeparabilityReport:
    """Sample pairs ``(I, J)`` whose overlaps with ``truth`` differ by more than ``xi k``
    (at least ``xi k`` when ``inclusive``) and record pairs where lambda_1 fails to order them.

    The overlap pair ``(|I & truth|, |J & truth|)`` is drawn uniformly from the
    qualifying ones, then each set uniformly among sets with that overlap.
    """
    rng = np.random.default_rng(rng)
    truth = np.asarray(as_index_set(truth, m.dim), dtype=np.int64)
    k = truth.size
    outside = np.setdiff1d(np.arange(m.dim), truth)
    lo_overlap = max(0, k - outside.size)
    gap = xi * k
    levels = [
        (a, b)
        for a in range(lo_overlap, k + 1)
        for b in range(lo_overlap, k + 1)
        if (a - b >= gap - 1e-12 if inclusive else a - b > gap + 1e-12)
    ]
    report = SeparabilityReport(xi=xi, pairs_tested=0, violations=[])
    if not levels:
        return report
    dense = m.dense()
    picks = rng.integers(len(levels), size=pair_samples)
    sets_i, sets_j = [], []
    for t in picks:
        a, b = levels[t]
        sets_i.append(_sample_with_overlap(rng, truth, outside, k, a))
        sets_j.append(_sample_with_overlap(rng, truth, outside, k, b))
    lam_i = score_sets(dense, np.stack(sets_i), F_LAMBDA1)
    lam_j = score_sets(dense, np.stack(sets_j), F_LAMBDA1)
    report.pairs_tested = pair_samples
    for si, sj, li, lj in zip(sets_i, sets_j, lam_i, lam_j):
        if not li > lj:
            report.violations.append((tuple(int(x) for x in si), tuple(int(x) for x in sj), float(li), float(lj)))
    return report


def _jsonable(obj):
    if is_dataclass(obj):
        return {key: _jsonable(val) for key, val in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(key): _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def report_to_json(report, **kwargs) -> str:
    """Serialize an audit report with sorted keys."""
    kwargs.setdefault("indent", 2)
    return json.dumps(_jsonable(report), sort_keys=True, **kwargs)
