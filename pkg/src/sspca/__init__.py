"""Seeded greedy search for the support of a sparse leading eigenvector."""

__version__ = "0.1.0"

from .algorithms import (
    CtResult,
    CtSelector,
    GreedyVariant,
    SearchResult,
    SspcaConfig,
    SspcaResult,
    SspcaStats,
    covariance_thresholding,
    default_thresholds,
    diagonal_thresholding,
    exhaustive_search,
    greedy_spca,
    sspca,
)
from .analysis import (
    GoldenSeedReport,
    SeparabilityReport,
    SpectralAuditReport,
    golden_seed_audit,
    k_star_bound,
    regime_thresholds,
    report_to_json,
    separability_audit,
    spectral_interval,
    spectral_interval_audit,
    success_rate,
    xi_formula,
)
from .exceptions import (
    ConfigError,
    CtFailed,
    EmptySet,
    InvalidIndex,
    InvalidSeed,
    NoConvergence,
    SspcaError,
    TooManySeeds,
)
from .linalg import EigSolveSettings, SymmetricMatrix, lambda_max, principal_submatrix, top_eigvec
from .model import (
    PlantedInstance,
    SignModel,
    SpikedModelParams,
    SupportPolicy,
    load_instance,
    make_spike,
    sample_covariance,
    save_instance,
)
from .scorers import F_AVG, F_L1, F_LAMBDA1, ScoreFunction, ScoreKind, f_avg, f_l1, f_lambda1, incremental_scores, score_set
