"""Plant a sparse spike, then try to find it.

Run with ``python3 demos/01_quickstart.py``.
"""

import numpy as np

from sspca import (
    F_L1,
    ScoreFunction,
    SpikedModelParams,
    SspcaConfig,
    covariance_thresholding,
    diagonal_thresholding,
    sample_covariance,
    sspca,
    success_rate,
)

# 300 samples in 150 dimensions; 6 coordinates carry a spike of strength 2.
params = SpikedModelParams(n=300, p=150, k=6, beta=2.0, sign_model="USPCA", support_policy="random")
inst = sample_covariance(params, rng_seed=7)
print("true support:", inst.support)
print("spike entries:", np.round(inst.spike[list(inst.support)], 3))

# The diagonal alone already hints at the support: planted variances are 1 + beta/k.
dt = diagonal_thresholding(inst.covariance, params.k)
print(f"diagonal thresholding  {dt}  success {success_rate(dt, inst.support):.2f}")

# Seeded search: every single index is tried as a seed and completed greedily.
# With random signs the absolute-value score is the right one.
cfg = SspcaConfig(k=params.k, k_star=1, f1=ScoreFunction.parse(F_L1, ignore_diagonal=True))
res = sspca(inst.covariance, cfg)
print(f"seeded search (k*=1)   {res.support}  success {success_rate(res.support, inst.support):.2f}")
print(f"  lambda_1 of the chosen block: {res.f2_value:.3f}  ({res.stats.greedy_calls} completions)")

ct = covariance_thresholding(inst.covariance, params.k)
print(f"covariance thresholding {ct.selected}  success {success_rate(ct.selected, inst.support):.2f}")
