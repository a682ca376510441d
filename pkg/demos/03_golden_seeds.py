"""How much of the truth does a seed need?

Seeds are drawn from inside the true support and completed greedily. The
regime numbers put the instance on the strong/weak map.
"""

from sspca import F_AVG, SpikedModelParams, golden_seed_audit, k_star_bound, regime_thresholds, sample_covariance

n = p = 1500
beta = 0.5
for k in (6, 10, 14):
    r = regime_thresholds(n, p, beta, k)
    inst = sample_covariance(SpikedModelParams(n, p, k, beta, "UBSPCA", "random"), rng_seed=k)
    print(f"k={k:>2}  k/k_comp={k / r.k_comp:.2f}  k/k_info={k / r.k_info:.2f}  "
          f"worst-case seed size bound (C=1): {k_star_bound(n, k, beta, C=1.0)}")
    for k_star in sorted({1, 2, max(1, k // 3)}):
        rep = golden_seed_audit(inst.covariance, inst.support, F_AVG, k, k_star, trials=30, rng=0)
        kind = "all" if rep.exhaustive else "sampled"
        print(f"    seed size {k_star}: {rep.fraction:.2f} of {rep.seeds_audited} ({kind}) seeds recover "
              f"everything, mean success {rep.mean_success:.2f}")
