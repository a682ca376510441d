"""Spiked covariance sampling."""

import numpy as np
import pytest

from sspca import SpikedModelParams, load_instance, make_spike, sample_covariance, save_instance
from sspca.model import SAMPLE_BLOCK


class TestSpike:
    def test_ubspca_first_k(self):
        spike, support = make_spike(SpikedModelParams(10, 20, 4, 1.0), 0)
        assert support == (0, 1, 2, 3)
        np.testing.assert_array_equal(spike[:4], np.full(4, 0.5))
        assert not spike[4:].any()

    def test_uspca_random_support(self):
        params = SpikedModelParams(10, 50, 9, 1.0, "USPCA", "random")
        spike, support = make_spike(params, 3)
        assert len(support) == 9 and list(support) == sorted(support)
        np.testing.assert_allclose(np.abs(spike[list(support)]), 1 / 3)
        assert np.linalg.norm(spike) == pytest.approx(1.0)
        assert set(np.flatnonzero(spike)) == set(support)

    def test_signs_vary_across_seeds(self):
        params = SpikedModelParams(10, 30, 8, 1.0, "USPCA")
        signs = {tuple(np.sign(make_spike(params, s)[0][:8])) for s in range(10)}
        assert len(signs) > 1


class TestSampling:
    def test_deterministic(self):
        params = SpikedModelParams(40, 15, 3, 2.0, "USPCA", "random")
        a = sample_covariance(params, 99)
        b = sample_covariance(params, 99)
        assert a.covariance == b.covariance and a.support == b.support
        assert sample_covariance(params, 100).covariance != a.covariance

    def test_matches_explicit_design_matrix(self):
        # rebuild the samples row by row in the documented draw order
        params = SpikedModelParams(SAMPLE_BLOCK + 37, 6, 2, 1.5, "USPCA", "random")
        inst = sample_covariance(params, 5)
        rng = np.random.default_rng(np.random.SeedSequence(5).spawn(2)[1])
        rows = []
        left = params.n
        while left:
            b = min(SAMPLE_BLOCK, left)
            z = rng.standard_normal((b, params.p + 1))
            rows.append(np.sqrt(params.beta) * z[:, :1] * inst.spike + z[:, 1:])
            left -= b
        x = np.vstack(rows)
        np.testing.assert_allclose(inst.covariance.dense(), x.T @ x / params.n, rtol=1e-12, atol=1e-13)

    def test_beta_zero_is_chi_square(self):
        # diagonal entries are chi^2_n / n: mean 1, sd sqrt(2/n)
        n, p = 800, 300
        inst = sample_covariance(SpikedModelParams(n, p, 5, 0.0), 1)
        d = inst.covariance.diagonal()
        assert abs(d.mean() - 1) < 5 * np.sqrt(2 / n / p)
        assert d.std() == pytest.approx(np.sqrt(2 / n), rel=0.15)

    def test_large_spike_dominates(self):
        inst = sample_covariance(SpikedModelParams(2000, 5, 1, 4.0), 2)
        assert inst.covariance.get(0, 0) == pytest.approx(5.0, rel=0.1)

    def test_monte_carlo_mean_is_population_covariance(self):
        params = SpikedModelParams(500, 20, 4, 1.0, "USPCA")
        total = np.zeros((20, 20))
        draws = 200
        for s in range(draws):
            total += sample_covariance(params, s).covariance.dense()
        spike, _ = make_spike(params, 0)  # first_k: support fixed, signs vary per draw
        mean = total / draws
        # off-support block is identity; entry sd ~ 1/sqrt(n * draws)
        np.testing.assert_allclose(mean[4:, 4:], np.eye(16), atol=5 / np.sqrt(500 * draws))
        np.testing.assert_allclose(np.diag(mean)[:4], 1 + params.beta / 4, atol=6 / np.sqrt(500 * draws))

    def test_positive_semidefinite(self):
        inst = sample_covariance(SpikedModelParams(30, 25, 3, 1.0), 4)
        assert np.linalg.eigvalsh(inst.covariance.dense())[0] > -1e-12


class TestParams:
    def test_collects_all_problems(self):
        with pytest.raises(ValueError, match="n must.*k must.*beta"):
            SpikedModelParams(0, 5, 9, -1.0)

    def test_unknown_enum(self):
        with pytest.raises(ValueError):
            SpikedModelParams(5, 5, 1, 1.0, "SIGNED")


class TestPersistence:
    def test_round_trip(self, tmp_path):
        inst = sample_covariance(SpikedModelParams(30, 12, 3, 1.0, "USPCA", "random"), 77)
        save_instance(tmp_path / "inst.npz", inst)
        back = load_instance(tmp_path / "inst.npz")
        assert back.params == inst.params and back.support == inst.support
        assert back.covariance == inst.covariance and back.rng_seed == 77
        np.testing.assert_array_equal(back.spike, inst.spike)

    def test_rejects_foreign_file(self, tmp_path):
        np.savez(tmp_path / "x.npz", format=np.array("other/1"))
        with pytest.raises(ValueError, match="unsupported"):
            load_instance(tmp_path / "x.npz")
