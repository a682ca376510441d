"""Set scores and the incremental greedy score."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sspca import (
    F_AVG,
    F_L1,
    F_LAMBDA1,
    ScoreFunction,
    SymmetricMatrix,
    f_avg,
    f_l1,
    f_lambda1,
    incremental_scores,
    score_set,
)
from sspca.exceptions import EmptySet, InvalidIndex

from conftest import random_symmetric

EXAMPLE = np.array(
    [
        [2.0, -1.0, 0.5],
        [-1.0, 3.0, 0.0],
        [0.5, 0.0, 1.0],
    ]
)


def double_loop(a, s, absolute=False):
    total = 0.0
    for i in s:
        for j in s:
            total += abs(a[i, j]) if absolute else a[i, j]
    return total / len(s)


class TestSetScores:
    def test_hand_computed(self):
        m = SymmetricMatrix.from_dense(EXAMPLE)
        assert f_avg(m, [0, 1]) == pytest.approx((2 + 3 - 2) / 2)
        assert f_l1(m, [0, 1]) == pytest.approx((2 + 3 + 2) / 2)
        assert f_lambda1(m, [0, 1]) == pytest.approx((5 + np.sqrt(5)) / 2, abs=1e-13)
        assert f_avg(m, [2]) == 1.0

    def test_against_double_loop(self, rng):
        a = random_symmetric(rng, 9)
        m = SymmetricMatrix.from_dense(a)
        for s in ([0], [1, 4], [2, 3, 8], list(range(9))):
            assert f_avg(m, s) == pytest.approx(double_loop(a, s), rel=1e-12, abs=1e-12)
            assert f_l1(m, s) == pytest.approx(double_loop(a, s, True), rel=1e-12)

    def test_rayleigh_ordering(self, rng):
        # f_avg(S) = u^T M u with u = 1/sqrt(|S|), so it never exceeds lambda_1
        m = SymmetricMatrix.from_dense(random_symmetric(rng, 10))
        for s in itertools.combinations(range(10), 3):
            assert f_lambda1(m, s) >= f_avg(m, s) - 1e-9

    def test_errors(self, small_psd):
        with pytest.raises(EmptySet):
            f_avg(small_psd, [])
        with pytest.raises(InvalidIndex):
            f_l1(small_psd, [3, 40])

    def test_parse(self):
        assert ScoreFunction.parse("f_l1", True) == ScoreFunction("F_L1", True)
        assert str(ScoreFunction("F_AVG", True)) == "F_AVG[nodiag]"
        with pytest.raises(ValueError):
            ScoreFunction.parse("F_MAX")


class TestIncremental:
    def test_ranking_matches_full_recomputation(self, rng):
        a = random_symmetric(rng, 11)
        m = SymmetricMatrix.from_dense(a)
        seed = [2, 7, 9]
        for f, full in ((F_AVG, f_avg), (F_L1, f_l1)):
            cand, scores = incremental_scores(m, seed, f)
            exact = np.array([full(m, seed + [int(i)]) for i in cand])
            # a_i = (|S|+1) f(S + i) - |S| f(S)
            np.testing.assert_allclose(scores, 4 * exact - 3 * full(m, seed), rtol=1e-10, atol=1e-10)

    def test_lambda1_scores_are_eigenvalues(self, rng):
        m = SymmetricMatrix.from_dense(random_symmetric(rng, 7))
        cand, scores = incremental_scores(m, [1, 3], F_LAMBDA1)
        assert list(cand) == [0, 2, 4, 5, 6]
        np.testing.assert_allclose(scores, [f_lambda1(m, [1, 3, int(i)]) for i in cand], rtol=1e-12)

    def test_empty_seed(self):
        m = SymmetricMatrix.from_dense(EXAMPLE)
        cand, scores = incremental_scores(m, [], F_AVG)
        np.testing.assert_array_equal(scores, np.diag(EXAMPLE))
        _, scores = incremental_scores(m, [], ScoreFunction("F_AVG", True))
        np.testing.assert_array_equal(scores, 0.0)

    def test_ignore_diagonal(self):
        m = SymmetricMatrix.from_dense(EXAMPLE)
        _, with_diag = incremental_scores(m, [0], F_L1)
        _, without = incremental_scores(m, [0], ScoreFunction("F_L1", True))
        np.testing.assert_allclose(with_diag, [2 + 3, 1 + 1])
        np.testing.assert_allclose(without, [2, 1])

    @given(st.permutations(range(8)), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_permutation_invariance(self, perm, seed):
        rng = np.random.default_rng(seed)
        a = random_symmetric(rng, 8)
        perm = np.asarray(perm)
        m = SymmetricMatrix.from_dense(a)
        mp = SymmetricMatrix.from_dense(a[np.ix_(perm, perm)])
        inv = np.argsort(perm)
        s = [0, 5]
        for f in (F_AVG, F_L1, F_LAMBDA1):
            assert score_set(mp, inv[s], f) == pytest.approx(score_set(m, s, f), rel=1e-10, abs=1e-12)
