"""Packed storage and the two eigensolvers.

Reference values come from LAPACK (numpy.linalg.eigvalsh / eigh), frozen in
tests/data/lambda_reference.npz for the large random sweep.
"""

import hashlib
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sspca import EigSolveSettings, NoConvergence, SymmetricMatrix, lambda_max, principal_submatrix, top_eigvec
from sspca.exceptions import EmptySet, InvalidIndex
from sspca.linalg import lambda_max_batch, packed_index

from conftest import random_psd, random_symmetric

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tools"))


class TestPackedStorage:
    def test_index_layout(self):
        # column-major upper packing: (0,0) (0,1) (1,1) (0,2) (1,2) (2,2)
        assert [packed_index(i, j) for j in range(3) for i in range(j + 1)] == list(range(6))
        assert packed_index(2, 0) == packed_index(0, 2) == 3

    def test_round_trip(self, rng):
        a = random_symmetric(rng, 7)
        m = SymmetricMatrix.from_dense(a)
        np.testing.assert_array_equal(m.dense(), a)
        assert m.packed.size == 28
        assert m.get(6, 2) == a[2, 6]

    def test_only_upper_triangle_is_read(self):
        a = np.array([[1.0, 2.0], [99.0, 3.0]])
        np.testing.assert_array_equal(SymmetricMatrix.from_dense(a).dense(), [[1, 2], [2, 3]])

    def test_immutable(self, small_psd):
        with pytest.raises(ValueError):
            small_psd.packed[0] = 5.0

    def test_matvec_matches_dense(self, rng):
        a = random_symmetric(rng, 9)
        x = rng.standard_normal(9)
        np.testing.assert_allclose(SymmetricMatrix.from_dense(a).matvec(x), a @ x, rtol=1e-12, atol=1e-12)

    def test_rows_and_diagonal(self, rng):
        a = random_symmetric(rng, 6)
        m = SymmetricMatrix.from_dense(a)
        np.testing.assert_array_equal(m.rows([4, 1]), a[[4, 1]])
        np.testing.assert_array_equal(m.diagonal(), np.diag(a))

    def test_hard_threshold_keeps_diagonal(self):
        a = np.array([[0.1, 0.5, -0.2], [0.5, 0.05, 0.3], [-0.2, 0.3, 2.0]])
        out = SymmetricMatrix.from_dense(a).hard_threshold(0.3).dense()
        expected = np.array([[0.1, 0.5, 0.0], [0.5, 0.05, 0.3], [0.0, 0.3, 2.0]])
        np.testing.assert_array_equal(out, expected)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            SymmetricMatrix.from_dense(np.ones((2, 3)))
        with pytest.raises(ValueError):
            SymmetricMatrix([1.0, np.nan, 1.0], 2)
        with pytest.raises(ValueError):
            SymmetricMatrix([1.0, 2.0], 2)

    def test_get_out_of_range(self, small_psd):
        with pytest.raises(InvalidIndex):
            small_psd.get(0, 12)


class TestPrincipalSubmatrix:
    def test_matches_fancy_indexing(self, rng):
        a = random_symmetric(rng, 10)
        sub = principal_submatrix(SymmetricMatrix.from_dense(a), [7, 2, 5])
        np.testing.assert_array_equal(sub.dense(), a[np.ix_([2, 5, 7], [2, 5, 7])])

    def test_errors(self, small_psd):
        with pytest.raises(EmptySet):
            principal_submatrix(small_psd, [])
        with pytest.raises(InvalidIndex):
            principal_submatrix(small_psd, [0, 12])
        with pytest.raises(InvalidIndex):
            principal_submatrix(small_psd, [-1])


class TestLambdaMax:
    def test_known_values(self):
        assert lambda_max(SymmetricMatrix.from_dense(np.eye(5))) == pytest.approx(1.0, abs=1e-14)
        assert lambda_max(SymmetricMatrix.from_dense([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(3.0, abs=1e-14)
        assert lambda_max(SymmetricMatrix.from_dense(np.diag([-3.0, 4.0, 1.0]))) == 4.0
        assert lambda_max(SymmetricMatrix.from_dense([[-7.0]])) == -7.0

    def test_rank_one(self):
        v = np.array([1.0, 2.0, 3.0])
        assert lambda_max(SymmetricMatrix.from_dense(np.outer(v, v))) == pytest.approx(14.0, rel=1e-13)

    def test_negative_definite(self, rng):
        a = -random_psd(rng, 8)
        assert lambda_max(SymmetricMatrix.from_dense(a)) == pytest.approx(np.linalg.eigvalsh(a)[-1], abs=1e-10)

    def test_frozen_reference_sweep(self):
        from freeze_oracles import COUNT, matrix

        ref = np.load(DATA / "lambda_reference.npz")
        digest = hashlib.sha256()
        ours = np.empty(COUNT)
        for i in range(COUNT):
            a = matrix(i)
            digest.update(a.tobytes())
            ours[i] = lambda_max(SymmetricMatrix.from_dense(a))
        assert digest.hexdigest() == str(ref["digest"]), "matrix generator drifted; regenerate the oracle"
        np.testing.assert_allclose(ours, ref["lambda_max"], rtol=0, atol=1e-8)

    def test_batch_independent_of_company(self, rng):
        mats = np.stack([random_symmetric(rng, 6) for _ in range(5)])
        together = lambda_max_batch(mats)
        alone = np.array([lambda_max_batch(mats[i : i + 1])[0] for i in range(5)])
        np.testing.assert_array_equal(together, alone)

    def test_no_convergence_carries_estimate(self, rng):
        m = SymmetricMatrix.from_dense(random_symmetric(rng, 12))
        with pytest.raises(NoConvergence) as info:
            lambda_max(m, EigSolveSettings(tolerance=1e-15, max_sweeps=1))
        assert isinstance(info.value.estimate, float)

    def test_scaling(self, rng):
        m = SymmetricMatrix.from_dense(random_psd(rng, 7))
        assert lambda_max(m.scaled(3.5)) == pytest.approx(3.5 * lambda_max(m), rel=1e-12)

    @given(arrays(np.float64, (6, 6), elements=st.floats(-10, 10)), st.lists(st.integers(0, 5), min_size=1, max_size=6))
    @settings(max_examples=60, deadline=None)
    def test_cauchy_interlacing(self, a, subset):
        a = (a + a.T) / 2
        m = SymmetricMatrix.from_dense(a)
        full = lambda_max(m)
        sub = lambda_max(principal_submatrix(m, subset))
        assert sub <= full + 1e-9 * max(1.0, abs(full))

    @given(arrays(np.float64, (5, 5), elements=st.floats(-5, 5)), arrays(np.float64, 5, elements=st.floats(-1, 1)))
    @settings(max_examples=60, deadline=None)
    def test_rayleigh_bound(self, a, x):
        a = (a + a.T) / 2
        if np.linalg.norm(x) < 1e-3:
            return
        rq = x @ a @ x / (x @ x)
        assert rq <= lambda_max(SymmetricMatrix.from_dense(a)) + 1e-9


class TestTopEigvec:
    def test_matches_eigh(self, rng):
        a = random_psd(rng, 15, rows=6)
        v = top_eigvec(SymmetricMatrix.from_dense(a))
        w = np.linalg.eigh(a)[1][:, -1]
        assert abs(v @ w) == pytest.approx(1.0, abs=1e-8)
        assert np.max(np.abs(v)) == np.max(v)  # sign convention

    def test_negative_dominant_eigenvalue(self):
        # |-5| dominates but the top eigenvalue is 1
        a = np.diag([-5.0, 1.0, 0.5])
        a[0, 1] = a[1, 0] = 0.1
        v = top_eigvec(SymmetricMatrix.from_dense(a))
        w = np.linalg.eigh(a)[1][:, -1]
        assert abs(v @ w) == pytest.approx(1.0, abs=1e-8)

    def test_degenerate_top_space(self):
        v = top_eigvec(SymmetricMatrix.from_dense(np.eye(4)))
        np.testing.assert_allclose(v, np.full(4, 0.5))

    def test_no_convergence(self):
        # nearly equal top eigenvalues make power iteration slow
        a = np.diag([1.0, 1.0 - 1e-9, 0.1])
        a[0, 2] = a[2, 0] = 1e-3
        with pytest.raises(NoConvergence):
            top_eigvec(SymmetricMatrix.from_dense(a), EigSolveSettings(tolerance=1e-14, max_iterations=50))


class TestSettings:
    @pytest.mark.parametrize("kw", [{"tolerance": 0}, {"max_sweeps": 0}, {"max_iterations": 0}])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            EigSolveSettings(**kw)
