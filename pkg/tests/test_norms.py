import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from lorentz_embed import (LorentzParams, WeightSequence, lipschitz_constant,
                           lipschitz_maximizer, lorentz_norm,
                           lorentz_norm_columns, power_params, psi,
                           psi_columns, psi_gradient_norm, rearrange_desc,
                           sort_asc)

finite_vectors = hnp.arrays(
    np.float64, st.integers(1, 12),
    elements=st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False))


def random_params(rng):
    p = float(rng.uniform(1.0, 3.0))
    n = int(rng.integers(1, 20))
    r = float(rng.uniform(0.0, 2.0))
    return power_params(r, p, n)


class TestWeightSequence:
    def test_power_weights_materialize(self):
        w = power_params(1.0, 1.0, 3).weight_values()
        assert np.allclose(w, [1.0, 0.5, 1.0 / 3.0])

    def test_rejects_increasing(self):
        with pytest.raises(ValueError):
            WeightSequence(np.array([1.0, 0.5, 0.6]))

    def test_rejects_first_not_one(self):
        with pytest.raises(ValueError):
            WeightSequence(np.array([0.9, 0.5]))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            WeightSequence(np.array([1.0, -0.1]))

    def test_quasi_norm_constant(self):
        assert power_params(0.0, 0.5, 3).quasi_norm_constant == 4.0
        assert power_params(0.0, 1.5, 3).quasi_norm_constant == 1.0


class TestRearrange:
    def test_example(self):
        assert np.array_equal(rearrange_desc([-2, 1, 0]), [2, 1, 0])

    def test_singleton(self):
        assert np.array_equal(rearrange_desc([5.0]), [5.0])

    def test_matches_naive_sort(self, rng):
        x = rng.standard_normal(1000)
        naive = sorted(abs(v) for v in x.tolist())[::-1]
        assert np.array_equal(rearrange_desc(x), naive)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            rearrange_desc([1.0, float("nan")])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            rearrange_desc([])


class TestSortAsc:
    def test_example(self):
        assert np.array_equal(sort_asc([3, -1, 2]), [-1, 2, 3])

    def test_idempotent(self):
        x = np.array([-1.0, 2.0, 3.0])
        assert np.array_equal(sort_asc(sort_asc(x)), sort_asc(x))

    def test_one_lipschitz(self, rng):
        # sorting is 1-Lipschitz for the Euclidean norm
        for _ in range(200):
            x = rng.standard_normal(50)
            y = rng.standard_normal(50)
            lhs = np.linalg.norm(sort_asc(x) - sort_asc(y))
            assert lhs <= np.linalg.norm(x - y) + 1e-12


class TestLorentzNorm:
    def test_euclidean_case(self):
        params = LorentzParams(WeightSequence(np.ones(3)), 2.0)
        assert lorentz_norm(params, [3, 4, 0]) == pytest.approx(5.0)

    def test_weighted_example(self):
        params = LorentzParams(WeightSequence(np.array([1.0, 0.5])), 1.0)
        assert lorentz_norm(params, [-2, 1]) == pytest.approx(2.5)

    def test_basis_vector(self, rng):
        params = random_params(rng)
        e1 = np.zeros(params.n)
        e1[0] = 1.0
        assert lorentz_norm(params, e1) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lorentz_norm(power_params(0.0, 2.0, 3), [1.0, 2.0])

    def test_columns_match_scalar(self, rng):
        params = power_params(0.7, 1.3, 15)
        X = rng.standard_normal((15, 9))
        cols = lorentz_norm_columns(params, X)
        for j in range(9):
            assert cols[j] == pytest.approx(lorentz_norm(params, X[:, j]), rel=1e-12)

    def test_columns_constant_weight_fast_path(self, rng):
        # r = 0 skips the per-column sort; must agree with the generic path
        params = power_params(0.0, 1.7, 25)
        X = rng.standard_normal((25, 7))
        cols = lorentz_norm_columns(params, X)
        for j in range(7):
            assert cols[j] == pytest.approx(lorentz_norm(params, X[:, j]), rel=1e-12)

    @given(finite_vectors, st.floats(1.0, 4.0))
    @settings(max_examples=100, deadline=None)
    def test_triangle_inequality(self, x, p):
        n = x.size
        params = power_params(1.0, p, n)
        y = np.roll(x, 1) * 0.5 - 1.0
        lhs = lorentz_norm(params, x + y)
        rhs = lorentz_norm(params, x) + lorentz_norm(params, y)
        assert lhs <= rhs * (1.0 + 1e-12) + 1e-9

    @given(finite_vectors, st.floats(0.3, 0.99))
    @settings(max_examples=100, deadline=None)
    def test_quasi_triangle_inequality(self, x, p):
        n = x.size
        params = power_params(0.5, p, n)
        y = np.roll(x, 1) * 0.5 - 1.0
        lhs = lorentz_norm(params, x + y)
        rhs = params.quasi_norm_constant * (
            lorentz_norm(params, x) + lorentz_norm(params, y))
        assert lhs <= rhs * (1.0 + 1e-12) + 1e-9

    @given(finite_vectors, st.floats(-100.0, 100.0))
    @settings(max_examples=100, deadline=None)
    def test_homogeneity(self, x, lam):
        params = power_params(0.5, 1.5, x.size)
        assert lorentz_norm(params, lam * x) == pytest.approx(
            abs(lam) * lorentz_norm(params, x), rel=1e-9, abs=1e-9)

    @given(finite_vectors)
    @settings(max_examples=100, deadline=None)
    def test_sign_and_permutation_invariance(self, x):
        params = power_params(0.3, 1.2, x.size)
        base = lorentz_norm(params, x)
        assert lorentz_norm(params, -x) == pytest.approx(base, rel=1e-12, abs=1e-12)
        assert lorentz_norm(params, x[::-1]) == pytest.approx(base, rel=1e-12, abs=1e-12)


class TestPsi:
    def test_squared_euclidean(self):
        params = LorentzParams(WeightSequence(np.ones(2)), 2.0)
        assert psi(params, [3, 4]) == pytest.approx(25.0)

    def test_zero(self):
        assert psi(power_params(0.5, 1.5, 4), np.zeros(4)) == 0.0

    def test_matches_norm_power(self, rng):
        params = power_params(0.8, 1.4, 12)
        for _ in range(20):
            x = rng.standard_normal(12)
            assert psi(params, x) == pytest.approx(
                lorentz_norm(params, x) ** params.p, rel=1e-12)

    def test_columns_match_scalar(self, rng):
        params = power_params(0.4, 2.5, 10)
        X = rng.standard_normal((10, 5))
        cols = psi_columns(params, X)
        for j in range(5):
            assert cols[j] == pytest.approx(psi(params, X[:, j]), rel=1e-12)


class TestPsiGradient:
    def test_euclidean_gradient(self):
        params = LorentzParams(WeightSequence(np.ones(3)), 2.0)
        res = psi_gradient_norm(params, [3, 4, 12])
        assert res.value == pytest.approx(26.0)
        assert res.smooth_point

    def test_p_one_gradient(self):
        params = LorentzParams(WeightSequence(np.ones(2)), 1.0)
        res = psi_gradient_norm(params, [3, -4])
        assert res.value == pytest.approx(math.sqrt(2.0))

    def test_non_smooth_flag(self):
        params = power_params(0.0, 2.0, 3)
        assert not psi_gradient_norm(params, [1.0, 1.0, 2.0]).smooth_point
        assert not psi_gradient_norm(params, [0.0, 1.0, 2.0]).smooth_point
        assert psi_gradient_norm(params, [0.5, 1.0, 2.0]).smooth_point

    def test_matches_finite_differences(self, rng):
        params = power_params(0.5, 1.5, 10)
        h = 1e-6
        for _ in range(25):
            x = rng.uniform(0.5, 3.0, 10) * rng.choice([-1.0, 1.0], 10)
            grad = np.empty(10)
            for i in range(10):
                xp, xm = x.copy(), x.copy()
                xp[i] += h
                xm[i] -= h
                grad[i] = (psi(params, xp) - psi(params, xm)) / (2.0 * h)
            res = psi_gradient_norm(params, x)
            assert res.smooth_point
            assert res.value == pytest.approx(np.linalg.norm(grad), abs=1e-5)


class TestLipschitz:
    def test_flat_weights_p1(self):
        params = power_params(0.0, 1.0, 4)
        assert lipschitz_constant(params) == pytest.approx(2.0)
        assert np.allclose(lipschitz_maximizer(params), 0.5 * np.ones(4))

    def test_p_two_and_above(self, rng):
        params = random_params(rng)
        params = LorentzParams(params.weights, 2.0)
        assert lipschitz_constant(params) == 1.0
        theta = lipschitz_maximizer(params)
        assert theta[0] == 1.0 and np.all(theta[1:] == 0.0)

    def test_r1_p1_n2(self):
        params = power_params(1.0, 1.0, 2)
        assert lipschitz_constant(params) == pytest.approx(math.sqrt(5.0) / 2.0)
        assert np.allclose(lipschitz_maximizer(params),
                           [2.0 / math.sqrt(5.0), 1.0 / math.sqrt(5.0)])

    def test_equality_at_maximizer(self, rng):
        for _ in range(20):
            p = float(rng.uniform(1.0, 1.99))
            n = int(rng.integers(2, 30))
            r = float(rng.uniform(0.0, 1.5))
            params = power_params(r, p, n)
            theta = lipschitz_maximizer(params)
            assert np.linalg.norm(theta) == pytest.approx(1.0, rel=1e-12)
            assert lorentz_norm(params, theta) == pytest.approx(
                lipschitz_constant(params), rel=1e-12)

    def test_random_sphere_never_exceeds(self, rng):
        params = power_params(0.6, 1.3, 16)
        b = lipschitz_constant(params)
        thetas = rng.standard_normal((16, 2000))
        thetas /= np.linalg.norm(thetas, axis=0)
        norms = lorentz_norm_columns(params, thetas)
        assert np.all(norms <= b * (1.0 + 1e-12))

    def test_rejects_quasi_norm(self):
        with pytest.raises(ValueError):
            lipschitz_constant(power_params(0.0, 0.5, 3))


class TestTailComparisonFact:
    def test_head_sum_dominates(self, rng):
        # sum_i i^(-r) x_[i]^p <= (2n/b) sum_{i <= floor(b)} i^(-r) x_[i]^p
        n, r, p = 50, 0.7, 1.4
        i = np.arange(1, n + 1, dtype=float)
        w = i ** (-r)
        for _ in range(200):
            x = np.sort(np.abs(rng.standard_normal(n)))[::-1]
            terms = w * x ** p
            total = float(np.sum(terms))
            for b in (1.0, 2.5, 7.0, 20.0, float(n)):
                head = float(np.sum(terms[: int(b)]))
                assert total <= (2.0 * n / b) * head * (1.0 + 1e-12)
