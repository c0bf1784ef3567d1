import math

import numpy as np
import pytest
from scipy import integrate

from lorentz_embed import (ConstantLedger, incomplete_gamma_bounds,
                           inverse_normal_cdf, median_norm_shape,
                           median_psi_bounds, normal_orderstat_envelope,
                           power_integral_bounds, power_log_sum_bounds,
                           tx_deviation_bound, uniform_orderstat_upper,
                           uniform_orderstat_upper_all, xi1, xi1_inv_upper)
from lorentz_embed.analytic import power_integral_exact, power_log_sum_exact


def erf_normal_cdf(x: float) -> float:
    """Independent oracle for Phi via math.erf."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


class TestIncompleteGamma:
    def test_empty_integral(self):
        assert incomplete_gamma_bounds(0.0, 1.0, "decay").shape_value == 0.0

    def test_decay_ratio(self):
        true = 1.0 - math.exp(-1.0)
        bound = incomplete_gamma_bounds(1.0, 0.0, "decay")
        assert bound.shape_value == pytest.approx(1.0)
        assert 0.5 <= true / bound.shape_value <= 1.0

    def test_growth_example(self):
        # int_0^2 e^w w dw = e^2 + 1, shape = e^2
        bound = incomplete_gamma_bounds(2.0, 1.0, "growth")
        assert bound.shape_value == pytest.approx(math.exp(2.0))
        true = math.exp(2.0) + 1.0
        quad, _ = integrate.quad(lambda w: math.exp(w) * w, 0.0, 2.0)
        assert quad == pytest.approx(true, rel=1e-10)

    def test_unit_ledger_collapses(self):
        bound = incomplete_gamma_bounds(3.0, 2.0, "decay")
        assert bound.lower == bound.upper == bound.shape_value

    def test_ledger_scaling_with_exponent(self):
        # decay constants enter with exponent 1 + q
        ledger = ConstantLedger({"c_bound": 0.5, "C_bound": 2.0})
        q = 1.0
        bound = incomplete_gamma_bounds(3.0, q, "decay", ledger)
        assert bound.lower == pytest.approx(0.25 * bound.shape_value)
        assert bound.upper == pytest.approx(4.0 * bound.shape_value)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            incomplete_gamma_bounds(-1.0, 0.0, "decay")
        with pytest.raises(ValueError):
            incomplete_gamma_bounds(1.0, 0.0, "sideways")


class TestPowerLogSum:
    def test_flat_sum_is_n(self):
        for n in (100, 1000):
            assert power_log_sum_exact(0.0, 0.0, n) == pytest.approx(float(n))
            shape = power_log_sum_bounds(0.0, 0.0, n).shape_value
            assert 0.5 < n / shape < 1.5

    def test_zero_power_convention(self):
        # the i = n term contributes 0^0 = 1 for q = 0
        assert power_log_sum_exact(0.0, 0.0, 2) == pytest.approx(2.0)

    def test_a2_q1_stability(self):
        fitted = [power_log_sum_exact(2.0, 1.0, n)
                  / power_log_sum_bounds(2.0, 1.0, n).shape_value
                  for n in (10 ** 3, 10 ** 4, 10 ** 5)]
        assert all(0.1 < f < 10.0 for f in fitted)
        assert max(fitted) / min(fitted) < 2.0

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            power_log_sum_bounds(0.0, 0.0, 1)


class TestPowerIntegral:
    def test_empty_integral(self):
        assert power_integral_bounds(2.0, 1.0).shape_value == 0.0
        assert power_integral_exact(2.0, 1.0) == 0.0

    def test_log_case(self):
        # a = 1, T = e: integral 1, shape 2, ratio exactly 1/2
        assert power_integral_exact(1.0, math.e) == pytest.approx(1.0)
        assert power_integral_bounds(1.0, math.e).shape_value == pytest.approx(2.0)

    def test_decaying_case(self):
        T = 10 ** 3
        true = power_integral_exact(3.0, T)
        assert true == pytest.approx((1.0 - T ** (-2.0)) / 2.0, rel=1e-12)
        shape = power_integral_bounds(3.0, T).shape_value
        assert shape == pytest.approx(
            (1.0 + T ** (-2.0)) * math.log(T) / (1.0 + 2.0 * math.log(T)), rel=1e-12)


class TestXi1:
    def test_endpoints(self):
        assert xi1(0.0) == 1.0
        assert xi1(1.0) == 0.0
        assert xi1_inv_upper(1.0) == 0.0

    def test_inverse_bound_over_inverts(self):
        # xi1 decreasing, so xi1(upper bound of inverse) <= s
        for s in np.linspace(0.0, 1.0, 100):
            t = xi1_inv_upper(float(s))
            t = min(t, 1.0)
            assert xi1(t) <= s + 1e-12

    def test_inverse_bound_vs_bisection_oracle(self):
        for s in np.linspace(0.01, 0.99, 50):
            lo, hi = 0.0, 1.0
            for _ in range(60):  # solve xi1(t) = s
                mid = 0.5 * (lo + hi)
                if xi1(mid) > s:
                    lo = mid
                else:
                    hi = mid
            assert xi1_inv_upper(float(s)) >= lo - 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            xi1(1.5)
        with pytest.raises(ValueError):
            xi1_inv_upper(-0.1)


class TestUniformOrderstat:
    def test_renyi_vacuous_at_top(self):
        assert uniform_orderstat_upper(100, 100, 3.0, "renyi") == pytest.approx(1.0)

    def test_vectorized_matches_scalar(self):
        n, t = 64, 2.5
        for variant in ("bottom", "renyi"):
            env = uniform_orderstat_upper_all(n, t, variant)
            for i in (1, 2, 31, 63, 64):
                assert env[i - 1] == pytest.approx(
                    uniform_orderstat_upper(n, i, t, variant), rel=1e-12)

    def test_bottom_envelope_monotone(self):
        env = uniform_orderstat_upper_all(512, 2.0, "bottom")
        assert np.all(np.diff(env) >= -1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            uniform_orderstat_upper(10, 11, 1.0, "bottom")
        with pytest.raises(ValueError):
            uniform_orderstat_upper(10, 5, 1.0, "sideways")


class TestNormalOrderstatEnvelope:
    def test_formula_at_top(self):
        n = 100
        assert normal_orderstat_envelope(n, 1, 0.0) == pytest.approx(
            math.sqrt(math.log(n)))

    def test_domain(self):
        with pytest.raises(ValueError):
            normal_orderstat_envelope(100, 80, 1.0)  # i > (n+1)/2

    def test_envelope_covers_simulation(self, rng):
        # X_[i] <= C (ln(n/i) + t^2/i)^(1/2) should hold for most samples
        # already at C = 1.3, t = 3 (high-probability event)
        n, t = 1024, 3.0
        half = (n + 1) // 2
        env = np.array([normal_orderstat_envelope(n, i, t) for i in range(1, half + 1)])
        X = np.sort(np.abs(rng.standard_normal((500, n))), axis=1)[:, ::-1]
        ok = np.all(X[:, :half] <= 1.3 * env[None, :], axis=1)
        assert np.mean(ok) > 0.9


class TestTxDeviation:
    def test_min_branches(self):
        n = 100
        small_t = 0.5
        assert tx_deviation_bound(n, small_t) == pytest.approx(
            small_t ** 2 / math.sqrt(math.log(n)))
        big_t = 50.0
        assert tx_deviation_bound(n, big_t) == pytest.approx(big_t)


class TestMedianShapes:
    def test_median_psi_domain(self):
        with pytest.raises(ValueError):
            median_psi_bounds(0.5, 0.5, 100)
        with pytest.raises(ValueError):
            median_psi_bounds(0.5, 2.0, 1)

    def test_median_norm_shape_flat_p2(self):
        # (sum ln(n/i))^(1/2) ~ sqrt(n) by Stirling
        for n in (100, 1000, 10000):
            w = np.ones(n)
            ratio = median_norm_shape(w, 2.0, n) / math.sqrt(n)
            assert 0.9 < ratio < 1.1

    def test_median_psi_large_r_branch(self):
        bound = median_psi_bounds(1.5, 2.0, 1000)
        ln = math.log(1000)
        expected = ln ** 2.0 / (1.0 + 0.5 * ln) + ln
        assert bound.shape_value == pytest.approx(expected, rel=1e-12)


class TestInverseNormalCdf:
    def test_symmetry(self):
        assert inverse_normal_cdf(0.5) == pytest.approx(0.0, abs=1e-12)

    def test_quantile_075(self):
        # frozen oracle: bisection on the erf-based CDF
        assert inverse_normal_cdf(0.75) == pytest.approx(0.6744897501960817, abs=1e-9)

    def test_round_trip_via_erf(self):
        for u in np.linspace(0.01, 0.99, 25):
            assert erf_normal_cdf(inverse_normal_cdf(float(u))) == pytest.approx(
                u, abs=1e-8)

    def test_strictly_increasing_on_grid(self):
        grid = np.linspace(1e-6, 1.0 - 1e-6, 10 ** 4)
        vals = inverse_normal_cdf(grid)
        assert np.all(np.diff(vals) > 0.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            inverse_normal_cdf(0.0)
        with pytest.raises(ValueError):
            inverse_normal_cdf(1.0)
