import math

import numpy as np
import pytest

from fracmoment import frac_moment as fm
from fracmoment import oracles
from fracmoment.quadrature import QuadratureConfig

CFG = QuadratureConfig()


class TestMgfSpec:
    def test_rejects_bad_m0(self):
        with pytest.raises(ValueError):
            fm.MgfSpec(lambda u: np.exp(-u), (0.5, 1.0))

    def test_rejects_bad_mgf_at_zero(self):
        with pytest.raises(ValueError):
            fm.MgfSpec(lambda u: 0.9 * np.exp(-u), (1.0, 1.0))

    def test_rejects_log_convexity_violation(self):
        # m_1^2 > m_0 m_2 is impossible for a genuine moment sequence
        with pytest.raises(ValueError):
            fm.MgfSpec(lambda u: np.exp(-u), (1.0, 2.0, 1.0))

    def test_grid_check_accepts_valid(self):
        fm.mgf_exponential().check_mgf_grid()

    def test_grid_check_rejects_increasing(self):
        spec = fm.MgfSpec.__new__(fm.MgfSpec)
        object.__setattr__(spec, "mgf_neg", lambda u: min(1.0, 0.5 + 0.1 * u))
        object.__setattr__(spec, "raw_moments", (1.0,))
        object.__setattr__(spec, "label", "")
        with pytest.raises(ValueError):
            spec.check_mgf_grid()


class TestAlphaCoefficients:
    def test_degenerate_at_one(self):
        spec = fm.mgf_constant(1.0)
        alphas = fm.alpha_coefficients(spec, 6)
        assert alphas[0] == 1.0
        assert all(abs(a) < 1e-12 for a in alphas[1:])

    def test_bernoulli_half(self):
        spec = fm.mgf_discrete([0.0, 1.0], [0.5, 0.5])
        alphas = fm.alpha_coefficients(spec, 2)
        assert alphas[1] == pytest.approx(-0.5, abs=1e-13)
        assert alphas[2] == pytest.approx(0.5, abs=1e-13)

    def test_matches_binomial_expansion(self):
        # Random moment sequences of a variable supported on {0, 1, 2, 3};
        # the comparison tolerance scales with the alternating sum's
        # condition number (the binomial terms partially cancel).
        rng = np.random.default_rng(5)
        xs = np.array([0.0, 1.0, 2.0, 3.0])
        for _ in range(20):
            ps = rng.dirichlet(np.ones(4))
            spec = fm.mgf_discrete(xs, ps)
            alphas = fm.alpha_coefficients(spec, 8)
            for j, a in enumerate(alphas):
                direct = math.fsum(
                    (-1.0) ** (j - l) * math.comb(j, l) * spec.raw_moments[l]
                    for l in range(j + 1)
                )
                scale = math.fsum(
                    math.comb(j, l) * spec.raw_moments[l] for l in range(j + 1)
                )
                assert a == pytest.approx(direct, abs=1e-12 * max(1.0, scale))

    def test_missing_order(self):
        spec = fm.mgf_discrete([1.0, 2.0], [0.5, 0.5], orders=3)
        with pytest.raises(ValueError, match="order"):
            fm.alpha_coefficients(spec, 4)


class TestFractionalMoment:
    def test_degenerate_one(self):
        spec = fm.mgf_constant(1.0)
        assert fm.fractional_moment(spec, fm.MomentRequest(2.5, CFG)) == pytest.approx(
            1.0, abs=1e-10
        )

    @pytest.mark.parametrize("rho", [0.5, 1.5, 2.5])
    def test_exponential_closed_form(self, rho):
        spec = fm.mgf_exponential()
        value = fm.fractional_moment(spec, fm.MomentRequest(rho, CFG))
        assert value == pytest.approx(math.gamma(1.0 + rho), rel=1e-9)

    def test_integer_dispatch(self):
        spec = fm.mgf_exponential()
        assert fm.fractional_moment(spec, fm.MomentRequest(2.0, CFG)) == 2.0

    def test_integer_moment_examples(self):
        assert fm.integer_moment(fm.mgf_exponential(), 2) == 2.0
        assert fm.integer_moment(fm.mgf_constant(3.0), 3) == pytest.approx(27.0)
        bern = fm.mgf_discrete([0.0, 1.0], [0.7, 0.3])
        assert fm.integer_moment(bern, 5) == pytest.approx(0.3)

    def test_integer_moment_missing(self):
        with pytest.raises(ValueError):
            fm.integer_moment(fm.mgf_constant(1.0, orders=2), 5)

    def test_near_integer_warns(self):
        spec = fm.mgf_exponential()
        with pytest.warns(UserWarning, match="integer"):
            fm.fractional_moment(spec, fm.MomentRequest(2.0 + 1e-8, CFG))

    def test_rejects_non_positive_order(self):
        with pytest.raises(ValueError):
            fm.MomentRequest(0.0, CFG)
        with pytest.raises(ValueError):
            fm.MomentRequest(-1.5, CFG)

    def test_discrete_oracle_agreement(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            k = int(rng.integers(2, 7))
            xs = rng.uniform(0.0, 10.0, k)
            ps = rng.dirichlet(np.ones(k))
            spec = fm.mgf_discrete(xs, ps)
            rv = oracles.DiscreteRv(tuple(xs), tuple(ps))
            for rho in (0.3, 0.7, 1.5, 2.5, 3.7):
                value = fm.fractional_moment(spec, fm.MomentRequest(rho, CFG))
                assert value == pytest.approx(
                    oracles.exact_moment(rv, rho), rel=1e-7
                )

    def test_reduced_path_matches_general_identity(self):
        # for orders below one the head sum collapses to 1 and the
        # prefactor simplifies; both evaluations must agree
        spec = fm.mgf_exponential()
        alphas = fm.alpha_coefficients(spec, len(spec.raw_moments) - 1)
        for rho in (0.2, 0.5, 0.8):
            reduced = fm._moment_order_below_one(spec.mgf_neg, rho, alphas, CFG)
            general = fm.fractional_moment_from_alphas(spec.mgf_neg, rho, alphas, CFG)
            assert reduced == pytest.approx(general, rel=1e-9)

    def test_small_order_limit_matches_log_expectation(self):
        spec = fm.mgf_exponential()
        target = fm.log_expectation(spec, CFG)
        gaps = []
        for rho in (1e-2, 1e-3):
            m = fm.fractional_moment(spec, fm.MomentRequest(rho, CFG))
            gaps.append(abs((m - 1.0) / rho - target))
        # first-order convergence in rho
        assert gaps[1] < gaps[0]
        order = math.log(gaps[0] / gaps[1]) / math.log(10.0)
        assert order == pytest.approx(1.0, abs=0.3)

    def test_monotone_in_order_for_x_above_one(self):
        spec = fm.mgf_discrete([1.0, 2.0, 5.0], [0.5, 0.3, 0.2])
        values = [
            fm.fractional_moment(spec, fm.MomentRequest(rho, CFG))
            for rho in (0.3, 0.8, 1.5, 2.5, 3.5)
        ]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


class TestLogExpectation:
    def test_degenerate_one(self):
        assert fm.log_expectation(fm.mgf_constant(1.0), CFG) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_exponential(self):
        from fracmoment.special import CONSTANTS

        value = fm.log_expectation(fm.mgf_exponential(), CFG)
        assert value == pytest.approx(-CONSTANTS.euler_gamma, abs=1e-8)

    def test_constant_two(self):
        value = fm.log_expectation(fm.mgf_constant(2.0), CFG)
        assert value == pytest.approx(math.log(2.0), abs=1e-10)


class TestZLnZ:
    def test_degenerate_one(self):
        deriv = lambda u: np.exp(-np.asarray(u, dtype=float))
        assert fm.z_ln_z_expectation(deriv, 1.0, CFG) == pytest.approx(0.0, abs=1e-10)

    def test_degenerate_two(self):
        deriv = lambda u: 2.0 * np.exp(-2.0 * np.asarray(u, dtype=float))
        assert fm.z_ln_z_expectation(deriv, 2.0, CFG) == pytest.approx(
            2.0 * math.log(2.0), rel=1e-10
        )

    def test_two_point(self):
        def deriv(u):
            u = np.asarray(u, dtype=float)
            return 0.5 * (0.5 * np.exp(-0.5 * u) + 1.5 * np.exp(-1.5 * u))

        expected = 0.5 * (0.5 * math.log(0.5) + 1.5 * math.log(1.5))
        assert fm.z_ln_z_expectation(deriv, 1.0, CFG) == pytest.approx(
            expected, rel=1e-9
        )

    def test_mean_mismatch(self):
        deriv = lambda u: np.exp(-np.asarray(u, dtype=float))
        with pytest.raises(ValueError):
            fm.z_ln_z_expectation(deriv, 2.0, CFG)
