import math

import pytest

from fracmoment import cauchy_renyi as cr
from fracmoment import oracles
from fracmoment.quadrature import QuadratureConfig
from fracmoment.special import gamma

CFG = QuadratureConfig()


class TestFamilyValidation:
    def test_rejects_non_normalizable(self):
        with pytest.raises(ValueError, match="normalizable"):
            cr.CauchyFamily(2, 2.0, 1.0, 2.0)

    def test_rejects_alpha_one(self):
        with pytest.raises(ValueError):
            cr.CauchyFamily(1, 2.0, 1.0, 1.0)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            cr.CauchyFamily(0, 2.0, 1.0, 2.0)


class TestZFunction:
    def test_square_case(self):
        z = cr.z_function(2.0)
        assert z.coefficient == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert z.exponent == 0.5

    def test_absolute_case(self):
        z = cr.z_function(1.0)
        assert z.coefficient == pytest.approx(2.0, rel=1e-14)
        assert z.exponent == 1.0

    def test_evaluation(self):
        z = cr.z_function(2.0)
        assert z(1.0) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert z(4.0) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            cr.z_function(0.0)


class TestNormalization:
    def test_standard_one_dimensional(self):
        fam = cr.CauchyFamily(1, 2.0, 1.0, 2.0)
        assert cr.normalization_cn(fam, CFG) == pytest.approx(1.0 / math.pi, rel=1e-11)

    def test_two_dimensional(self):
        fam = cr.CauchyFamily(2, 2.0, 1.5, 2.0)
        assert cr.normalization_cn(fam, CFG) == pytest.approx(
            1.0 / (2.0 * math.pi), rel=1e-11
        )

    def test_absolute_kernel(self):
        fam = cr.CauchyFamily(1, 1.0, 2.0, 2.0)
        assert cr.normalization_cn(fam, CFG) == pytest.approx(0.5, rel=1e-11)

    def test_closed_form_gamma_ratio(self):
        # Gamma((n+1)/2) / pi^((n+1)/2) for theta = 2, q = (n+1)/2
        for n in (1, 2, 3):
            fam = cr.CauchyFamily(n, 2.0, (n + 1) / 2.0, 2.0)
            expected = gamma((n + 1) / 2.0) / math.pi ** ((n + 1) / 2.0)
            assert cr.normalization_cn(fam, CFG) == pytest.approx(expected, rel=1e-10)

    def test_density_integrates_to_one(self):
        for n in (1, 2):
            fam = cr.CauchyFamily(n, 2.0, (n + 3) / 2.0, 2.0)
            lib = cr.normalization_cn(fam, CFG)
            direct = oracles.direct_renyi_normalization(fam)
            assert lib == pytest.approx(direct, rel=1e-6)


class TestKernelMoments:
    def test_match_gamma_closed_form(self):
        # int t^{q-1} e^-t (d/dt)^l Z^n reduces to c^n rising Gamma(q-ne-l)
        fam = cr.CauchyFamily(1, 2.0, 3.0, 0.5)
        z = cr.z_function(2.0)
        ne = z.exponent
        for l in range(3):
            value = cr._kernel_moment_integral(fam, l, CFG)
            rising = math.prod(ne + i for i in range(l))
            expected = z.coefficient * rising * gamma(fam.q - ne - l)
            assert value == pytest.approx(expected, rel=1e-10)


class TestHighBranch:
    def test_order_two_standard(self):
        fam = cr.CauchyFamily(1, 2.0, 1.0, 2.0)
        assert cr.renyi_entropy_high(fam, CFG) == pytest.approx(
            math.log(2.0 * math.pi), abs=1e-9
        )

    def test_order_three_standard(self):
        fam = cr.CauchyFamily(1, 2.0, 1.0, 3.0)
        expected = 0.5 * math.log(8.0 * math.pi**2 / 3.0)
        assert cr.renyi_entropy_high(fam, CFG) == pytest.approx(expected, abs=1e-9)

    def test_two_dimensional_against_oracle(self):
        fam = cr.CauchyFamily(2, 2.0, 1.5, 2.0)
        assert cr.renyi_entropy_high(fam, CFG) == pytest.approx(
            oracles.direct_renyi(fam), abs=1e-5
        )

    def test_custom_kernel_callable(self):
        fam = cr.CauchyFamily(1, 2.0, 1.0, 2.0)
        z = cr.z_function(2.0)
        value = cr.renyi_entropy_high(fam, CFG, z_fn=lambda t: z(t))
        assert value == pytest.approx(math.log(2.0 * math.pi), abs=1e-8)

    def test_rejects_low_order(self):
        with pytest.raises(ValueError):
            cr.renyi_entropy_high(cr.CauchyFamily(1, 2.0, 2.0, 0.5), CFG)


class TestLowBranch:
    def test_divergent_parameters_rejected(self):
        # alpha q theta = 1 = n fails the strict inequality
        with pytest.raises(ValueError, match="divergent"):
            cr.renyi_entropy_low(cr.CauchyFamily(1, 2.0, 1.0, 0.5), CFG)

    def test_integer_order_branch(self):
        fam = cr.CauchyFamily(1, 2.0, 2.0, 0.5)  # rho = 1
        assert cr.renyi_entropy_low(fam, CFG) == pytest.approx(
            oracles.direct_renyi(fam), abs=1e-6
        )

    def test_fractional_branch(self):
        fam = cr.CauchyFamily(1, 2.0, 2.0, 0.75)  # rho = 0.5
        assert cr.renyi_entropy_low(fam, CFG) == pytest.approx(
            oracles.direct_renyi(fam), abs=1e-6
        )

    def test_fractional_branch_closed_form(self):
        # theta 1.5, q 3, alpha 0.45: exact value from Beta-function algebra
        fam = cr.CauchyFamily(1, 1.5, 3.0, 0.45)
        assert cr.renyi_entropy_low(fam, CFG) == pytest.approx(
            1.736716120700341, abs=1e-9
        )

    @pytest.mark.parametrize(
        "fam",
        [
            cr.CauchyFamily(2, 2.0, 3.0, 0.75),
            cr.CauchyFamily(2, 2.0, 4.0, 0.5),
            cr.CauchyFamily(1, 2.0, 4.0, 0.6),
            cr.CauchyFamily(2, 2.0, 2.5, 0.9),
        ],
    )
    def test_low_branch_against_oracle(self, fam):
        assert cr.renyi_entropy_low(fam, CFG) == pytest.approx(
            oracles.direct_renyi(fam), abs=1e-5
        )

    def test_branch_continuity(self):
        # rho = q(1-alpha) crossing 1: nearby fractional orders bracket the
        # integer-branch value within half a percent
        exact = cr.renyi_entropy_low(cr.CauchyFamily(1, 2.0, 2.0, 0.5), CFG)
        below = cr.renyi_entropy_low(cr.CauchyFamily(1, 2.0, 2.0, 0.5 + 5e-4), CFG)
        above = cr.renyi_entropy_low(cr.CauchyFamily(1, 2.0, 2.0, 0.5 - 5e-4), CFG)
        assert abs(below - exact) / abs(exact) < 0.005
        assert abs(above - exact) / abs(exact) < 0.005
        assert min(below, above) <= exact <= max(below, above)


class TestGlobalShape:
    def test_monotone_in_order(self):
        values = [
            cr.renyi_entropy(cr.CauchyFamily(1, 2.0, 1.0, a), CFG)
            for a in (1.5, 2.0, 3.0, 5.0)
        ]
        assert all(x >= y - 1e-12 for x, y in zip(values, values[1:]))

    def test_shannon_limit_bracket(self):
        target = math.log(4.0 * math.pi)
        below = cr.renyi_entropy(cr.CauchyFamily(1, 2.0, 1.0, 0.99), CFG)
        above = cr.renyi_entropy(cr.CauchyFamily(1, 2.0, 1.0, 1.01), CFG)
        assert abs(below - target) / target < 0.02
        assert abs(above - target) / target < 0.02
        assert above <= target <= below
