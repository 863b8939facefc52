import math
from fractions import Fraction

import pytest

from stochord import Binomial, ParameterOrder, pmf
from stochord.derivatives import (
    binom_cdf_derivative,
    binom_cdf_derivative_check,
    binomial_cdf_gap,
    binomial_gap_derivative,
    binomial_gap_sign_changes,
    negbinom_cdf_derivative,
    negbinom_cdf_derivative_check,
    negbinomial_cdf_gap,
)


class TestBinomialDerivative:
    def test_single_trial(self):
        for p in (0.1, 0.5, 0.9):
            assert binom_cdf_derivative(1, p, 0) == -1.0

    def test_cdf_at_top_is_constant(self):
        assert binom_cdf_derivative(4, 0.3, 4) == 0.0

    def test_finite_difference(self):
        check = binom_cdf_derivative_check(5, 0.3, 2)
        assert check.abs_error < 1e-6

    @pytest.mark.parametrize("n", range(1, 8))
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_grid_finite_differences(self, n, p):
        for k in range(0, n + 1):
            assert binom_cdf_derivative_check(n, p, k).abs_error < 1e-6

    def test_telescoping_exact(self):
        # summing the per-mass derivative differences collapses exactly
        n, p = 6, Fraction(2, 7)
        for k in range(0, n):
            total = Fraction(0)
            for j in range(0, k + 1):
                upper = pmf(Binomial(n - 1, p), j) if 0 <= j <= n - 1 else Fraction(0)
                lower = pmf(Binomial(n - 1, p), j - 1) if 1 <= j else Fraction(0)
                total += -n * (upper - lower)
            assert total == -n * pmf(Binomial(n - 1, p), k)


class TestNegBinomialDerivative:
    def test_geometric_first_mass(self):
        for p in (0.2, 0.5, 0.8):
            assert math.isclose(negbinom_cdf_derivative(1, p, 1), 1.0, rel_tol=1e-12)

    def test_non_integer_r_finite_difference(self):
        check = negbinom_cdf_derivative_check(2.5, 0.4, 3)
        assert check.abs_error < 1e-6

    def test_integer_r_identity(self):
        # the derivative formula equals (n+k-1) b_{n+k-2,1-p}({k-1})
        for n in (1, 2, 4):
            for k in (1, 2, 5):
                for p in (0.3, 0.6):
                    direct = negbinom_cdf_derivative(n, p, k)
                    via_binomial = (n + k - 1) * float(pmf(Binomial(n + k - 2, 1 - p), k - 1)) if n + k - 2 >= 1 else (n + k - 1) * (1.0 if k - 1 == 0 else 0.0)
                    assert math.isclose(direct, via_binomial, rel_tol=1e-10), (n, k, p)

    def test_exact_path_for_integer_r(self):
        check = negbinom_cdf_derivative_check(2, 0.5, 4)
        assert check.abs_error < 1e-8


class TestGapFunctions:
    def test_boundary_values_vanish(self):
        assert binomial_cdf_gap(2, 4, 1, 0.0) == 0.0
        assert binomial_cdf_gap(2, 4, 1, 1.0) == 0.0

    def test_nonnegative_on_grid(self):
        for p in (i / 100 for i in range(1, 100)):
            assert binomial_cdf_gap(2, 4, 1, p) >= 0

    def test_negbinomial_gap_positive_inside(self):
        values = [negbinomial_cdf_gap(2, 1, 2, i / 100) for i in range(1, 100)]
        assert min(values) > 0
        assert negbinomial_cdf_gap(2, 1, 2, 1.0) == 0.0

    def test_parameter_order_enforced(self):
        with pytest.raises(ParameterOrder):
            binomial_cdf_gap(4, 2, 1, 0.5)
        with pytest.raises(ParameterOrder):
            negbinomial_cdf_gap(1, 2, 2, 0.5)
        with pytest.raises(ParameterOrder):
            negbinomial_cdf_gap(2, 2, 2, 0.5)

    def test_k_range_enforced(self):
        with pytest.raises(ValueError):
            binomial_cdf_gap(2, 4, 0, 0.5)
        with pytest.raises(ValueError):
            binomial_cdf_gap(2, 4, 2, 0.5)


class TestGapDerivative:
    def test_matches_finite_difference_of_gap(self):
        h = 1e-6
        for n1, n2, k in ((2, 4, 1), (3, 5, 2)):
            for p in (0.2, 0.5, 0.8):
                analytic = binomial_gap_derivative(n1, n2, k, p)
                fd = (binomial_cdf_gap(n1, n2, k, p + h) - binomial_cdf_gap(n1, n2, k, p - h)) / (2 * h)
                assert math.isclose(analytic, fd, rel_tol=1e-5, abs_tol=1e-7), (n1, n2, k, p)

    def test_positive_near_zero(self):
        # the scaled limit is C(n2-1,k) - C(n1-1,k) (n2/n1)^k > 0
        for n1, n2 in ((2, 3), (2, 4), (3, 5)):
            for k in range(1, n1):
                limit = math.comb(n2 - 1, k) - math.comb(n1 - 1, k) * (n2 / n1) ** k
                assert limit > 0
                assert binomial_gap_derivative(n1, n2, k, 1e-6) > 0

    @pytest.mark.parametrize("n1,n2", [(2, 3), (2, 4), (3, 5)])
    def test_at_most_one_sign_change(self, n1, n2):
        for k in range(1, n1):
            assert binomial_gap_sign_changes(n1, n2, k) <= 1

    def test_last_valid_k(self):
        for n1, n2 in ((3, 4), (4, 6), (5, 8)):
            assert binomial_gap_sign_changes(n1, n2, n1 - 1) <= 1
