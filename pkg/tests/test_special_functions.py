"""Tests for the Gamma, Pochhammer and Gauss hypergeometric layer."""

import logging
import math
from unittest.mock import patch

import mpmath
import numpy as np
import pytest
from scipy import special

from singular_kernels.exceptions import DomainError, ParameterError
from singular_kernels.models import GaussParams
from singular_kernels.special_functions import (
    at_one_exponents,
    gauss_2f1,
    gauss_2f1_at_one,
    gauss_2f1_batch,
    gauss_limit_at_one,
    kummer_doubled,
    ln_gamma,
    log_factorial_table,
    pfaff_transform,
    pochhammer,
    pochhammer_log_table,
    richardson_limit,
    signed_ln_gamma,
)


class TestLnGamma:
    """Test cases for ln_gamma and signed_ln_gamma."""

    def test_known_values(self):
        """Test ln Gamma at 1, 1/2 and 5."""
        assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
        assert ln_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-13)
        assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-13)

    def test_matches_scipy_on_interval(self):
        """Test agreement with scipy's gammaln on [0.1, 50]."""
        z = np.linspace(0.1, 50.0, 997)
        np.testing.assert_allclose(
            ln_gamma(z), special.gammaln(z), rtol=1e-13, atol=1e-13
        )

    def test_scalar_returns_float(self):
        """Test that a scalar argument gives a plain float."""
        assert isinstance(ln_gamma(3.5), float)

    def test_array_shape_preserved(self):
        """Test that array arguments keep their shape."""
        z = np.array([[0.5, 1.5], [2.5, 3.5]])
        assert ln_gamma(z).shape == (2, 2)

    @pytest.mark.parametrize("z", [0.0, -1.5, float("nan")])
    def test_nonpositive_argument_raises(self, z):
        """Test that z <= 0 is outside the domain."""
        with pytest.raises(DomainError) as exc_info:
            ln_gamma(z)
        assert exc_info.value.error_code == "GAMMA_DOMAIN"

    def test_signed_negative_argument(self):
        """Test Gamma(-1/2) = -2 sqrt(pi)."""
        value, sign = signed_ln_gamma(-0.5)
        assert sign == -1
        assert value == pytest.approx(math.log(2.0 * math.sqrt(math.pi)), rel=1e-13)

    def test_signed_positive_argument(self):
        assert signed_ln_gamma(2.5) == (ln_gamma(2.5), 1)

    @pytest.mark.parametrize("z", [0.0, -1.0, -3.0])
    def test_signed_pole_raises(self, z):
        with pytest.raises(DomainError) as exc_info:
            signed_ln_gamma(z)
        assert exc_info.value.error_code == "GAMMA_POLE"


class TestPochhammer:
    """Test cases for the rising factorial and its log tables."""

    def test_examples(self):
        """Test (1)_5, (7.3)_0 and (3)_2."""
        assert pochhammer(1.0, 5) == 120.0
        assert pochhammer(7.3, 0) == 1.0
        assert pochhammer(3.0, 2) == 12.0

    def test_zero_index_with_zero_base(self):
        """Test the (0)_0 = 1 convention."""
        assert pochhammer(0.0, 0) == 1.0

    @pytest.mark.parametrize("kappa", [0.3, -2.5, 1.0, 4.75])
    def test_recurrence(self, kappa):
        """Test (k)_(l+1) = (k)_l (k + l) for l up to 30."""
        for nu in range(30):
            assert pochhammer(kappa, nu + 1) == pytest.approx(
                pochhammer(kappa, nu) * (kappa + nu), rel=1e-15
            )

    def test_negative_index_raises(self):
        with pytest.raises(DomainError) as exc_info:
            pochhammer(1.0, -1)
        assert exc_info.value.error_code == "POCHHAMMER_INDEX"

    def test_log_table_matches_direct_product(self):
        """Test that sign * exp(log) reproduces pochhammer."""
        logs, signs = pochhammer_log_table(-1.3, 12)
        for j in range(12):
            assert signs[j] * math.exp(logs[j]) == pytest.approx(
                pochhammer(-1.3, j), rel=1e-13
            )

    def test_log_table_after_zero_factor(self):
        """Test that entries after a vanishing factor have sign 0."""
        logs, signs = pochhammer_log_table(-2.0, 6)
        assert list(signs) == [1.0, -1.0, 1.0, 0.0, 0.0, 0.0]
        assert logs[1] == pytest.approx(math.log(2.0))
        assert np.isneginf(logs[3])

    def test_log_factorial_table(self):
        np.testing.assert_allclose(
            log_factorial_table(6), np.log([1, 1, 2, 6, 24, 120]), atol=1e-14
        )


class TestPfaffTransform:
    """Test cases for the Pfaff transformation."""

    def test_fixed_point_at_zero(self):
        """Test x = 0: argument 0, prefactor 1."""
        _, y, prefactor = pfaff_transform(GaussParams(0.3, 0.4, 1.2), 0.0)
        assert y == 0.0
        assert prefactor == 1.0

    def test_minus_one(self):
        """Test x = -1: argument 1/2, prefactor 2^(-b)."""
        _, y, prefactor = pfaff_transform(GaussParams(0.3, 0.4, 1.2), -1.0)
        assert y == 0.5
        assert prefactor == pytest.approx(2.0**-0.4)

    def test_far_negative_argument(self):
        """Test x = -4 against the analytic continuation."""
        p = GaussParams(0.5, 0.3, 0.6)
        q, y, prefactor = pfaff_transform(p, -4.0)

        assert (q.a, q.b, q.c) == pytest.approx((0.1, 0.3, 0.6))
        assert y == pytest.approx(0.8)
        assert prefactor == pytest.approx(5.0**-0.3)

        composite = prefactor * gauss_2f1(q, y).value
        expected = float(mpmath.hyp2f1(0.5, 0.3, 0.6, -4))
        assert composite == pytest.approx(expected, rel=1e-11)

    def test_requires_argument_below_one(self):
        with pytest.raises(DomainError):
            pfaff_transform(GaussParams(0.3, 0.4, 1.2), 1.0)


class TestGauss2F1:
    """Test cases for the Gauss hypergeometric series."""

    def test_zero_argument(self):
        """Test F(a, b; c; 0) = 1 with a single term."""
        result = gauss_2f1(GaussParams(0.3, 0.4, 1.2), 0.0)
        assert result.value == 1.0
        assert result.terms_used == 1
        assert result.error_estimate == 0.0

    def test_binomial_identity(self):
        """Test F(a, b; b; x) = (1 - x)^(-a)."""
        result = gauss_2f1(GaussParams(0.5, 1.0, 1.0), 0.25)
        assert result.value == pytest.approx(0.75**-0.5, rel=1e-14)
        assert result.converged
        assert result.method == "series"

    def test_negative_argument_uses_pfaff(self):
        """Test that x < -1/2 is mapped and still gives the analytic value."""
        result = gauss_2f1(GaussParams(0.3, 0.4, 1.2), -0.6)
        assert result.method == "series+pfaff"
        assert result.value == pytest.approx(
            float(mpmath.hyp2f1(0.3, 0.4, 1.2, -0.6)), rel=1e-13
        )
        assert 1 / 3 < result.diagnostics["argument"] < 1 / 2

    @pytest.mark.parametrize(
        "a, b, c, x",
        [
            (0.3, 0.4, 1.2, 0.5),
            (1.5, 0.7, 2.1, -0.3),
            (0.25, 1.75, 0.6, 0.9),
            (1.2, 1.9, 0.8, -0.85),
            (-0.5, 2.5, 3.5, 0.7),
        ],
    )
    def test_matches_mpmath(self, a, b, c, x):
        """Test agreement with mpmath across the disk."""
        result = gauss_2f1(GaussParams(a, b, c), x)
        expected = float(mpmath.hyp2f1(a, b, c, x))
        assert result.value == pytest.approx(expected, rel=1e-12)

    def test_terminating_series(self):
        """Test that a = -2 gives a quadratic, summed without Pfaff."""
        result = gauss_2f1(GaussParams(-2.0, 0.5, 1.0), -0.8)
        assert result.method == "series"
        assert result.value == pytest.approx(2.04, rel=1e-14)

    @pytest.mark.parametrize("x", [1.0, -1.0, 1.5])
    def test_outside_unit_disk_raises(self, x):
        """Test that |x| >= 1 is rejected."""
        with pytest.raises(DomainError) as exc_info:
            gauss_2f1(GaussParams(0.3, 0.4, 1.2), x)
        assert exc_info.value.error_code == "GAUSS_DOMAIN"
        assert "argument outside |x|<1" in str(exc_info.value)

    def test_nonpositive_integer_c_rejected(self):
        with pytest.raises(ParameterError) as exc_info:
            GaussParams(0.3, 0.4, -1.0)
        assert exc_info.value.error_code == "NONPOSITIVE_INTEGER"

    def test_nonpositive_tolerance_rejected(self):
        with pytest.raises(ParameterError) as exc_info:
            gauss_2f1(GaussParams(0.3, 0.4, 1.2), 0.5, tol=0.0)
        assert exc_info.value.error_code == "TOLERANCE"

    def test_term_cap_flags_truncation(self, caplog):
        """Test that hitting max_terms is reported, not raised."""
        logger_name = "singular_kernels.special_functions"
        with caplog.at_level(logging.WARNING, logger=logger_name):
            result = gauss_2f1(GaussParams(0.3, 0.4, 1.2), 0.99, max_terms=10)

        assert not result.converged
        assert result.terms_used == 10
        assert result.error_estimate > 0
        assert "hit the 10-term cap" in caplog.text


class TestGaussAtOne:
    """Test cases for the summation theorem and the x -> 1 extrapolation."""

    def test_known_values(self):
        """Test F(1/2, 1/2; 2; 1) = 4/pi and F(1/4, 1/4; 1; 1)."""
        assert gauss_2f1_at_one(GaussParams(0.5, 0.5, 2.0)) == pytest.approx(
            4.0 / math.pi, rel=1e-13
        )
        expected = math.gamma(0.5) / math.gamma(0.75) ** 2
        assert gauss_2f1_at_one(GaussParams(0.25, 0.25, 1.0)) == pytest.approx(
            expected, rel=1e-13
        )

    def test_vanishing_denominator_gamma(self):
        """Test that c - a in {0, -1, ...} gives exactly zero."""
        assert gauss_2f1_at_one(GaussParams(3.0, -2.5, 2.0)) == 0.0

    def test_divergent_case_raises(self):
        """Test that c - a - b <= 0 is rejected."""
        with pytest.raises(DomainError) as exc_info:
            gauss_2f1_at_one(GaussParams(0.5, 0.5, 1.0))
        assert exc_info.value.error_code == "GAUSS_AT_ONE"

    def test_extrapolation_matches_gamma_quotient(self):
        """Test that the Richardson limit of the series reaches F(1)."""
        p = GaussParams(0.3, 0.4, 1.5)
        assert gauss_limit_at_one(p) == pytest.approx(gauss_2f1_at_one(p), rel=1e-5)

    def test_at_one_exponents(self):
        """Test the merged integer and shifted exponent ladders."""
        assert at_one_exponents(0.5, 4) == [0.5, 1.0, 1.5, 2.0]
        assert at_one_exponents(1.0, 3) == [1.0, 2.0, 3.0]


class TestGaussBatch:
    """Test cases for the vectorized Gauss function."""

    def test_matches_scalar_series(self):
        a = np.array([0.5, 0.3, 1.1])
        b = np.array([1.0, 0.4, 0.2])
        c = np.array([1.0, 1.2, 1.7])
        x = np.array([0.25, -0.6, 0.8])
        batch = gauss_2f1_batch(a, b, c, x)
        for i in range(3):
            scalar = gauss_2f1(GaussParams(a[i], b[i], c[i]), x[i]).value
            assert batch[i] == pytest.approx(scalar, rel=1e-12)

    def test_argument_close_to_one(self):
        """Test a table entry just below the unit argument."""
        value = gauss_2f1_batch(0.2, 0.3, 1.0, 1.0 - 1e-9)
        assert float(value) == pytest.approx(
            float(mpmath.hyp2f1(0.2, 0.3, 1.0, 1.0 - 1e-9)), rel=1e-8
        )

    def test_argument_one_rejected(self):
        with pytest.raises(DomainError):
            gauss_2f1_batch(0.2, 0.3, 1.0, np.array([0.5, 1.0]))

    def test_resonant_excess_near_one(self):
        """Test c - a - b = 1 up to rounding, where scipy returns inf."""
        a, b, c, x = -0.19999999999999973, 0.8, 1.6, 0.99994
        value = gauss_2f1_batch(a, b, c, x)
        assert np.isfinite(value)
        assert float(value) == pytest.approx(
            float(mpmath.hyp2f1(a, b, c, x)), rel=1e-10
        )

    def test_large_shifted_parameters_near_one(self):
        """Test a table of shifted factors F(2B+M-a-N, B+M; 2B+M; z)."""
        B, a, z = 0.3, 1.1, 0.999
        m_values = np.array([0, 10, 100, 400])
        n_values = np.array([0, 30, 150, 500])
        c = 2.0 * B + m_values
        values = gauss_2f1_batch(c - a - n_values, B + m_values, c, z)
        assert np.all(np.isfinite(values))
        for i in range(4):
            expected = mpmath.hyp2f1(c[i] - a - n_values[i], B + m_values[i], c[i], z)
            assert values[i] == pytest.approx(float(expected), rel=1e-9)

    def test_scalar_input_keeps_shape(self):
        assert gauss_2f1_batch(0.2, 0.3, 1.0, 0.25).shape == ()

    def test_non_finite_factor_rejected(self):
        with patch(
            "singular_kernels.special_functions._mp_hyp2f1",
            return_value=np.array([np.nan]),
        ):
            with pytest.raises(DomainError) as exc_info:
                gauss_2f1_batch(0.2, 0.3, 1.0, 0.9)
        assert exc_info.value.error_code == "GAUSS_NONFINITE"


class TestKummerDoubled:
    """Test cases for M(b, 2b; -y)."""

    @pytest.mark.parametrize("b", [0.2, 0.5, 0.85])
    @pytest.mark.parametrize("y", [1e-12, 1e-3, 0.7, 12.0, 350.0])
    def test_against_mpmath(self, b, y):
        expected = float(mpmath.hyp1f1(b, 2 * b, -y))
        assert kummer_doubled(b, y) == pytest.approx(expected, rel=1e-12)

    def test_zero_argument(self):
        values = kummer_doubled(0.3, np.array([0.0, 0.0]))
        assert np.all(values == 1.0)

    def test_power_law_tail(self):
        b, y = 0.35, 1e7
        expected = math.gamma(2 * b) / math.gamma(b) * y**-b
        assert kummer_doubled(b, y) == pytest.approx(expected, rel=1e-6)


class TestRichardson:
    """Test cases for Richardson extrapolation."""

    def test_polynomial_error_eliminated(self):
        """Test that T(h) = 2 + 3h + 5h^2 extrapolates to 2."""
        h = [1.0, 0.5, 0.25]
        values = [2.0 + 3.0 * t + 5.0 * t * t for t in h]
        assert richardson_limit(values, [1, 2]) == pytest.approx(2.0, abs=1e-12)

    def test_fractional_exponent(self):
        """Test a sqrt(h) leading error with ratio 4."""
        h = [1.0, 0.25, 0.0625]
        values = [1.0 + math.sqrt(t) + t for t in h]
        assert richardson_limit(values, [0.5, 1.0], ratio=4.0) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_single_sample(self):
        assert richardson_limit([3.5], []) == 3.5
