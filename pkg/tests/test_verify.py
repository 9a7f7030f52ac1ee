"""Tests for the verification suites."""

import math

import numpy as np
import pytest

from singular_kernels.exceptions import DomainError, ParameterError
from singular_kernels.fundsol import solution_family
from singular_kernels.models import DeltaVector, FDScheme, ProblemConfig
from singular_kernels.verify import (
    SMOOTH_TEST_FIELDS,
    apply_operator,
    boundary_property_check,
    boundary_suite,
    constructive_identity_check,
    convergence_check,
    decomposition_suite,
    default_direction,
    default_scheme,
    gauss_suite,
    identity_suite,
    index_suite,
    limit_check,
    local_scale,
    normalized_residual,
    operator_terms,
    pde_suite,
    q_field,
    radial_exponent_study,
    random_lauricella_params,
    residual_suite,
    sample_points,
    singularity_fit,
    singularity_suite,
)
from tests.test_fixtures import SampleProblems

RESIDUAL_GRID = [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)]
SLOPE_GRID = [(m, n) for m in (3, 4, 5) for n in (1, 2)]


class TestOperator:
    """Test cases for the finite-difference operator."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_one_singular()
        self.scheme = FDScheme(h=1e-2, order=4)

    def test_quadratic_field(self):
        """Test L |x|^2 = 2m + 4 alpha_1."""
        value = apply_operator(
            lambda x: sum(v * v for v in x), (1.3, 0.2, -0.4), self.cfg, self.scheme
        )
        assert value == pytest.approx(7.0, rel=1e-8)

    def test_terms_split(self):
        second, first = operator_terms(
            lambda x: x[0] ** 2, (2.0, 0.0, 0.0), self.cfg, self.scheme
        )
        assert len(second) == 3
        assert len(first) == 1
        assert second[0] == pytest.approx(2.0, rel=1e-8)
        assert first[0] == pytest.approx(2.0 * 0.25 / 2.0 * 4.0, rel=1e-8)

    def test_alpha_override(self):
        value = apply_operator(
            lambda x: x[0] ** 2, (1.0, 0.0, 0.0), self.cfg, self.scheme, alpha=(0.0,)
        )
        assert value == pytest.approx(2.0, rel=1e-8)

    def test_singular_power_is_annihilated(self):
        """Test that x_1^(1 - 2 alpha) solves the equation."""
        residual = normalized_residual(
            lambda x: x[0] ** 0.5, (1.0, 0.3, 0.3), self.cfg, FDScheme(h=1e-3)
        )
        assert residual < 1e-6

    def test_harmonic_field_without_singular_coefficients(self):
        residual = normalized_residual(
            lambda x: x[0] ** 2 - x[1] ** 2,
            (0.4, 0.9, 1.1),
            SampleProblems.laplace_3d(),
            FDScheme(h=1e-2, order=2),
        )
        assert residual < 1e-8

    def test_stencil_leaving_domain(self):
        with pytest.raises(DomainError) as exc_info:
            apply_operator(lambda x: 1.0, (0.01, 0.0, 0.0), self.cfg, self.scheme)
        assert exc_info.value.error_code == "STENCIL_DOMAIN"

    def test_local_scale(self):
        x0 = SampleProblems.source_3d()
        assert local_scale((0.5, 2.0, 3.0), self.cfg, x0) == 0.5
        assert local_scale((1.0, 0.5, 0.6), self.cfg, x0) == pytest.approx(0.1)
        assert local_scale((1.0, 2.0, 3.0), SampleProblems.laplace_3d()) == 1.0

    def test_default_scheme(self):
        scheme = default_scheme((0.5, 2.0, 3.0), self.cfg, SampleProblems.source_3d())
        assert scheme.h == pytest.approx(5e-4)
        assert scheme.order == 4


class TestSamplePoints:
    """Test cases for deterministic sampling around the source."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_two_singular()
        self.x0 = SampleProblems.source_3d()

    def test_deterministic(self):
        assert sample_points(self.cfg, self.x0, 5, seed=7) == sample_points(
            self.cfg, self.x0, 5, seed=7
        )
        assert sample_points(self.cfg, self.x0, 5, seed=7) != sample_points(
            self.cfg, self.x0, 5, seed=8
        )

    def test_points_stay_inside(self):
        for point in sample_points(self.cfg, self.x0, 20, seed=1):
            assert point[0] >= 0.25
            assert point[1] >= 0.125
            distance = math.dist(point, self.x0)
            assert 0.75 - 1e-12 <= distance <= 1.5 + 1e-12

    def test_zero_count(self):
        assert sample_points(self.cfg, self.x0, 0) == []


class TestPdeSuite:
    """Test cases for the residual checks."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_one_singular()
        self.x0 = SampleProblems.source_3d()
        self.points = sample_points(self.cfg, self.x0, 2, seed=1)

    def test_residual_suite_passes(self):
        report = residual_suite(self.cfg, self.x0, self.points)
        assert report.suite == "pde"
        assert [c.name for c in report.checks] == [
            "residual q1 delta=(0,) (shifted)",
            "residual q2 delta=(1,) (shifted)",
        ]
        assert report.passed, [c.observed for c in report.checks]
        assert all(c.details["points"] == 2 for c in report.checks)

    def test_residual_suite_two_singular(self):
        cfg = SampleProblems.problem_3d_two_singular()
        report = residual_suite(cfg, self.x0, sample_points(cfg, self.x0, 2, seed=2))
        assert len(report.checks) == 4
        assert report.passed

    def test_residual_suite_plane_two_singular(self):
        """Test all four q_k for m = 2, n = 2."""
        cfg = SampleProblems.problem_plane_two_singular()
        x0 = (1.0, 0.8)
        report = residual_suite(cfg, x0, sample_points(cfg, x0, 2, seed=3))
        assert len(report.checks) == 4
        assert report.passed

    def test_residual_three_singular(self):
        cfg = ProblemConfig(m=3, n=3, alpha=(0.15, 0.3, 0.4))
        x0 = (1.0, 1.0, 1.0)
        report = residual_suite(cfg, x0, sample_points(cfg, x0, 2, seed=4))
        assert len(report.checks) == 8
        assert report.passed, [c.observed for c in report.checks]

    def test_residual_four_dimensions_two_singular(self):
        cfg = ProblemConfig(m=4, n=2, alpha=(0.2, 0.35))
        x0 = (1.0, 1.0, 0.5, 0.5)
        report = residual_suite(cfg, x0, sample_points(cfg, x0, 2, seed=5))
        assert len(report.checks) == 4
        assert report.passed, [c.observed for c in report.checks]

    @pytest.mark.slow
    @pytest.mark.parametrize("m,n", RESIDUAL_GRID)
    def test_residual_random_alpha(self, m, n):
        """Test 20 points per configuration with alpha drawn from (0.05, 0.45)."""
        rng = np.random.default_rng(10 * m + n)
        alpha = tuple(float(v) for v in rng.uniform(0.05, 0.45, n))
        cfg = ProblemConfig(m=m, n=n, alpha=alpha)
        x0 = (1.0,) * n + (0.5,) * (m - n)
        points = sample_points(cfg, x0, 20, seed=10 * m + n)
        report = residual_suite(cfg, x0, points)
        assert len(report.checks) == 2**n
        assert report.passed, [c.observed for c in report.checks]
        for d, _ in solution_family(cfg):
            assert convergence_check(cfg, x0, points[0], d).passed

    def test_newtonian_kernel_residual(self):
        cfg = SampleProblems.laplace_3d()
        report = residual_suite(cfg, (0.0, 0.0, 0.0), [(1.0, 0.5, -0.2)])
        assert report.checks[0].observed <= 1e-6

    def test_point_too_close_to_source(self):
        with pytest.raises(DomainError) as exc_info:
            residual_suite(
                self.cfg, self.x0, [(1.0, 0.5, 0.55)], s=FDScheme(h=0.01)
            )
        assert exc_info.value.error_code == "STENCIL_SOURCE"

    def test_convergence_check(self):
        check = convergence_check(self.cfg, self.x0, self.points[0], DeltaVector((0,)))
        assert check.name == "h-refinement q1"
        assert check.passed
        assert check.details["fine"] < check.details["coarse"]

    def test_radial_exponent_study_reports_only(self):
        report = radial_exponent_study(self.cfg, self.x0, self.points[:1])
        assert report.suite == "radial-exponent"
        assert all(c.status == "INFO" for c in report.checks)
        assert report.passed
        q1, q2 = report.checks
        assert q1.name.endswith("(displayed)")
        assert q2.observed > q1.observed

    def test_pde_suite(self):
        report = pde_suite(self.cfg, self.x0, self.points)
        names = [c.name for c in report.checks]
        assert names.count("h-refinement q1") == 1
        assert names.count("h-refinement q2") == 1
        assert len(names) == 6
        assert report.passed

    def test_q_field_matches_evaluate(self):
        from singular_kernels.fundsol import evaluate_q

        u = q_field(self.cfg, self.x0, DeltaVector((1,)), gamma=2.0)
        x = (0.9, 0.1, 1.7)
        assert u(x) == evaluate_q(x, self.x0, self.cfg, DeltaVector((1,)), 2.0).value


class TestSingularity:
    """Test cases for the behaviour at the source."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_one_singular()
        self.x0 = SampleProblems.source_3d()

    def test_default_direction(self):
        assert default_direction(self.cfg) == (0.0, 0.0, 1.0)

    def test_slope(self):
        """Test that |q| grows like r^(2 - m)."""
        slope = singularity_fit(
            self.cfg, self.x0, default_direction(self.cfg), DeltaVector((0,))
        )
        assert slope == pytest.approx(-1.0, abs=0.01)

    def test_slope_five_dimensions(self):
        cfg = ProblemConfig(m=5, n=0)
        slope = singularity_fit(
            cfg, (0.0,) * 5, default_direction(cfg), DeltaVector(())
        )
        assert slope == pytest.approx(-3.0, rel=1e-3)

    @pytest.mark.parametrize("m,n", SLOPE_GRID)
    def test_slope_every_solution(self, m, n):
        """Test the order r^(2 - m) for every delta."""
        cfg = ProblemConfig(m=m, n=n, alpha=(0.2, 0.3)[:n])
        x0 = (1.0,) * m
        for d, _ in solution_family(cfg):
            slope = singularity_fit(cfg, x0, default_direction(cfg), d)
            assert slope == pytest.approx(-(m - 2.0), rel=0.01), d.delta

    def test_plane_rejected(self):
        cfg = SampleProblems.problem_plane_two_singular()
        with pytest.raises(DomainError) as exc_info:
            singularity_fit(cfg, (1.0, 1.0), (0.0, 1.0), DeltaVector((0, 0)))
        assert exc_info.value.error_code == "SINGULARITY_DIMENSION"

    def test_zero_direction(self):
        with pytest.raises(ParameterError) as exc_info:
            singularity_fit(self.cfg, self.x0, (0.0, 0.0, 0.0), DeltaVector((0,)))
        assert exc_info.value.error_code == "DIRECTION"

    @pytest.mark.parametrize("delta", [(0,), (1,)])
    def test_limit_check(self, delta):
        check = limit_check(self.cfg, self.x0, DeltaVector(delta))
        assert check.passed
        assert check.details["displayed_constant"] == pytest.approx(
            check.details["resummed_constant"], rel=1e-12
        )

    def test_limit_check_two_coordinates_against_resummed(self):
        cfg = SampleProblems.problem_3d_two_singular()
        check = limit_check(cfg, self.x0, DeltaVector((0, 0)))
        assert check.passed is not None
        assert check.status in ("PASS", "FAIL")
        assert check.threshold == 1e-4
        assert check.observed <= 1e-3
        assert check.details["limit_series"] > 0

    @pytest.mark.parametrize("delta", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_limit_check_four_dimensions_two_singular(self, delta):
        cfg = ProblemConfig(m=4, n=2, alpha=(0.2, 0.3))
        check = limit_check(cfg, (1.0, 0.5, 0.5, 0.5), DeltaVector(delta))
        assert check.passed, check.observed

    @pytest.mark.parametrize("delta", [(0,), (1,)])
    def test_limit_check_four_dimensions(self, delta):
        """Test even m, where the Gauss factor at the source has c - a - b = 1."""
        cfg = ProblemConfig(m=4, n=1, alpha=(0.2,))
        check = limit_check(cfg, (1.0, 0.5, 0.5, 0.5), DeltaVector(delta))
        assert check.passed, check.observed

    def test_singularity_suite(self):
        report = singularity_suite(self.cfg, self.x0)
        assert [c.name for c in report.checks] == [
            "singularity order q1",
            "limit constant q1",
            "singularity order q2",
            "limit constant q2",
        ]
        assert report.passed


class TestBoundary:
    """Test cases for the behaviour on x_j = 0."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_one_singular()
        self.x0 = SampleProblems.source_3d()

    def test_value_vanishes_for_delta_one(self):
        report = boundary_property_check(self.cfg, self.x0, DeltaVector((1,)), 1)
        asserted = [c for c in report.checks if c.passed is not None]
        assert [c.name for c in asserted] == ["q2 vanishes on x_1 = 0"]
        assert report.passed

    def test_derivative_vanishes_for_delta_zero(self):
        report = boundary_property_check(self.cfg, self.x0, DeltaVector((0,)), 1)
        asserted = [c for c in report.checks if c.passed is not None]
        assert [c.name for c in asserted] == ["dq1/dx_1 vanishes on x_1 = 0"]
        assert report.passed

    def test_boundary_index_range(self):
        with pytest.raises(ParameterError) as exc_info:
            boundary_property_check(self.cfg, self.x0, DeltaVector((0,)), 2)
        assert exc_info.value.error_code == "BOUNDARY_INDEX"

    def test_no_singular_coordinates(self):
        report = boundary_property_check(
            SampleProblems.laplace_3d(), (0.0, 0.0, 0.0), DeltaVector(()), 1
        )
        assert report.checks == []

    def test_boundary_suite(self):
        report = boundary_suite(self.cfg, self.x0)
        assert len(report.checks) == 4
        assert report.passed


class TestIdentity:
    """Test cases for L_alpha(x^p u) = x^p L_beta(u)."""

    def setup_method(self):
        self.cfg = SampleProblems.problem_3d_one_singular()
        self.x = (0.8, 0.6, 0.3)

    def test_identity_suite(self):
        report = identity_suite(self.cfg, self.x)
        assert [c.name for c in report.checks] == [
            "operator identity q1",
            "operator identity q2",
        ]
        assert report.passed
        assert report.checks[0].details["fields"] == len(SMOOTH_TEST_FIELDS)

    def test_identity_two_singular(self):
        report = identity_suite(SampleProblems.problem_3d_two_singular(), self.x)
        assert len(report.checks) == 4
        assert report.passed

    def test_single_field(self):
        check = constructive_identity_check(
            self.cfg, DeltaVector((1,)), SMOOTH_TEST_FIELDS["gaussian"], self.x,
            name="gaussian",
        )
        assert check.name == "operator identity q2 gaussian"
        assert check.passed
        assert check.details["left"] == pytest.approx(check.details["right"], rel=1e-5)

    def test_quadratic_plus_linear_field(self):
        """Test alpha = 0.3, delta = (1) with u = x_1^2 + x_2."""
        cfg = SampleProblems.problem_3d_one_singular(alpha=0.3)
        check = constructive_identity_check(
            cfg, DeltaVector((1,)), lambda x: x[0] ** 2 + x[1], self.x
        )
        assert check.passed

    def test_pure_product_solution(self):
        """Test that prod_j x_j^(1 - 2 alpha_j) is annihilated by L."""
        cfg = SampleProblems.problem_3d_two_singular()
        residual = normalized_residual(
            lambda x: x[0] ** 0.6 * x[1] ** 0.4, self.x, cfg, FDScheme(h=1e-3)
        )
        assert residual < 1e-6

    def test_delta_length(self):
        with pytest.raises(ParameterError):
            constructive_identity_check(
                self.cfg, DeltaVector((1, 0)), SMOOTH_TEST_FIELDS["constant"], self.x
            )


class TestSeriesSuites:
    """Test cases for the Gauss, decomposition and index suites."""

    def test_gauss_suite(self):
        report = gauss_suite(count=40, seed=3, limit_sets=3)
        assert [c.name for c in report.checks] == [
            "pfaff transformation",
            "binomial reduction",
            "summation at x = 1",
        ]
        assert report.passed
        assert report.checks[1].details["sets"] == 40
        assert 0 < report.checks[0].details["sets"] <= 40
        assert report.checks[2].details["sets"] <= 3

    def test_gauss_suite_without_limit_sets(self):
        report = gauss_suite(count=10, seed=0, limit_sets=0)
        assert report.checks[2].details["sets"] == 0
        assert report.checks[2].observed == 0.0

    def test_decomposition_suite(self):
        report = decomposition_suite(2, count=5, seed=4)
        assert [c.name for c in report.checks] == [
            "agreement decomposed-direct n=2",
            "agreement recurrence-direct n=2",
        ]
        assert report.passed

    def test_index_suite(self):
        report = index_suite(max_n=4, max_degree=3)
        assert report.suite == "indices"
        assert report.passed
        assert all(c.observed == 0.0 for c in report.checks)
        assert report.checks[0].name == "N_2(1,n) + N_3(k,n) = N_2(k,n)"

    def test_random_lauricella_params(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 3):
            p = random_lauricella_params(rng, n)
            assert p.n == n
            assert p.abs_sum <= 0.6 + 1e-12
            assert all(0.5 <= c <= 2.0 for c in p.c)
