"""
Тесты аппроксимации с эскалацией градуировки и функционалов ошибок.
"""

import numpy as np
import pytest

from src.approximation.approximators import (
    SamplingPlan,
    a_infinity_seminorm,
    derivative_constrained_approx,
    simultaneous_approx,
    sup_error,
)
from src.approximation.least_squares import ConstraintGroup, FitTask, fit_polynomial
from src.core.exceptions import (
    ApproximationBudgetError,
    PoleCollisionError,
    PreconditionError,
    ValidationError,
)
from src.geometry.compacts import ProductCompact, make_compact
from src.geometry.domains import DiskDomain
from src.geometry.sampling import sample
from src.series.enumerations import GRADED, make_enumeration
from src.series.polynomial import MultiPolynomial
from src.series.targets import make_target

ENUM_1D = make_enumeration(GRADED, 1)
PLAN = SamplingPlan(fit_density=16)


def _k(spec: str) -> ProductCompact:
    return ProductCompact((make_compact(spec),))


@pytest.mark.unit
class TestSimultaneousApprox:
    """P ≈ g на K и P ≈ 0 на L."""

    @pytest.mark.slow
    def test_one_on_segment_zero_on_disk(self):
        report = simultaneous_approx(
            make_target("constant 1", 1),
            _k("segment 2 3"),
            _k("disk 0 0.5"),
            1e-2,
            ENUM_1D,
            60,
        )
        assert report.group_errors["K"] < 1e-2
        assert report.group_errors["L"] < 1e-2
        assert 1 <= report.grading_bound <= 60

    def test_without_l_reduces_to_single_fit(self):
        target = make_target("1 : rat(1 / 0)", 1)
        report = simultaneous_approx(target, _k("segment 2 3"), None, 1e-4, ENUM_1D, 30, plan=PLAN)
        assert set(report.group_errors) == {"K"}

        fit_points = PLAN.fit_sample(_k("segment 2 3")).points
        validation_points = PLAN.validation_sample(_k("segment 2 3")).points
        group = ConstraintGroup.from_target("K", target, fit_points, validation_points)
        direct = fit_polynomial(FitTask([group], ENUM_1D.prefix_support(report.grading_bound)))
        assert direct.polynomial == report.polynomial

    def test_conflicting_overlap(self):
        with pytest.raises(PreconditionError):
            simultaneous_approx(
                make_target("constant 1", 1), _k("segment 2 3"), _k("segment 2 3"), 1e-2, ENUM_1D, 5, plan=PLAN
            )

    def test_budget_exhausted_keeps_best_report(self):
        with pytest.raises(ApproximationBudgetError) as exc_info:
            simultaneous_approx(
                make_target("1 : rat(1 / 1.1)", 1), _k("disk 0 1"), None, 1e-12, ENUM_1D, 2, plan=PLAN
            )
        assert exc_info.value.best_report is not None
        assert exc_info.value.best_report.grading_bound == 2

    @pytest.mark.parametrize("eps", [0.0, -1.0])
    def test_nonpositive_epsilon(self, eps):
        with pytest.raises(ValidationError):
            simultaneous_approx(make_target("zero", 1), _k("segment 0 1"), None, eps, ENUM_1D, 3)

    def test_two_dimensional_product(self):
        target = make_target("1 : poly(1 1), poly(0 0 1)", 2)
        compact = ProductCompact((make_compact("disk 0 1"), make_compact("segment -1 1")))
        report = simultaneous_approx(
            target, compact, None, 1e-8, make_enumeration(GRADED, 2), 6, plan=SamplingPlan(fit_density=8)
        )
        assert report.group_errors["K"] < 1e-8
        assert report.grading_bound == 3


@pytest.mark.unit
class TestDerivativeConstrainedApprox:
    """∂^a P ≈ ∂^a g на K для всех a ∈ I."""

    def test_polynomial_target_is_recovered(self):
        target = make_target("1 : poly(0 1 0 1)", 1)
        report = derivative_constrained_approx(target, _k("disk 0 1"), [(0,), (1,)], 1e-8, ENUM_1D, 10, plan=PLAN)
        assert report.grading_bound == 3
        assert max(report.group_errors.values()) <= 1e-10
        assert report.polynomial.evaluate((0.5,)) == pytest.approx(0.625)

    def test_value_order_only_matches_simultaneous(self):
        target = make_target("1 : rat(1 / 3)", 1)
        constrained = derivative_constrained_approx(target, _k("disk 0 1"), [(0,)], 1e-3, ENUM_1D, 30, plan=PLAN)
        plain = simultaneous_approx(target, _k("disk 0 1"), None, 1e-3, ENUM_1D, 30, plan=PLAN)
        assert constrained.polynomial == plain.polynomial

    def test_value_and_first_derivative(self):
        target = make_target("1 : rat(1 / 3)", 1)
        report = derivative_constrained_approx(target, _k("disk 0 1"), [(0,), (1,)], 1e-3, ENUM_1D, 40, plan=PLAN)
        assert report.group_errors["K"] < 1e-3
        assert report.group_errors["K1"] < 1e-3

    def test_pole_on_sample(self):
        with pytest.raises(PoleCollisionError):
            derivative_constrained_approx(
                make_target("1 : rat(1 / 1)", 1), _k("disk 0 1"), [(0,)], 1e-3, ENUM_1D, 5, plan=PLAN
            )

    def test_empty_orders(self):
        with pytest.raises(ValidationError):
            derivative_constrained_approx(make_target("zero", 1), _k("disk 0 1"), [], 1e-3, ENUM_1D, 5)


@pytest.mark.unit
class TestErrorFunctionals:
    """sup_error и сеточная полунорма."""

    def test_sup_error_of_target_itself(self):
        f = MultiPolynomial(1, {(2,): 1})
        samples = sample(make_compact("disk 0 1"), 8)
        assert sup_error(f, f, samples) == 0.0

    def test_sup_error_of_shifted_constant(self):
        f = MultiPolynomial(1, {(2,): 1})
        g = f + MultiPolynomial.constant(1, 0.25)
        samples = sample(make_compact("disk 0 1"), 8)
        assert sup_error(g, f, samples) == pytest.approx(0.25)

    def test_seminorm_of_identity(self):
        f = MultiPolynomial(1, {(1,): 1})
        assert a_infinity_seminorm(f, DiskDomain(0, 1), 1, (1,)) == pytest.approx(1.0)

    def test_seminorm_attained_on_boundary(self):
        f = MultiPolynomial(1, {(2,): 1})
        assert a_infinity_seminorm(f, DiskDomain(0, 1), 1, (1,)) == pytest.approx(2.0)

    def test_seminorm_radius_cut(self):
        f = MultiPolynomial(1, {(1,): 1})
        assert a_infinity_seminorm(f, DiskDomain(5, 1), 1, (0,)) == 0.0


@pytest.mark.unit
class TestSamplingPlan:
    """Плотности сеток."""

    def test_validation_density(self):
        assert SamplingPlan(fit_density=10, validation_factor=4).validation_density == 40

    def test_factor_below_three(self):
        with pytest.raises(ValidationError):
            SamplingPlan(validation_factor=2)

    def test_nonpositive_density(self):
        with pytest.raises(ValidationError):
            SamplingPlan(fit_density=0)
