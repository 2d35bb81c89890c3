"""
Модуль аппроксимации.

Взвешенная подгонка многочленов по выборкам и функционалы ошибок.
"""

from .least_squares import (
    AxisScaling,
    ConstraintGroup,
    FitReport,
    FitTask,
    PolynomialFitter,
    SupportMultiplier,
    check_disjoint,
    fit_polynomial,
    group_error,
)
from .approximators import (
    EscalatingApproximator,
    SamplingPlan,
    a_infinity_seminorm,
    closure_compact,
    derivative_constrained_approx,
    simultaneous_approx,
    sup_error,
)

__all__ = [
    "AxisScaling",
    "ConstraintGroup",
    "FitReport",
    "FitTask",
    "PolynomialFitter",
    "SupportMultiplier",
    "check_disjoint",
    "fit_polynomial",
    "group_error",
    "EscalatingApproximator",
    "SamplingPlan",
    "a_infinity_seminorm",
    "closure_compact",
    "derivative_constrained_approx",
    "simultaneous_approx",
    "sup_error",
]
