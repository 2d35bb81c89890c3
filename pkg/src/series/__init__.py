"""
Модуль рядов.

Нумерации мультииндексов, многочлены с операциями Тейлора,
аналитические тестовые функции и цели аппроксимации.
"""

from .enumerations import (
    Enumeration,
    MultiIndex,
    make_enumeration,
    grading,
    RECTANGULAR,
    SPHERICAL,
    GRADED,
    CUSTOM,
    SCHEMES,
)
from .polynomial import (
    MultiPolynomial,
    taylor_shift,
    taylor_coefficient,
    partial_sum,
    derivative,
    evaluate,
    evaluate_many,
)
from .analytic import (
    AnalyticTestFunction,
    SeparableTerm,
    OneFactor,
    PolyFactor,
    RationalFactor,
    ExpFactor,
    SeriesPrefix,
    exact_series,
)
from .targets import (
    Target,
    RawSamples,
    DifferenceTarget,
    make_target,
    parse_analytic,
    load_samples,
    raw_sample_points,
)

__all__ = [
    "Enumeration",
    "MultiIndex",
    "make_enumeration",
    "grading",
    "RECTANGULAR",
    "SPHERICAL",
    "GRADED",
    "CUSTOM",
    "SCHEMES",
    "MultiPolynomial",
    "taylor_shift",
    "taylor_coefficient",
    "partial_sum",
    "derivative",
    "evaluate",
    "evaluate_many",
    "AnalyticTestFunction",
    "SeparableTerm",
    "OneFactor",
    "PolyFactor",
    "RationalFactor",
    "ExpFactor",
    "SeriesPrefix",
    "exact_series",
    "Target",
    "RawSamples",
    "DifferenceTarget",
    "make_target",
    "parse_analytic",
    "load_samples",
    "raw_sample_points",
]
