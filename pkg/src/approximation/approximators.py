"""
Аппроксимация с эскалацией градуировки.

simultaneous_approx: P ≈ g на K и P ≈ 0 на L (одновременно).
derivative_constrained_approx: ∂^a P ≈ ∂^a g на K для всех a ∈ I.
sup_error и a_infinity_seminorm: измеряемые функционалы ошибок.

Носители всегда - префиксы нумерации до блока B; B растёт с 1 до предела.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..config.settings import ApproximationSettings, SamplingSettings
from ..core.exceptions import ApproximationBudgetError, DimensionError, ValidationError
from ..geometry.compacts import ProductCompact
from ..geometry.domains import PlanarDomain
from ..geometry.sampling import FIT, VALIDATION, SampleSet, product_sample, validation_density
from ..series.enumerations import Enumeration, MultiIndex
from ..series.polynomial import MultiPolynomial
from ..series.targets import raw_sample_points
from ..series.analytic import AnalyticTestFunction
from .least_squares import (
    ConstraintGroup,
    FitReport,
    FitTask,
    PolynomialFitter,
    SupportMultiplier,
    check_disjoint,
    group_error,
)

logger = logging.getLogger(__name__)

CompactList = Union[None, ProductCompact, Sequence[ProductCompact]]


@dataclass(frozen=True)
class SamplingPlan:
    """Параметры сеток подгонки и валидации."""

    fit_density: int = SamplingSettings.FIT_DENSITY
    validation_factor: int = SamplingSettings.VALIDATION_FACTOR
    product_cap: int = SamplingSettings.PRODUCT_CAP
    validation_cap: int = SamplingSettings.VALIDATION_CAP

    def __post_init__(self):
        if self.fit_density < 1:
            raise ValidationError("fit_density", "плотность должна быть ≥ 1")
        if self.validation_factor < 3:
            raise ValidationError("validation_factor", "валидационная сетка должна быть ≥ 3× плотнее")
        if self.product_cap < 1 or self.validation_cap < 1:
            raise ValidationError("product_cap", "cap должен быть ≥ 1")

    @property
    def validation_density(self) -> int:
        return validation_density(self.fit_density, self.validation_factor)

    def fit_sample(self, compact: ProductCompact) -> SampleSet:
        return product_sample(compact, self.fit_density, self.product_cap, FIT)

    def validation_sample(self, compact: ProductCompact) -> SampleSet:
        return product_sample(compact, self.validation_density, self.validation_cap, VALIDATION)


def _as_list(compacts: CompactList) -> List[ProductCompact]:
    if compacts is None:
        return []
    if isinstance(compacts, ProductCompact):
        return [compacts]
    return list(compacts)


def _union_points(compacts: List[ProductCompact], sampler) -> np.ndarray:
    samples = [sampler(c) for c in compacts]
    merged = samples[0]
    for s in samples[1:]:
        merged = merged.union(s)
    return np.asarray(merged.points)


class EscalatingApproximator:
    """
    Подбор многочлена с ростом градуировки носителя.

    На каждой градуировке B решается задача по префиксу нумерации;
    успех - ошибки всех групп строго меньше своих допусков.
    """

    def __init__(
        self,
        enumeration: Enumeration,
        degree_cap: int = ApproximationSettings.DEGREE_CAP,
        ridge: float = ApproximationSettings.RIDGE,
        lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS,
        start_grade: int = 1,
    ):
        if degree_cap < 0:
            raise ValidationError("degree_cap", "предел градуировки должен быть ≥ 0")
        self.enumeration = enumeration
        self.degree_cap = degree_cap
        self.ridge = ridge
        self.lawson_iterations = lawson_iterations
        self.start_grade = start_grade
        self.fitter = PolynomialFitter()
        self.logger = logging.getLogger(self.__class__.__name__)

    def run(
        self,
        groups: List[ConstraintGroup],
        tolerances: Dict[str, float],
        multiplier: Optional[SupportMultiplier] = None,
        independent_validation: bool = True,
    ) -> FitReport:
        """
        Эскалация B = start..cap.

        Raises:
            ApproximationBudgetError: Предел достигнут без успеха (с лучшим отчётом)
        """
        best: Optional[FitReport] = None
        best_score = float("inf")
        previous_size = -1

        for grade in range(min(self.start_grade, self.degree_cap), self.degree_cap + 1):
            support = self.enumeration.prefix_support(grade)
            if not support or len(support) == previous_size:
                continue
            previous_size = len(support)

            task = FitTask(
                groups=groups,
                support=support,
                ridge=self.ridge,
                multiplier=multiplier,
                lawson_iterations=self.lawson_iterations,
                independent_validation=independent_validation,
            )
            report = self.fitter.fit(task)
            report.grading_bound = grade

            score = max(report.group_errors[label] / tol for label, tol in tolerances.items())
            self.logger.debug(f"B={grade}: {report.summary()}")
            if score < best_score:
                best, best_score = report, score
            if score < 1.0:
                self.logger.info(f"Успех на градуировке B={grade} ({len(support)} мономов)")
                return report

        raise ApproximationBudgetError(
            f"предел градуировки {self.degree_cap} достигнут без нужной точности "
            f"(лучшее отношение ошибка/допуск {best_score:.3g})",
            best,
        )


def _target_points(target, compact: Optional[ProductCompact], plan: SamplingPlan):
    """Точки подгонки и валидации на K; для сырой выборки - её собственные точки."""
    raw = raw_sample_points(target)
    if raw is not None:
        points = np.asarray(raw)
        return points, points, False
    if compact is None:
        raise ValidationError("K", "компакт K не задан")
    return (
        np.asarray(plan.fit_sample(compact).points),
        np.asarray(plan.validation_sample(compact).points),
        True,
    )


def simultaneous_approx(
    target,
    K: Optional[ProductCompact],
    L: CompactList,
    eps: float,
    enumeration: Enumeration,
    degree_cap: int = ApproximationSettings.DEGREE_CAP,
    *,
    eps_l: Optional[float] = None,
    plan: Optional[SamplingPlan] = None,
    multiplier: Optional[SupportMultiplier] = None,
    orders: Optional[Sequence[MultiIndex]] = None,
    ridge: float = ApproximationSettings.RIDGE,
    lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS,
) -> FitReport:
    """
    Одновременная аппроксимация: sup_K |P − g| < ε и sup_L |P| < ε_L.

    Args:
        target: Цель g (аналитическая функция, многочлен или сырая выборка)
        K: Компакт-произведение, где P ≈ g
        L: Компакт(ы), где P ≈ 0 (None - без второй группы)
        eps: Допуск на K
        enumeration: Нумерация (носители - её префиксы)
        degree_cap: Предел градуировки
        eps_l: Допуск на L (по умолчанию eps)
        plan: Плотности сеток
        multiplier: Множитель носителя (z_k − μ)^m
        orders: Порядки производных на K (по умолчанию только значения)

    Raises:
        PreconditionError: Пересечение выборок K и L с разными целями
        ApproximationBudgetError: Предел градуировки исчерпан
    """
    if not eps > 0:
        raise ValidationError("epsilon", f"ε должно быть > 0, получено {eps}")
    eps_l = eps if eps_l is None else eps_l
    if not eps_l > 0:
        raise ValidationError("epsilon_l", f"ε_L должно быть > 0, получено {eps_l}")
    plan = plan or SamplingPlan()
    dimension = enumeration.dimension
    if K is not None:
        K.require_dimension(dimension, "K")

    fit_k, val_k, independent = _target_points(target, K, plan)
    if fit_k.shape[1] != dimension:
        raise DimensionError("target", "размерность выборки не совпадает с нумерацией")
    orders = [tuple(a) for a in (orders or [(0,) * dimension])]

    groups: List[ConstraintGroup] = []
    tolerances: Dict[str, float] = {}
    for order in orders:
        label = "K" if not any(order) else "K" + "".join(str(x) for x in order)
        groups.append(ConstraintGroup.from_target(label, target, fit_k, val_k, 1.0, order))
        tolerances[label] = eps

    l_compacts = _as_list(L)
    if l_compacts:
        for c in l_compacts:
            c.require_dimension(dimension, "L")
        fit_l = _union_points(l_compacts, plan.fit_sample)
        val_l = _union_points(l_compacts, plan.validation_sample)
        zeros_fit = np.zeros(len(fit_l), dtype=complex)
        zeros_val = np.zeros(len(val_l), dtype=complex)

        k_values = groups[0].fit_values
        check_disjoint(fit_k, fit_l, k_values, zeros_fit)
        check_disjoint(groups[0].validation_points, val_l, groups[0].validation_values, zeros_val)

        groups.append(
            ConstraintGroup("L", fit_l, zeros_fit, val_l, zeros_val, weight=eps / eps_l)
        )
        tolerances["L"] = eps_l

    approximator = EscalatingApproximator(
        enumeration, degree_cap, ridge=ridge, lawson_iterations=lawson_iterations
    )
    return approximator.run(groups, tolerances, multiplier, independent)


def derivative_constrained_approx(
    target: AnalyticTestFunction,
    K: ProductCompact,
    orders: Sequence[MultiIndex],
    eps: float,
    enumeration: Enumeration,
    degree_cap: int = ApproximationSettings.DEGREE_CAP,
    *,
    plan: Optional[SamplingPlan] = None,
    ridge: float = ApproximationSettings.RIDGE,
    lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS,
) -> FitReport:
    """
    Аппроксимация с производными: sup_K |∂^a (g − Q)| < ε для всех a ∈ I.

    Raises:
        PoleCollisionError: Полюс ближе 1e-9 к точке выборки
        ApproximationBudgetError: Предел градуировки исчерпан
    """
    if not orders:
        raise ValidationError("orders", "множество порядков I не может быть пустым")
    plan = plan or SamplingPlan()
    if hasattr(target, "check_poles"):
        target.check_poles(plan.fit_sample(K).points)
        target.check_poles(plan.validation_sample(K).points)
    return simultaneous_approx(
        target,
        K,
        None,
        eps,
        enumeration,
        degree_cap,
        plan=plan,
        orders=orders,
        ridge=ridge,
        lawson_iterations=lawson_iterations,
    )


def sup_error(
    f: MultiPolynomial,
    target,
    samples: Union[SampleSet, np.ndarray],
    order: Optional[MultiIndex] = None,
) -> float:
    """
    max по выборке |∂^a f − ∂^a target|.

    Raises:
        PoleCollisionError: Точка выборки у полюса цели
    """
    points = np.asarray(samples.points if isinstance(samples, SampleSet) else samples, dtype=complex)
    points = points.reshape(-1, f.dimension)
    values = target.values(points, order)
    return group_error(f, points, values, order)


def closure_compact(domain) -> ProductCompact:
    """Компакт Ω̄ для произведения областей или уже заданного компакта."""
    if isinstance(domain, ProductCompact):
        return domain
    if hasattr(domain, "closure") and not isinstance(domain, PlanarDomain):
        return domain.closure()
    domains = [domain] if isinstance(domain, PlanarDomain) else list(domain)
    return ProductCompact(tuple(d.closure() for d in domains))


def a_infinity_seminorm(
    f: MultiPolynomial,
    domain,
    n: float,
    order: MultiIndex,
    density: int = SamplingSettings.FIT_DENSITY,
    cap: int = SamplingSettings.PRODUCT_CAP,
) -> float:
    """
    Сеточная оценка sup_{ζ ∈ Ω̄, |ζ| ≤ n} |∂^a f(ζ)|.

    Args:
        f: Многочлен
        domain: Области Ω_i, DomainSpec или компакт Ω̄
        n: Радиус усечения |ζ| ≤ n (евклидова норма в ℂ^d)
        order: Порядок производной a
        density: Плотность сетки (граница включена)
    """
    compact = closure_compact(domain)
    compact.require_dimension(f.dimension, "domain")
    points = np.asarray(product_sample(compact, density, cap, FIT).points)
    norms = np.sqrt(np.sum(np.abs(points) ** 2, axis=1))
    points = points[norms <= n + 1e-12]
    if len(points) == 0:
        return 0.0
    return float(np.max(np.abs(f.values(points, order))))
