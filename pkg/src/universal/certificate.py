"""
Сертификат построения и его независимая проверка.

Сертификат хранит для каждого этапа достигнутые ошибки:
err_K = sup_K |S_λ − h|, err_L_block = sup_{L_m} |блок этапа|,
err_L_limit = sup_{L_m} |S_λ − f| (f - итоговый ряд).
Проверка пересчитывает все значения на свежих сетках тех же плотностей.
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..approximation.approximators import SamplingPlan, a_infinity_seminorm, sup_error
from ..config.settings import APP_VERSION, SamplingSettings, UniversalSettings
from ..core.exceptions import DimensionError, IntegrityError
from ..geometry.compacts import ProductCompact
from ..geometry.sampling import FIT, product_sample
from ..series.enumerations import Enumeration, MultiIndex
from ..series.polynomial import MultiPolynomial, taylor_shift
from ..series.targets import raw_sample_points

if TYPE_CHECKING:
    from .builder import UniversalSeries
    from .tasks import DomainSpec, UniversalTask

logger = logging.getLogger(__name__)

_INFINITE_INDEX = np.iinfo(np.int64).max


def order_label(order: Sequence[int]) -> str:
    """Текстовая метка порядка производной: (1, 0) → '1,0'."""
    return ",".join(str(int(x)) for x in order)


def parse_order_label(text: str) -> MultiIndex:
    return tuple(int(x) for x in text.split(","))


# ==================== ЗАПИСИ ====================


@dataclass(frozen=True)
class StageMeasurement:
    """Измеренные ошибки одного этапа."""

    err_k: float
    err_l_block: float
    err_l_limit: float
    degree: int
    order_errors: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class StageRecord:
    """Запись этапа сертификата."""

    stage: int
    task_label: str
    lam: int
    epsilon: float
    delta: float
    level: int
    err_k: float
    err_l_block: float
    err_l_limit: float
    degree: int
    order_errors: Dict[str, float] = field(default_factory=dict)
    axis: int = 1
    power: int = 0
    grading_bound: int = 0
    support_size: int = 0

    @classmethod
    def from_measurement(cls, measurement: StageMeasurement, **build_info) -> "StageRecord":
        return cls(
            err_k=measurement.err_k,
            err_l_block=measurement.err_l_block,
            err_l_limit=measurement.err_l_limit,
            degree=measurement.degree,
            order_errors=dict(measurement.order_errors),
            **build_info,
        )


@dataclass(frozen=True)
class Certificate:
    """Записи этапов и глобальные параметры построения."""

    stages: Tuple[StageRecord, ...] = ()
    enumeration: str = ""
    fit_density: int = SamplingSettings.FIT_DENSITY
    validation_factor: int = SamplingSettings.VALIDATION_FACTOR
    product_cap: int = SamplingSettings.PRODUCT_CAP
    validation_cap: int = SamplingSettings.VALIDATION_CAP
    degree_cap: int = 0
    delta_ratio: float = 0.5
    tool_version: str = APP_VERSION

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def plan(self) -> SamplingPlan:
        """План сеток, на которых измерены ошибки."""
        return SamplingPlan(
            self.fit_density, self.validation_factor, self.product_cap, self.validation_cap
        )

    @property
    def lambdas(self) -> List[int]:
        return [s.lam for s in self.stages]

    def __len__(self) -> int:
        return len(self.stages)


# ==================== ИЗМЕРЕНИЕ ====================


def _k_points(task: "UniversalTask", plan: SamplingPlan) -> np.ndarray:
    raw = raw_sample_points(task.target)
    if raw is not None:
        return np.asarray(raw)
    return np.asarray(plan.validation_sample(task.compact).points)


def _sup_abs(poly: MultiPolynomial, points: np.ndarray) -> float:
    if len(points) == 0 or poly.is_zero():
        return 0.0
    return float(np.max(np.abs(poly.evaluate_many(points))))


def measure_stage(
    polynomial: MultiPolynomial,
    enumeration: Enumeration,
    domain: "DomainSpec",
    task: "UniversalTask",
    lam: int,
    previous_lam: int,
    plan: SamplingPlan,
) -> StageMeasurement:
    """
    Измеряет ошибки этапа на валидационных сетках.

    Args:
        polynomial: Итоговый (или текущий) ряд f
        enumeration: Нумерация
        domain: Области и центр
        task: Задача этапа
        lam: λ_t
        previous_lam: λ_{t−1} (−1 для первого этапа)
        plan: Плотности сеток
    """
    partial = polynomial.select(enumeration, -1, lam)
    block = polynomial.select(enumeration, previous_lam, lam)
    tail = polynomial.select(enumeration, lam, _INFINITE_INDEX)

    k_points = _k_points(task, plan)
    err_k = sup_error(partial, task.target, k_points)
    order_errors = {
        order_label(a): sup_error(partial, task.target, k_points, a)
        for a in task.fit_orders[1:]
    }

    l_points = np.asarray(plan.validation_sample(domain.exhaustion(task.level)).points)
    return StageMeasurement(
        err_k=err_k,
        err_l_block=_sup_abs(block, l_points),
        err_l_limit=_sup_abs(tail, l_points),
        degree=partial.total_degree,
        order_errors=order_errors,
    )


# ==================== ПРОВЕРКА ====================


@dataclass(frozen=True)
class MovingCenterSpec:
    """Сетка подвижных центров ζ ∈ L̃."""

    compact: ProductCompact
    density: int = UniversalSettings.MOVING_DENSITY
    cap: int = SamplingSettings.PRODUCT_CAP


@dataclass(frozen=True)
class MovingCenterResult:
    """Худшие по ζ ошибки этапа."""

    stage: int
    center_error: float
    worst_k_error: float
    worst_k_center: Tuple[complex, ...]
    worst_l_error: float
    worst_l_center: Tuple[complex, ...]
    order_errors: Dict[str, float] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        """Отношение худшей ошибки по ζ к ошибке в ζ⁰."""
        if self.center_error == 0:
            return float("inf") if self.worst_k_error > 0 else 1.0
        return self.worst_k_error / self.center_error


@dataclass
class VerificationReport:
    """Итог проверки сертификата."""

    stages_checked: int = 0
    violations: List[str] = field(default_factory=list)
    moving: List[MovingCenterResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "пройдена" if self.passed else f"нарушений: {len(self.violations)}"
        return f"Проверка {self.stages_checked} этапов: {status}"


class CertificateVerifier:
    """Пересчёт сертификата и проверка свойств построения."""

    def __init__(self, tolerance: float = UniversalSettings.REPLAY_TOLERANCE):
        self.tolerance = tolerance
        self.logger = logging.getLogger(self.__class__.__name__)

    def _compare(self, stage: int, name: str, recorded: float, recomputed: float) -> None:
        if not abs(recorded - recomputed) <= self.tolerance:
            raise IntegrityError(stage, name, recorded, recomputed)

    def replay(self, series: "UniversalSeries") -> None:
        """
        Пересчитывает все записанные значения.

        Raises:
            IntegrityError: Расхождение больше допуска
        """
        certificate = series.certificate
        plan = certificate.plan
        previous = -1
        for record, task in zip(certificate.stages, series.tasks):
            measured = measure_stage(
                series.polynomial, series.enumeration, series.domain, task, record.lam, previous, plan
            )
            self._compare(record.stage, "err_K", record.err_k, measured.err_k)
            self._compare(record.stage, "err_L_block", record.err_l_block, measured.err_l_block)
            self._compare(record.stage, "err_L_limit", record.err_l_limit, measured.err_l_limit)
            if record.degree != measured.degree:
                raise IntegrityError(record.stage, "degree", record.degree, measured.degree)
            if set(record.order_errors) != set(measured.order_errors):
                raise IntegrityError(
                    record.stage, "orders", len(record.order_errors), len(measured.order_errors)
                )
            for label, value in record.order_errors.items():
                self._compare(record.stage, f"err_K[{label}]", value, measured.order_errors[label])
            previous = record.lam

    def check_invariants(self, series: "UniversalSeries") -> List[str]:
        """Свойства λ, ошибок на K и хвостов на L_m."""
        violations = []
        stages = series.certificate.stages
        previous = -1
        for record in stages:
            if record.lam <= previous:
                violations.append(f"этап {record.stage}: λ={record.lam} не больше {previous}")
            if not series.mu.is_admissible(record.lam):
                violations.append(f"этап {record.stage}: λ={record.lam} не допустим для μ")
            if not record.err_k < record.epsilon:
                violations.append(f"этап {record.stage}: err_K={record.err_k:.3e} ≥ ε")
            for label, value in record.order_errors.items():
                if not value < record.epsilon:
                    violations.append(f"этап {record.stage}: err_K[{label}]={value:.3e} ≥ ε")
            if not record.err_l_block < record.delta:
                violations.append(f"этап {record.stage}: блок {record.err_l_block:.3e} ≥ δ")
            previous = record.lam

        for i, record in enumerate(stages):
            bound = sum(r.delta for r in stages[i + 1:]) + self.tolerance
            if record.err_l_limit > bound:
                violations.append(
                    f"этап {record.stage}: хвост {record.err_l_limit:.3e} > Σδ = {bound:.3e}"
                )

        if stages and series.polynomial.top_index(series.enumeration) > stages[-1].lam:
            violations.append("коэффициенты за последним λ")
        return violations

    def moving_center(
        self, series: "UniversalSeries", spec: MovingCenterSpec
    ) -> List[MovingCenterResult]:
        """Ошибки S_λ(f, ζ) при ζ, пробегающем сетку L̃."""
        spec.compact.require_dimension(series.polynomial.dimension, "moving.compact")
        plan = series.certificate.plan
        centers = np.asarray(product_sample(spec.compact, spec.density, spec.cap, FIT).points)
        l_points = np.asarray(plan.validation_sample(spec.compact).points)
        final_on_l = series.polynomial.evaluate_many(l_points)

        results = []
        for record, task in zip(series.certificate.stages, series.tasks):
            k_points = _k_points(task, plan)
            worst_k, worst_k_center = -1.0, ()
            worst_l, worst_l_center = -1.0, ()
            order_worst: Dict[str, float] = {}
            for zeta in centers:
                shifted = taylor_shift(series.polynomial, zeta)
                partial = shifted.select(series.enumeration, -1, record.lam)
                err_k = sup_error(partial, task.target, k_points)
                if err_k > worst_k:
                    worst_k, worst_k_center = err_k, tuple(complex(z) for z in zeta)
                err_l = float(np.max(np.abs(partial.evaluate_many(l_points) - final_on_l)))
                if err_l > worst_l:
                    worst_l, worst_l_center = err_l, tuple(complex(z) for z in zeta)
                for a in task.fit_orders[1:]:
                    label = order_label(a)
                    value = sup_error(partial, task.target, k_points, a)
                    order_worst[label] = max(order_worst.get(label, 0.0), value)
            result = MovingCenterResult(
                stage=record.stage,
                center_error=record.err_k,
                worst_k_error=worst_k,
                worst_k_center=worst_k_center,
                worst_l_error=worst_l,
                worst_l_center=worst_l_center,
                order_errors=order_worst,
            )
            self.logger.info(
                f"Этап {record.stage}: худшая ошибка по ζ {worst_k:.3e} "
                f"(в ζ⁰ {record.err_k:.3e}), ζ = {worst_k_center}"
            )
            results.append(result)
        return results

    def verify(
        self, series: "UniversalSeries", moving: Optional[MovingCenterSpec] = None
    ) -> VerificationReport:
        if len(series.tasks) != len(series.certificate.stages):
            raise DimensionError("certificate", "число этапов не совпадает с расписанием")
        self.replay(series)
        report = VerificationReport(stages_checked=len(series.certificate.stages))
        report.violations = self.check_invariants(series)
        if moving is not None:
            report.moving = self.moving_center(series, moving)
        for violation in report.violations:
            self.logger.warning(violation)
        self.logger.info(report.summary())
        return report


def verify_certificate(
    series: "UniversalSeries",
    moving: Optional[MovingCenterSpec] = None,
    tolerance: float = UniversalSettings.REPLAY_TOLERANCE,
) -> VerificationReport:
    """
    Пересчитывает сертификат ряда и проверяет свойства построения.

    Raises:
        IntegrityError: Записанное значение не воспроизводится
    """
    return CertificateVerifier(tolerance).verify(series, moving)


def limit_seminorms(
    series: "UniversalSeries",
    orders: Sequence[MultiIndex],
    radius: float,
    density: int = SamplingSettings.FIT_DENSITY,
) -> List[Dict[str, float]]:
    """
    Сеточные полунормы sup_{Ω̄, |ζ| ≤ radius} |∂^a (S_λ − f)| по этапам.

    Returns:
        List[Dict]: Для каждого этапа - метка порядка -> значение
    """
    closure = series.domain.closure()
    profile = []
    for record in series.certificate.stages:
        tail = series.polynomial.select(series.enumeration, record.lam, _INFINITE_INDEX)
        profile.append(
            {
                order_label(a): a_infinity_seminorm(tail, closure, radius, a, density)
                for a in orders
            }
        )
    return profile
