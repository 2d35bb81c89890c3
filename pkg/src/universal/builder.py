"""
Построение усечённого универсального ряда Тейлора.

Этапы выполняются последовательно. На этапе t к ряду добавляется
корректирующий блок P_t = (z_{i0} − ζ⁰_{i0})^m · q(z), у которого все
мономы лежат строго после текущего верхнего блока нумерации, так что
уже записанные частичные суммы S_{λ_s}, s < t, не меняются.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..approximation.approximators import SamplingPlan, simultaneous_approx
from ..approximation.least_squares import FitReport, SupportMultiplier
from ..config.settings import UniversalSettings
from ..core.exceptions import ApproximationBudgetError, PreconditionError, StageFailure
from ..geometry.compacts import ProductCompact
from ..series.enumerations import Enumeration
from ..series.polynomial import MultiPolynomial, taylor_shift
from ..series.targets import DifferenceTarget
from .certificate import Certificate, StageRecord, measure_stage
from .tasks import BuildBudget, DomainSpec, MuSpec, UniversalTask, enclosing_disk

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UniversalSeries:
    """
    Конечный ряд с центром ζ⁰, нумерацией, μ и сертификатом.

    Коэффициенты с номерами между верхним мономом и λ равны нулю.
    """

    polynomial: MultiPolynomial
    enumeration: Enumeration
    domain: DomainSpec
    mu: MuSpec
    tasks: Tuple[UniversalTask, ...]
    certificate: Certificate

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    @property
    def dimension(self) -> int:
        return self.polynomial.dimension

    def partial_sum(self, lam: int) -> MultiPolynomial:
        """S_λ(f, ζ⁰)."""
        return self.polynomial.select(self.enumeration, -1, lam)


@dataclass(frozen=True)
class CorrectionBlock:
    """Результат одного корректирующего шага."""

    block: MultiPolynomial
    report: FitReport
    axis: int
    power: int


class UniversalBuilder:
    """Жадное построение по расписанию задач."""

    def __init__(
        self,
        domain: DomainSpec,
        enumeration: Enumeration,
        mu: MuSpec,
        budget: Optional[BuildBudget] = None,
    ):
        if enumeration.dimension != domain.dimension:
            raise PreconditionError("enumeration", "размерность нумерации не совпадает с Ω")
        self.domain = domain
        self.enumeration = enumeration
        self.mu = mu
        self.budget = budget or BuildBudget()
        self.logger = logging.getLogger(self.__class__.__name__)

    # ---------- геометрия этапа ----------

    def _fit_compacts(
        self, task: UniversalTask, levels: Sequence[int]
    ) -> Tuple[ProductCompact, List[ProductCompact]]:
        """K и L для подгонки; в режиме одной внешней оси - с дисками B_i."""
        l_compacts = [self.domain.exhaustion(m) for m in levels]
        if task.outside_axis is None:
            return task.compact, l_compacts

        i0 = task.outside_axis - 1
        k_compact = task.compact
        for axis in range(task.dimension):
            if axis == i0:
                continue
            disk = enclosing_disk(
                [task.compact.factors[axis]] + [c.factors[axis] for c in l_compacts]
            )
            k_compact = k_compact.replace_factor(axis, disk)
            l_compacts = [c.replace_factor(axis, disk) for c in l_compacts]
        return k_compact, l_compacts

    def _fit_plan(self, task: UniversalTask) -> SamplingPlan:
        """Сетки подгонки; с дисками B_i произведения ограничены сильнее."""
        plan = self.budget.plan
        if task.outside_axis is None:
            return plan
        return replace(
            plan,
            product_cap=min(plan.product_cap, UniversalSettings.SUBSTITUTE_PRODUCT_CAP),
            validation_cap=min(plan.validation_cap, UniversalSettings.SUBSTITUTE_VALIDATION_CAP),
        )

    def correction_block(
        self,
        current: MultiPolynomial,
        grade: int,
        task: UniversalTask,
        delta: float,
        levels: Sequence[int],
    ) -> CorrectionBlock:
        """
        Блок P с носителем после блока grade: sup_K |P − r| < ε/2, sup_L |P| < δ.

        Args:
            current: Текущий ряд (центр ζ⁰)
            grade: Градуировка верхнего блока (−1 для пустого ряда)
            task: Задача этапа
            delta: Бюджет малости на L
            levels: Уровни исчерпания, на которых контролируется блок

        Raises:
            ApproximationBudgetError: Подгонка не удалась в пределах бюджета
        """
        center = self.domain.center
        axis = task.designated_axis
        power = 0 if grade < 0 else self.enumeration.min_power_exceeding_block(axis, grade)
        multiplier = SupportMultiplier(axis - 1, center[axis - 1], power)
        self.logger.info(f"Блок после градуировки {grade}: множитель (z_{axis} − ζ⁰_{axis})^{power}")

        residual = DifferenceTarget(task.target, current)
        k_compact, l_compacts = self._fit_compacts(task, levels)
        plan = self._fit_plan(task)
        orders = task.fit_orders if len(task.fit_orders) > 1 else None

        report = simultaneous_approx(
            residual,
            k_compact,
            l_compacts,
            task.epsilon / 2.0,
            self.enumeration,
            self.budget.degree_cap,
            eps_l=delta,
            plan=plan,
            multiplier=multiplier,
            orders=orders,
            ridge=self.budget.ridge,
            lawson_iterations=self.budget.lawson_iterations,
        )

        block = taylor_shift(report.polynomial, center)
        end = self.enumeration.prefix_end(grade)
        early = [a for a in block.support if self.enumeration.index_of_multi(a) <= end]
        if early:
            raise PreconditionError(
                "support", f"мономы {early[:3]} блока лежат не после блока {grade}"
            )

        l_points = np.concatenate(
            [np.asarray(plan.validation_sample(c).points) for c in l_compacts]
        )
        block_sup = float(np.max(np.abs(block.evaluate_many(l_points)))) if len(block) else 0.0
        if not block_sup < delta:
            raise ApproximationBudgetError(
                f"после перецентрирования sup_L |P| = {block_sup:.3e} ≥ δ = {delta:.3e}", report
            )
        return CorrectionBlock(block, report, axis, power)

    # ---------- этапы ----------

    def _series(
        self,
        polynomial: MultiPolynomial,
        tasks: Sequence[UniversalTask],
        lams: Sequence[int],
        build_info: Sequence[dict],
    ) -> UniversalSeries:
        """Ряд с сертификатом, измеренным относительно polynomial."""
        plan = self.budget.plan
        records = []
        previous = -1
        for t, (task, lam, info) in enumerate(zip(tasks, lams, build_info), start=1):
            measured = measure_stage(
                polynomial, self.enumeration, self.domain, task, lam, previous, plan
            )
            records.append(StageRecord.from_measurement(measured, stage=t, lam=lam, **info))
            previous = lam
        certificate = Certificate(
            stages=tuple(records),
            enumeration=self.enumeration.name,
            fit_density=plan.fit_density,
            validation_factor=plan.validation_factor,
            product_cap=plan.product_cap,
            validation_cap=plan.validation_cap,
            degree_cap=self.budget.degree_cap,
            delta_ratio=self.budget.delta_ratio,
        )
        return UniversalSeries(
            polynomial, self.enumeration, self.domain, self.mu, tuple(tasks), certificate
        )

    def build(self, schedule: Sequence[UniversalTask]) -> UniversalSeries:
        """
        Выполняет все этапы расписания.

        Raises:
            StageFailure: Этап не удался (с частичным рядом)
            MuExhaustedError: В μ нет индекса выше верхнего
        """
        schedule = [
            task if task.label else replace(task, label=str(n))
            for n, task in enumerate(schedule, start=1)
        ]
        for task in schedule:
            task.check_outside(self.domain, self.budget.plan.fit_density)
        levels = sorted({task.level for task in schedule})

        current = MultiPolynomial.zero(self.domain.dimension, self.domain.center)
        top = -1
        lams: List[int] = []
        build_info: List[dict] = []

        for t, task in enumerate(schedule, start=1):
            delta = self.budget.delta(t, task.epsilon)
            grade = self.enumeration.grade_of_index(top) if top >= 0 else -1
            self.logger.info(
                f"Этап {t}/{len(schedule)} ({task.label}): ε={task.epsilon:g}, δ={delta:.3e}, "
                f"уровень {task.level}, верхний индекс {top}"
            )
            try:
                correction = self.correction_block(current, grade, task, delta, levels)
            except ApproximationBudgetError as e:
                self.logger.error(f"Этап {t} не удался: {e.message}")
                partial = self._series(current, schedule[: t - 1], lams, build_info)
                raise StageFailure(t, e.message, partial, e.best_report)

            current = current + correction.block
            new_top = current.top_index(self.enumeration)
            lam = self.mu.next_admissible(max(new_top, top + 1))
            top = lam
            lams.append(lam)
            build_info.append(
                {
                    "task_label": task.label,
                    "epsilon": task.epsilon,
                    "delta": delta,
                    "level": task.level,
                    "axis": correction.axis,
                    "power": correction.power,
                    "grading_bound": correction.report.grading_bound,
                    "support_size": correction.report.support_size,
                }
            )
            self.logger.info(
                f"Этап {t}: λ={lam}, ошибки подгонки {correction.report.summary()}"
            )

        series = self._series(current, schedule, lams, build_info)
        self.logger.info(
            f"Построение завершено: {len(schedule)} этапов, {len(current)} ненулевых коэффициентов"
        )
        return series


def build_universal(
    domain: DomainSpec,
    enumeration: Enumeration,
    mu: MuSpec,
    schedule: Sequence[UniversalTask],
    budget: Optional[BuildBudget] = None,
) -> UniversalSeries:
    """
    Строит усечённый универсальный ряд по расписанию.

    Args:
        domain: Области Ω_i и центр ζ⁰
        enumeration: Нумерация мономов
        mu: Допустимые индексы λ
        schedule: Задачи этапов
        budget: Бюджеты сеток, степени и δ_t

    Returns:
        UniversalSeries: Ряд с сертификатом

    Raises:
        PreconditionError: K пересекает Ω или ζ⁰ ∈ K
        StageFailure: Этап не удался (частичный ряд в исключении)
    """
    return UniversalBuilder(domain, enumeration, mu, budget).build(schedule)


def correction_block(
    current: MultiPolynomial,
    grade: int,
    task: UniversalTask,
    delta: float,
    domain: DomainSpec,
    enumeration: Enumeration,
    budget: Optional[BuildBudget] = None,
    levels: Optional[Sequence[int]] = None,
) -> CorrectionBlock:
    """Один корректирующий блок (см. UniversalBuilder.correction_block)."""
    builder = UniversalBuilder(domain, enumeration, MuSpec(), budget)
    return builder.correction_block(current, grade, task, delta, levels or [task.level])
