"""
Модуль оркестрации workflow.

Переводит валидированную конфигурацию в объекты предметной области
и выполняет построение, подгонку и проверку с сохранением результатов.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..approximation.approximators import (
    SamplingPlan,
    derivative_constrained_approx,
    simultaneous_approx,
)
from ..approximation.least_squares import FitReport
from ..config.config_reader import RunConfig, TaskConfig
from ..core.exceptions import ConfigError, StageFailure
from ..geometry.compacts import ProductCompact, make_compact
from ..geometry.domains import make_domain
from ..series.enumerations import Enumeration, make_enumeration
from ..series.targets import make_target
from ..storage.series_file import save_series
from ..universal.builder import UniversalSeries, build_universal
from ..universal.certificate import (
    MovingCenterSpec,
    VerificationReport,
    limit_seminorms,
    verify_certificate,
)
from ..universal.tasks import BuildBudget, DomainSpec, MuSpec, UniversalTask


@dataclass
class WorkflowResult:
    """Результат выполнения workflow."""

    success: bool
    series: Optional[UniversalSeries] = None
    series_path: Optional[Path] = None
    verification: Optional[VerificationReport] = None
    seminorms: List[Dict[str, float]] = field(default_factory=list)
    execution_time_seconds: float = 0.0
    error_message: Optional[str] = None

    @property
    def stages_completed(self) -> int:
        return len(self.series.certificate) if self.series is not None else 0


@dataclass
class WorkflowProgress:
    """Прогресс выполнения workflow."""

    current_stage: str
    stages_completed: int
    total_stages: int
    current_operation: str

    @property
    def progress_percent(self) -> float:
        if self.total_stages == 0:
            return 0.0
        return (self.stages_completed / self.total_stages) * 100


class WorkflowStages:
    """Этапы выполнения workflow."""

    INITIALIZATION = "initialization"
    BUILD = "build"
    VERIFICATION = "verification"
    PERSISTENCE = "persistence"

    ALL_STAGES = [INITIALIZATION, BUILD, VERIFICATION, PERSISTENCE]


class WorkflowOrchestrator:
    """
    Оркестратор построения и проверки рядов.

    Собирает из RunConfig области, нумерацию, μ, бюджет и расписание задач.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = logging.getLogger(self.__class__.__name__)
        self.current_progress: Optional[WorkflowProgress] = None
        self.progress_callbacks: List[Callable[[WorkflowProgress], None]] = []

    def add_progress_callback(self, callback: Callable[[WorkflowProgress], None]) -> None:
        self.progress_callbacks.append(callback)

    def _update_progress(self, stage: str, operation: str) -> None:
        self.current_progress = WorkflowProgress(
            current_stage=stage,
            stages_completed=WorkflowStages.ALL_STAGES.index(stage),
            total_stages=len(WorkflowStages.ALL_STAGES),
            current_operation=operation,
        )
        for callback in self.progress_callbacks:
            callback(self.current_progress)

    # ==================== ОБЪЕКТЫ ПРЕДМЕТНОЙ ОБЛАСТИ ====================

    def domain_spec(self) -> DomainSpec:
        domains = tuple(
            make_domain(d.shape, f"domain.{d.index}.shape") for d in self.config.domains
        )
        return DomainSpec(domains, self.config.run.center)

    def enumeration(self) -> Enumeration:
        run = self.config.run
        return make_enumeration(run.scheme, run.dimension, run.custom_prefix, run.custom_fallback)

    def mu(self) -> MuSpec:
        return MuSpec.parse(self.config.run.mu, "run.mu")

    def plan(self) -> SamplingPlan:
        run = self.config.run
        return SamplingPlan(run.fit_density, run.validation_factor, run.product_cap, run.validation_cap)

    def budget(self) -> BuildBudget:
        run = self.config.run
        return BuildBudget(
            degree_cap=run.degree_cap,
            plan=self.plan(),
            delta_ratio=run.delta_ratio,
            ridge=run.ridge,
            lawson_iterations=run.lawson_iterations,
        )

    def task(self, task: TaskConfig) -> UniversalTask:
        prefix = f"task.{task.index}"
        compact = ProductCompact(
            tuple(make_compact(s, f"{prefix}.compact.{i}") for i, s in enumerate(task.compacts, start=1))
        )
        target = make_target(
            task.target, self.config.dimension, f"{prefix}.target", self.config.base_dir, task.assert_ad
        )
        return UniversalTask(
            target=target,
            compact=compact,
            epsilon=task.epsilon,
            level=task.level,
            orders=task.orders,
            outside_axis=task.outside_axis,
            shift_axis=task.shift_axis,
            label=str(task.index),
        )

    def schedule(self) -> Tuple[UniversalTask, ...]:
        if not self.config.tasks:
            raise ConfigError("task", "расписание задач пусто")
        return tuple(self.task(t) for t in self.config.tasks)

    def _task_config(self, index: Optional[int]) -> TaskConfig:
        if not self.config.tasks:
            raise ConfigError("task", "расписание задач пусто")
        if index is None:
            return self.config.tasks[0]
        for task in self.config.tasks:
            if task.index == index:
                return task
        raise ConfigError("task", f"задача {index} не найдена")

    # ==================== ОПЕРАЦИИ ====================

    def approximate(self, task_index: Optional[int] = None) -> FitReport:
        """
        Одиночная подгонка по задаче расписания.

        Задача с ненулевыми порядками производных подгоняется с ограничениями
        на производные на K; иначе одновременно на K (цель) и L_m (ноль).
        """
        task_config = self._task_config(task_index)
        task = self.task(task_config)
        run = self.config.run
        enumeration = self.enumeration()
        if any(any(a) for a in task.orders):
            self.logger.info(f"Подгонка с производными: задача {task.label}, порядки {task.fit_orders}")
            return derivative_constrained_approx(
                task.target,
                task.compact,
                task.fit_orders,
                task.epsilon,
                enumeration,
                run.degree_cap,
                plan=self.plan(),
                ridge=run.ridge,
                lawson_iterations=run.lawson_iterations,
            )
        domain = self.domain_spec()
        task.check_outside(domain, run.fit_density)
        self.logger.info(f"Одновременная подгонка: задача {task.label}, L уровня {task.level}")
        return simultaneous_approx(
            task.target,
            task.compact,
            domain.exhaustion(task.level),
            task.epsilon,
            enumeration,
            run.degree_cap,
            plan=self.plan(),
            ridge=run.ridge,
            lawson_iterations=run.lawson_iterations,
        )

    def build(self, series_path: Optional[Path] = None) -> WorkflowResult:
        """
        Строит ряд и сохраняет его.

        При отказе этапа частичный ряд с сертификатом сохраняется,
        исключение StageFailure пробрасывается дальше.
        """
        start_time = datetime.now()
        self._update_progress(WorkflowStages.INITIALIZATION, "Подготовка расписания")
        domain = self.domain_spec()
        enumeration = self.enumeration()
        mu = self.mu()
        schedule = self.schedule()
        self.logger.info(
            f"Построение: d={domain.dimension}, схема {enumeration.name}, μ={mu.to_text()}, "
            f"задач {len(schedule)}"
        )

        self._update_progress(WorkflowStages.BUILD, "Построение корректирующих блоков")
        try:
            series = build_universal(domain, enumeration, mu, schedule, self.budget())
        except StageFailure as e:
            if series_path is not None and e.partial_series is not None:
                self._update_progress(WorkflowStages.PERSISTENCE, "Сохранение частичного ряда")
                save_series(e.partial_series, series_path)
                self.logger.warning(
                    f"Частичный ряд ({len(e.partial_series.certificate)} этапов) сохранён: {series_path}"
                )
            raise

        result = WorkflowResult(success=True, series=series)
        if self.config.run.seminorm_orders:
            result.seminorms = self.seminorms(series)
        if series_path is not None:
            self._update_progress(WorkflowStages.PERSISTENCE, "Сохранение ряда")
            result.series_path = save_series(series, series_path)
        result.execution_time_seconds = (datetime.now() - start_time).total_seconds()
        self.logger.info(f"Workflow завершён за {result.execution_time_seconds:.2f} сек")
        return result

    def verify(
        self, series: UniversalSeries, moving_compact: Optional[str] = None
    ) -> VerificationReport:
        """Пересчёт сертификата и, при заданной сетке, проверка подвижного центра."""
        self._update_progress(WorkflowStages.VERIFICATION, "Пересчёт сертификата")
        moving = None
        if moving_compact is not None:
            factors = tuple(
                make_compact(s.strip(), f"moving.{i}")
                for i, s in enumerate(moving_compact.split(";"), start=1)
            )
            if len(factors) == 1 and series.dimension > 1:
                factors = factors * series.dimension
            moving = MovingCenterSpec(
                ProductCompact(factors), self.config.run.moving_density, self.config.run.product_cap
            )
        return verify_certificate(series, moving)

    def seminorms(self, series: UniversalSeries) -> List[Dict[str, float]]:
        run = self.config.run
        profile = limit_seminorms(series, run.seminorm_orders, run.seminorm_radius, run.fit_density)
        for stage, values in enumerate(profile, start=1):
            self.logger.info(f"Этап {stage}: полунормы хвоста {values}")
        return profile

    def describe(self) -> Dict[str, Any]:
        run = self.config.run
        return {
            "dimension": run.dimension,
            "scheme": run.scheme,
            "mu": run.mu,
            "tasks": len(self.config.tasks),
            "degree_cap": run.degree_cap,
            "fit_density": run.fit_density,
        }
