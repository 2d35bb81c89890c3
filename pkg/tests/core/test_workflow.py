"""
Тесты оркестратора: объекты предметной области из конфигурации,
подгонка, построение и проверка.
"""

import pytest

from src.config.config_reader import parse_config
from src.config.settings import TestSettings
from src.core.exceptions import ConfigError, StageFailure
from src.core.workflow import WorkflowOrchestrator, WorkflowProgress, WorkflowStages
from src.storage.series_file import load_series

FAST_CONFIG = """
[run]
dimension = 1
center = 0
scheme = graded
mu = residue 1 2
degree_cap = 10
fit_density = 12
seminorm_orders = 0
seminorm_radius = 1

[domain.1]
shape = disk 0 1

[task.1]
target = zero
compact.1 = segment 2 3
epsilon = 0.1

[task.2]
target = zero
compact.1 = segment -3 -2
epsilon = 0.05
level = 2
orders = 1
"""


def _orchestrator(text: str = FAST_CONFIG) -> WorkflowOrchestrator:
    return WorkflowOrchestrator(parse_config(text))


@pytest.mark.unit
class TestDomainObjects:
    """Сборка областей, нумерации, μ и расписания."""

    def test_domain_and_enumeration(self):
        orchestrator = _orchestrator()
        domain = orchestrator.domain_spec()
        assert domain.dimension == 1
        assert domain.center == (0j,)
        assert orchestrator.enumeration().dimension == 1
        assert orchestrator.mu().to_text() == "residue 1 2"

    def test_budget(self):
        budget = _orchestrator().budget()
        assert budget.degree_cap == 10
        assert budget.plan.fit_density == 12
        assert budget.delta_ratio == 0.5

    def test_schedule(self):
        schedule = _orchestrator().schedule()
        assert [t.label for t in schedule] == ["1", "2"]
        assert schedule[1].level == 2
        assert schedule[1].fit_orders == ((0,), (1,))

    def test_empty_schedule(self):
        text = FAST_CONFIG.split("[task.1]")[0]
        with pytest.raises(ConfigError):
            _orchestrator(text).schedule()

    def test_unknown_task(self):
        with pytest.raises(ConfigError):
            _orchestrator().approximate(5)

    def test_describe(self):
        info = _orchestrator().describe()
        assert info["tasks"] == 2
        assert info["mu"] == "residue 1 2"


@pytest.mark.unit
class TestOperations:
    """Подгонка, построение и проверка по расписанию."""

    def test_simultaneous_approx(self):
        report = _orchestrator().approximate(1)
        assert set(report.group_errors) == {"K", "L"}

    def test_derivative_approx(self):
        report = _orchestrator().approximate(2)
        assert set(report.group_errors) == {"K", "K1"}

    def test_build_and_verify(self, tmp_path):
        orchestrator = _orchestrator()
        stages = []
        orchestrator.add_progress_callback(lambda p: stages.append(p.current_stage))

        result = orchestrator.build(tmp_path / "series.json")
        assert result.success
        assert result.stages_completed == 2
        assert result.series.certificate.lambdas == [1, 3]
        assert result.series_path.exists()
        assert len(result.seminorms) == 2
        assert stages == [
            WorkflowStages.INITIALIZATION,
            WorkflowStages.BUILD,
            WorkflowStages.PERSISTENCE,
        ]

        loaded = load_series(result.series_path)
        report = orchestrator.verify(loaded, moving_compact="disk 0 0.5")
        assert report.passed
        assert len(report.moving) == 2

    def test_failure_saves_partial(self, tmp_path):
        text = FAST_CONFIG.replace("target = zero\ncompact.1 = segment -3 -2", "target = constant 1\ncompact.1 = segment -3 -2")
        text = text.replace("degree_cap = 10", "degree_cap = 1").replace("epsilon = 0.05", "epsilon = 1e-6")
        path = tmp_path / "partial.json"
        with pytest.raises(StageFailure) as exc_info:
            _orchestrator(text).build(path)
        assert exc_info.value.stage == 2
        assert len(load_series(path).certificate) == 1

    def test_minimal_config_orchestrator(self):
        orchestrator = _orchestrator(TestSettings.MINIMAL_CONFIG_TEXT)
        assert orchestrator.schedule()[0].epsilon == 0.1


@pytest.mark.unit
class TestProgress:
    def test_percent(self):
        progress = WorkflowProgress("build", 1, 4, "этап")
        assert progress.progress_percent == 25.0
        assert WorkflowProgress("build", 0, 0, "").progress_percent == 0.0
