"""
Тесты приложения командной строки: подкоманды, форматы вывода
и коды завершения.
"""

import json
import logging
from logging.handlers import TimedRotatingFileHandler

import pytest

from src.core.app import AppFactory, OverconvergenceApp, setup_logging

CONFIG = """
[run]
dimension = 1
center = 0
scheme = graded
mu = all
degree_cap = 10
fit_density = 12

[domain.1]
shape = disk 0 1

[task.1]
target = zero
compact.1 = segment 2 3
epsilon = 0.1

[task.2]
target = zero
compact.1 = segment 2 3
epsilon = 0.05
"""


class Output:
    """Накопитель вывода вместо stdout."""

    def __init__(self):
        self.parts = []

    def __call__(self, text: str) -> None:
        self.parts.append(text)

    @property
    def text(self) -> str:
        return "".join(self.parts)

    @property
    def lines(self):
        return self.text.splitlines()


@pytest.fixture
def app(tmp_path) -> OverconvergenceApp:
    return AppFactory.create_for_testing(tmp_path / "logs")


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(CONFIG, encoding="utf-8")
    return path


@pytest.fixture
def series_path(app, config_path, tmp_path):
    path = tmp_path / "series.json"
    assert app.run(["build", "--config", str(config_path), "--out", str(path)], write=Output()) == 0
    return path


@pytest.mark.unit
class TestEnumerateCommand:
    """Подкоманда enumerate."""

    def test_graded_csv(self, app):
        out = Output()
        code = app.run(["enumerate", "--scheme", "graded", "--dimension", "2", "--count", "6",
                        "--format", "csv"], write=out)
        assert code == 0
        assert out.lines[0] == "index,multi,grade"
        assert [line.split(",")[-1] for line in out.lines[1:]] == ["0", "1", "1", "2", "2", "2"]

    def test_from_config(self, app, config_path):
        out = Output()
        assert app.run(["enumerate", "--config", str(config_path), "--count", "3"], write=out) == 0
        assert out.lines[0].startswith("Нумерация")

    def test_invalid_count(self, app):
        assert app.run(["enumerate", "--count", "0"], write=Output()) == 1
        assert app.status.exit_code == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["enumerate", "--scheme", "sperical"],
            ["enumerate", "--count", "abc"],
            ["build", "--config", "run.ini"],
            ["no-such-command"],
        ],
    )
    def test_argument_errors_are_input_errors(self, app, argv):
        """Ошибки разбора аргументов дают код 1, а не код численного отказа."""
        assert app.run(argv, write=Output()) == 1
        context = app.error_handler.get_recent_errors(1)[0]
        assert context.error_type == "ConfigError"
        assert context.field_path == "argv"
        assert context.operation == "argv"


@pytest.mark.unit
class TestSeriesCommands:
    """build, verify и eval на файле ряда."""

    def test_build_writes_certificate(self, app, config_path, tmp_path):
        out = Output()
        path = tmp_path / "built.json"
        code = app.run(["build", "--config", str(config_path), "--out", str(path), "--format", "csv"],
                       write=out)
        assert code == 0
        assert path.exists()
        assert out.lines[0] == "stage,lambda,err_K,err_L_block,err_L_limit,degree"
        assert [line.split(",")[1] for line in out.lines[1:]] == ["0", "1"]

    def test_verify_passes(self, app, series_path):
        assert app.run(["verify", "--series", str(series_path)], write=Output()) == 0

    def test_verify_moving_center(self, app, series_path):
        out = Output()
        code = app.run(["verify", "--series", str(series_path), "--moving", "disk 0 0.5",
                        "--moving-density", "4", "--format", "csv"], write=out)
        assert code == 0
        assert out.lines[0] == "stage,center_error,worst_K_error,worst_L_error,ratio"
        assert len(out.lines) == 3

    def test_verify_tampered(self, app, series_path):
        data = json.loads(series_path.read_text(encoding="utf-8"))
        data["certificate"]["stages"][0]["err_K"] = (0.5).hex()
        series_path.write_text(json.dumps(data), encoding="utf-8")
        assert app.run(["verify", "--series", str(series_path)], write=Output()) == 2

    def test_verify_missing_file(self, app, tmp_path):
        assert app.run(["verify", "--series", str(tmp_path / "none.json")], write=Output()) == 1

    def test_eval_points(self, app, series_path):
        out = Output()
        code = app.run(["eval", "--series", str(series_path), "--points", "0.5; 2", "--format", "csv"],
                       write=out)
        assert code == 0
        assert out.lines[0] == "x_1,y_1,re,im,abs"
        assert len(out.lines) == 3

    def test_eval_grid(self, app, series_path):
        out = Output()
        code = app.run(["eval", "--series", str(series_path), "--stage", "1", "--grid", "segment 0 1",
                        "--density", "4", "--format", "csv"], write=out)
        assert code == 0
        assert len(out.lines) == 5

    def test_eval_bad_stage(self, app, series_path):
        assert app.run(["eval", "--series", str(series_path), "--stage", "5", "--points", "0"],
                       write=Output()) == 1

    def test_approx(self, app, config_path):
        out = Output()
        assert app.run(["approx", "--config", str(config_path), "--task", "1", "--format", "csv"],
                       write=out) == 0
        assert out.lines[0] == "group,order,error"


@pytest.mark.unit
class TestRearrangeCommands:
    """rearrange и demo-nonuniversal."""

    def test_geometric_preset(self, app):
        out = Output()
        assert app.run(["rearrange", "--preset", "geometric", "--count", "60", "--format", "csv"],
                       write=out) == 0
        assert len(out.lines) == 61
        assert abs(float(out.lines[-1].split(",")[-1]) - 2.0) <= 2.0**-49

    def test_terms_file(self, app, tmp_path):
        terms = tmp_path / "terms.txt"
        terms.write_text("1\n-1\n1\n-1\n", encoding="utf-8")
        out = Output()
        assert app.run(["rearrange", "--terms", str(terms), "--format", "csv"], write=out) == 0
        assert len(out.lines) == 5

    def test_demo_nonuniversal(self, app):
        out = Output()
        code = app.run(["demo-nonuniversal", "--z2", "2", "--count", "30", "--format", "csv"], write=out)
        assert code == 0
        assert len(out.lines) == 31

    def test_demo_from_series(self, app, series_path):
        out = Output()
        code = app.run(["demo-nonuniversal", "--series", str(series_path), "--z2", "2", "--count", "5"],
                       write=out)
        assert code == 0


@pytest.mark.unit
class TestOutputFormats:
    """Отчёты в файл и xlsx."""

    def test_report_file(self, app, tmp_path):
        out = Output()
        report = tmp_path / "reports" / "enum.csv"
        assert app.run(["enumerate", "--count", "3", "--format", "csv", "--report", str(report)],
                       write=out) == 0
        assert out.text == ""
        assert report.read_text(encoding="utf-8").splitlines()[0] == "index,multi,grade"

    def test_xlsx_requires_report(self, app):
        assert app.run(["enumerate", "--format", "xlsx"], write=Output()) == 1

    def test_xlsx_written(self, app, tmp_path):
        out = Output()
        report = tmp_path / "enum.xlsx"
        assert app.run(["enumerate", "--format", "xlsx", "--report", str(report)], write=out) == 0
        assert report.exists()
        assert out.text.strip() == str(report)


@pytest.mark.unit
class TestAppInfo:
    """Статус приложения и настройка логирования."""

    def test_info_after_error(self, app):
        app.run(["enumerate", "--count", "0"], write=Output())
        info = app.get_app_info()
        assert info["last_operation"] == "enumerate"
        assert info["exit_code"] == 1
        assert info["errors"]["total_errors"] == 1

    def test_setup_logging_once(self, tmp_path):
        root = logging.getLogger()
        before = list(root.handlers)
        try:
            setup_logging(tmp_path)
            setup_logging(tmp_path)
            added = [h for h in root.handlers if h not in before]
            rotating = [h for h in added if isinstance(h, TimedRotatingFileHandler)]
            assert len(added) == 2
            assert len(rotating) == 1
            assert rotating[0].when == "MIDNIGHT"
            assert (tmp_path / "overconvergence.log").exists()
        finally:
            for handler in list(root.handlers):
                if handler not in before:
                    root.removeHandler(handler)
                    handler.close()
