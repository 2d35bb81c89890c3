"""
Главный класс приложения.

Точка входа командной строки: подкоманды enumerate, approx, build,
verify, rearrange, demo-nonuniversal и eval. Коды завершения:
0 успех, 1 ошибка ввода, 2 численный отказ или несовпадение сертификата.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..config.config_reader import RunConfig, load_config
from ..config.settings import (
    APP_DESCRIPTION,
    APP_NAME,
    APP_VERSION,
    DEFAULT_ENV_PATH,
    DEFAULT_LOG_DIR,
    LoggingSettings,
    SamplingSettings,
    UniversalSettings,
    get_runtime_info,
)
from ..core.exceptions import ConfigError, NumericFailure, OverconvergenceError
from ..geometry.compacts import ProductCompact, make_compact, parse_complex
from ..geometry.sampling import FIT, product_sample
from ..rearrange.nonuniversal import nonuniversal_enumeration
from ..rearrange.steering import TermSequence, steer_rearrangement
from ..series.enumerations import GRADED, SCHEMES, make_enumeration
from ..series.targets import parse_analytic
from ..series.analytic import exact_series
from ..storage.report import CSV, TABLE, EvaluationGrid, ReportTable, emit_report
from ..storage.series_file import load_series
from ..storage.workbook import write_workbook
from ..universal.certificate import MovingCenterSpec, verify_certificate
from .error_handler import ErrorHandler, ErrorReporter
from .workflow import WorkflowOrchestrator

XLSX = "xlsx"


class CommandLineParser(argparse.ArgumentParser):
    """Парсер, сообщающий об ошибке аргументов через ConfigError (код 1)."""

    def error(self, message: str):
        raise ConfigError("argv", message)

_LOG_MARKER = "_overconvergence_handler"


@dataclass
class AppStatus:
    """Статус приложения."""

    last_operation: Optional[str] = None
    last_operation_time: Optional[datetime] = None
    exit_code: int = 0

    def update_operation(self, operation: str) -> None:
        self.last_operation = operation
        self.last_operation_time = datetime.now()


def setup_logging(log_dir: Path = DEFAULT_LOG_DIR, level: Optional[str] = None) -> logging.Logger:
    """
    Настраивает корневой логгер: файл с ротацией в полночь и консоль (stderr).

    Обработчики добавляются один раз за процесс.
    """
    root = logging.getLogger()
    level_name = (level or os.environ.get("LOG_LEVEL") or LoggingSettings.LOG_LEVEL).upper()
    root.setLevel(getattr(logging, level_name, logging.INFO))

    if not any(getattr(h, _LOG_MARKER, False) for h in root.handlers):
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        formatter = logging.Formatter(LoggingSettings.LOG_FORMAT, LoggingSettings.DATE_FORMAT)

        file_handler = TimedRotatingFileHandler(
            filename=str(log_dir / LoggingSettings.LOG_FILE_NAME),
            when="midnight",
            interval=1,
            backupCount=LoggingSettings.LOG_BACKUP_COUNT,
            encoding="utf-8",
        )
        file_handler.suffix = "%Y%m%d"
        console_handler = logging.StreamHandler(sys.stderr)

        for handler in (file_handler, console_handler):
            handler.setFormatter(formatter)
            setattr(handler, _LOG_MARKER, True)
            root.addHandler(handler)

    return logging.getLogger("OverconvergenceApp")


def _parse_points(text: str, dimension: int) -> np.ndarray:
    """'z_1 ... z_d; z_1 ... z_d' -> массив (n, d)."""
    points = []
    for n, chunk in enumerate((c for c in text.split(";") if c.strip()), start=1):
        tokens = chunk.split()
        if len(tokens) != dimension:
            raise ConfigError(f"points.{n}", f"ожидалось {dimension} координат, получено {len(tokens)}")
        points.append([parse_complex(t, f"points.{n}") for t in tokens])
    if not points:
        raise ConfigError("points", "не задано ни одной точки")
    return np.asarray(points, dtype=complex)


def _parse_compacts(text: str, dimension: int, field_name: str) -> ProductCompact:
    factors = tuple(
        make_compact(s.strip(), f"{field_name}.{i}")
        for i, s in enumerate((c for c in text.split(";") if c.strip()), start=1)
    )
    if len(factors) == 1 and dimension > 1:
        factors = factors * dimension
    compact = ProductCompact(factors)
    compact.require_dimension(dimension, field_name)
    return compact


class OverconvergenceApp:
    """
    Приложение командной строки.

    Каждая подкоманда возвращает объект отчёта; вывод и коды завершения
    определяются в run().
    """

    def __init__(
        self,
        enable_logging: bool = True,
        log_dir: Path = DEFAULT_LOG_DIR,
        env_path: Optional[Path] = DEFAULT_ENV_PATH,
        error_handler: Optional[ErrorHandler] = None,
    ):
        self.enable_logging = enable_logging
        self.env_path = env_path
        self.status = AppStatus()
        self.error_handler = error_handler or ErrorHandler(
            save_error_reports=enable_logging, reports_dir=Path(log_dir) / "error_reports"
        )
        self.logger = (
            setup_logging(log_dir) if enable_logging else logging.getLogger(self.__class__.__name__)
        )
        self.logger.info(f"Инициализирован {APP_NAME} v{APP_VERSION}")

    # ==================== АРГУМЕНТЫ ====================

    def build_parser(self) -> argparse.ArgumentParser:
        parser = CommandLineParser(prog="overconvergence", description=APP_DESCRIPTION)
        parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
        sub = parser.add_subparsers(dest="command", required=True)

        def common(p: argparse.ArgumentParser) -> None:
            p.add_argument("--format", choices=[TABLE, CSV, XLSX], default=TABLE)
            p.add_argument("--report", type=Path, help="файл отчёта (по умолчанию stdout)")

        p = sub.add_parser("enumerate", help="первые мультииндексы нумерации")
        p.add_argument("--config", type=Path)
        p.add_argument("--scheme", choices=SCHEMES, default=GRADED)
        p.add_argument("--dimension", type=int, default=1)
        p.add_argument("--count", type=int, default=20)
        common(p)

        p = sub.add_parser("approx", help="одиночная полиномиальная подгонка")
        p.add_argument("--config", type=Path, required=True)
        p.add_argument("--task", type=int)
        common(p)

        p = sub.add_parser("build", help="построение универсального ряда")
        p.add_argument("--config", type=Path, required=True)
        p.add_argument("--out", type=Path, required=True, help="файл ряда")
        common(p)

        p = sub.add_parser("verify", help="пересчёт сертификата")
        p.add_argument("--series", type=Path, required=True)
        p.add_argument("--moving", help="сетка центров: компакт или компакты через ';'")
        p.add_argument("--moving-density", type=int, default=None)
        common(p)

        p = sub.add_parser("rearrange", help="перестановка вещественного ряда")
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--preset", choices=["alternating_harmonic", "geometric", "zeros"])
        source.add_argument("--terms", type=Path)
        p.add_argument("--count", type=int, default=1000)
        common(p)

        p = sub.add_parser("demo-nonuniversal", help="нумерация без универсальности")
        p.add_argument("--series", type=Path)
        p.add_argument("--target", default="-1 : rat(1 / 1)")
        p.add_argument("--scheme", choices=SCHEMES, default=GRADED)
        p.add_argument("--dimension", type=int, default=1)
        p.add_argument("--z1", default=None)
        p.add_argument("--z2", required=True)
        p.add_argument("--count", type=int, default=200)
        p.add_argument("--group-blocks", action="store_true")
        common(p)

        p = sub.add_parser("eval", help="значения частичной суммы ряда")
        p.add_argument("--series", type=Path, required=True)
        p.add_argument("--stage", type=int)
        points = p.add_mutually_exclusive_group(required=True)
        points.add_argument("--points")
        points.add_argument("--grid")
        p.add_argument("--density", type=int, default=8)
        common(p)

        return parser

    # ==================== ПОДКОМАНДЫ ====================

    def _load_config(self, path: Path) -> RunConfig:
        return load_config(path, self.env_path)

    def cmd_enumerate(self, args) -> ReportTable:
        if args.config is not None:
            run = self._load_config(args.config).run
            enumeration = make_enumeration(run.scheme, run.dimension, run.custom_prefix, run.custom_fallback)
        else:
            enumeration = make_enumeration(args.scheme, args.dimension)
        if args.count < 1:
            raise ConfigError("count", f"должно быть ≥ 1, получено {args.count}")
        rows = [
            [j, ",".join(str(x) for x in a), enumeration.grading(a)]
            for j, a in enumerate(enumeration.multis_upto(args.count))
        ]
        return ReportTable(f"Нумерация {enumeration.name}", ["index", "multi", "grade"], rows)

    def cmd_approx(self, args):
        orchestrator = WorkflowOrchestrator(self._load_config(args.config))
        report = orchestrator.approximate(args.task)
        self.logger.info(f"Подгонка выполнена: {report.summary()}")
        return report

    def cmd_build(self, args):
        orchestrator = WorkflowOrchestrator(self._load_config(args.config))
        result = orchestrator.build(args.out)
        self.logger.info(f"Ряд сохранён: {result.series_path}, λ = {result.series.certificate.lambdas}")
        return result.series

    def cmd_verify(self, args):
        series = load_series(args.series)
        moving = None
        if args.moving:
            moving = MovingCenterSpec(
                _parse_compacts(args.moving, series.dimension, "moving"),
                args.moving_density or UniversalSettings.MOVING_DENSITY,
                series.certificate.product_cap,
            )
        report = verify_certificate(series, moving)
        if not report.passed:
            self.status.exit_code = 2
        self.logger.info(report.summary())
        return report if report.moving else series.certificate

    def cmd_rearrange(self, args):
        if args.terms is not None:
            terms = TermSequence.from_file(args.terms)
        else:
            terms = TermSequence.preset(args.preset, args.count)
        result = steer_rearrangement(terms)
        self.logger.info(
            f"Класс предела: {result.limit_class.value}, контрольных точек {len(result.checkpoints)}, "
            f"проверка {'пройдена' if result.verify_checkpoints() else 'не пройдена'}"
        )
        if result.limit_estimate is not None:
            self.logger.info(f"Оценка предела ℓ = {result.limit_estimate!r}")
        return result

    def cmd_demo_nonuniversal(self, args):
        if args.series is not None:
            series = load_series(args.series)
            f = series.polynomial
            enumeration = series.enumeration
            z1 = series.domain.center if args.z1 is None else None
        else:
            enumeration = make_enumeration(args.scheme, args.dimension)
            f = None
            z1 = None
        d = enumeration.dimension
        if z1 is None:
            z1 = tuple(_parse_points(args.z1 or " ".join(["0"] * d), d)[0])
        z2 = tuple(_parse_points(args.z2, d)[0])
        if f is None:
            h = parse_analytic(args.target, d, "target")
            grade = enumeration.grade_of_index(args.count - 1) if args.count > 0 else 0
            f = exact_series(h, z1, grade, enumeration)

        result = nonuniversal_enumeration(
            f, z1, z2, enumeration, args.count, group_blocks=args.group_blocks
        )
        witness = result.witness
        self.logger.info(
            f"Свидетель неплотности: {witness.kind if witness else 'не найден'}"
            + (f" ({witness})" if witness else "")
        )
        return result.rearrangement

    def cmd_eval(self, args) -> EvaluationGrid:
        series = load_series(args.series)
        polynomial = series.polynomial
        if args.stage is not None:
            lambdas = series.certificate.lambdas
            if not 1 <= args.stage <= len(lambdas):
                raise ConfigError("stage", f"этап должен быть в 1..{len(lambdas)}")
            polynomial = series.partial_sum(lambdas[args.stage - 1])
        if args.points:
            points = _parse_points(args.points, series.dimension)
        else:
            compact = _parse_compacts(args.grid, series.dimension, "grid")
            points = product_sample(compact, args.density, SamplingSettings.PRODUCT_CAP, FIT).points
        return EvaluationGrid(polynomial, points)

    # ==================== ВЫВОД ====================

    def _emit(self, obj: Any, args, write: Callable[[str], Any]) -> None:
        if args.format == XLSX:
            if args.report is None:
                raise ConfigError("report", "для формата xlsx нужен путь --report")
            path = write_workbook(obj, args.report, {"Команда:": args.command})
            write(f"{path}\n")
            return
        text = emit_report(obj, args.format)
        if args.report is not None:
            Path(args.report).parent.mkdir(parents=True, exist_ok=True)
            Path(args.report).write_text(text, encoding="utf-8")
            self.logger.info(f"Отчёт записан: {args.report}")
        else:
            write(text)

    def run(self, argv: Optional[Sequence[str]] = None, write: Callable[[str], Any] = sys.stdout.write) -> int:
        """
        Выполняет подкоманду.

        Returns:
            int: Код завершения (0, 1 или 2)
        """
        commands: Dict[str, Callable] = {
            "enumerate": self.cmd_enumerate,
            "approx": self.cmd_approx,
            "build": self.cmd_build,
            "verify": self.cmd_verify,
            "rearrange": self.cmd_rearrange,
            "demo-nonuniversal": self.cmd_demo_nonuniversal,
            "eval": self.cmd_eval,
        }
        self.status = AppStatus()
        operation = "argv"
        try:
            args = self.build_parser().parse_args(argv)
            operation = args.command
            self.status.update_operation(operation)
            obj = commands[args.command](args)
            self._emit(obj, args, write)
            return self.status.exit_code
        except OverconvergenceError as e:
            context = self.error_handler.handle_error(e, operation, "OverconvergenceApp")
            if isinstance(e, NumericFailure):
                self.logger.error(f"Численный бюджет исчерпан: {e.message}")
            sys.stderr.write(ErrorReporter(self.error_handler).generate_summary_report() + "\n")
            self.status.exit_code = context.exit_code
            return context.exit_code
        except OSError as e:
            self.error_handler.handle_error(e, operation, "OverconvergenceApp")
            self.status.exit_code = 1
            return 1

    def get_app_info(self) -> Dict[str, Any]:
        return {
            "app_name": APP_NAME,
            "app_version": APP_VERSION,
            "last_operation": self.status.last_operation,
            "exit_code": self.status.exit_code,
            "runtime": get_runtime_info(),
            "errors": self.error_handler.get_error_summary(),
        }


class AppFactory:
    """Фабрика для создания экземпляров приложения."""

    @staticmethod
    def create_app(enable_logging: bool = True) -> OverconvergenceApp:
        return OverconvergenceApp(enable_logging=enable_logging)

    @staticmethod
    def create_for_testing(log_dir: Path, env_path: Optional[Path] = None) -> OverconvergenceApp:
        """Приложение без файлового логирования и без .env."""
        return OverconvergenceApp(
            enable_logging=False,
            log_dir=log_dir,
            env_path=env_path,
            error_handler=ErrorHandler(log_errors=True, save_error_reports=False),
        )


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция для запуска из командной строки."""
    try:
        return AppFactory.create_app().run(argv)
    except KeyboardInterrupt:
        sys.stderr.write("\n⏹️  Работа прервана пользователем\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
