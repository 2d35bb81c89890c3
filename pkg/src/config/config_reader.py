"""
Модуль для чтения и валидации конфигурации запуска.

Формат INI: секция [run] с общими параметрами, секции [domain.<i>]
с областями Ω_i и секции [task.<n>] с расписанием задач. Переопределения
плотностей сеток и бюджета берутся из окружения (префикс OVC_) и .env.
"""

import configparser
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..core.exceptions import ConfigError, ValidationError
from ..geometry.compacts import format_complex, make_compact, parse_complex
from ..geometry.domains import make_domain
from ..series.enumerations import CUSTOM, SCHEMES, make_enumeration
from ..series.targets import make_target
from .settings import (
    DEFAULT_ENV_PATH,
    ApproximationSettings,
    SamplingSettings,
    UniversalSettings,
    get_environment_settings,
)
from .validation import ConfigValidator

MultiIndex = Tuple[int, ...]

RUN_SECTION = "run"
DOMAIN_PREFIX = "domain."
TASK_PREFIX = "task."

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


# ==================== РАЗБОР ЗНАЧЕНИЙ ====================


def _parse_int(text: str, field_name: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(field_name, f"ожидалось целое число, получено {text!r}")


def _parse_float(text: str, field_name: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ConfigError(field_name, f"ожидалось число, получено {text!r}")


def _parse_bool(text: str, field_name: str) -> bool:
    value = text.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ConfigError(field_name, f"ожидалось true/false, получено {text!r}")


def parse_multi_indices(text: str, field_name: str) -> Tuple[MultiIndex, ...]:
    """'1,0; 0,1' -> ((1, 0), (0, 1)); пустая строка -> ()."""
    result = []
    for n, chunk in enumerate(text.split(";"), start=1):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise ConfigError(f"{field_name}.{n}", f"некорректный мультииндекс {chunk!r}")
        if any(x < 0 for x in a):
            raise ConfigError(f"{field_name}.{n}", f"отрицательный показатель в {chunk!r}")
        result.append(a)
    return tuple(result)


def format_multi_indices(values: Tuple[MultiIndex, ...]) -> str:
    return "; ".join(",".join(str(x) for x in a) for a in values)


# ==================== СЕКЦИИ ====================


@dataclass(frozen=True)
class RunSettings:
    """Секция [run]: размерность, центр, нумерация, μ и бюджеты."""

    dimension: int
    center: Tuple[complex, ...]
    scheme: str = "graded"
    mu: str = "all"
    custom_prefix: Tuple[MultiIndex, ...] = ()
    custom_fallback: Optional[str] = None
    degree_cap: int = ApproximationSettings.DEGREE_CAP
    fit_density: int = SamplingSettings.FIT_DENSITY
    validation_factor: int = SamplingSettings.VALIDATION_FACTOR
    product_cap: int = SamplingSettings.PRODUCT_CAP
    validation_cap: int = SamplingSettings.VALIDATION_CAP
    moving_density: int = UniversalSettings.MOVING_DENSITY
    delta_ratio: float = 0.5
    ridge: float = ApproximationSettings.RIDGE
    lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS
    seminorm_orders: Tuple[MultiIndex, ...] = ()
    seminorm_radius: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(complex(z) for z in self.center))
        object.__setattr__(self, "scheme", self.scheme.strip().lower())
        if self.dimension < 1:
            raise ConfigError("run.dimension", f"d должно быть ≥ 1, получено {self.dimension}")
        if self.scheme not in SCHEMES:
            raise ConfigError(
                "run.scheme", f"неизвестная схема {self.scheme!r}, допустимы: {', '.join(SCHEMES)}"
            )
        if self.scheme == CUSTOM and not self.custom_prefix:
            raise ConfigError("run.custom_prefix", "для схемы custom нужен явный префикс")
        for name in ("degree_cap", "fit_density", "validation_factor", "product_cap",
                     "validation_cap", "moving_density"):
            if getattr(self, name) < 1:
                raise ConfigError(f"run.{name}", f"должно быть ≥ 1, получено {getattr(self, name)}")
        if not 0 < self.delta_ratio < 1:
            raise ConfigError("run.delta_ratio", f"должно быть в (0, 1), получено {self.delta_ratio}")
        if self.ridge < 0:
            raise ConfigError("run.ridge", "регуляризация не может быть отрицательной")
        if self.lawson_iterations < 0:
            raise ConfigError("run.lawson_iterations", "число итераций не может быть отрицательным")
        if self.seminorm_radius is not None and not self.seminorm_radius > 0:
            raise ConfigError("run.seminorm_radius", "радиус должен быть > 0")


@dataclass(frozen=True)
class DomainConfig:
    """Секция [domain.<i>]."""

    index: int
    shape: str

    def __post_init__(self):
        make_domain(self.shape, f"domain.{self.index}.shape")


@dataclass(frozen=True)
class TaskConfig:
    """Секция [task.<n>]: цель, компакт и точность одного этапа."""

    index: int
    target: str
    compacts: Tuple[str, ...]
    epsilon: float
    level: int = UniversalSettings.DEFAULT_LEVEL
    orders: Tuple[MultiIndex, ...] = ()
    outside_axis: Optional[int] = None
    shift_axis: int = 1
    assert_ad: bool = False

    def __post_init__(self):
        prefix = f"task.{self.index}"
        object.__setattr__(self, "compacts", tuple(self.compacts))
        object.__setattr__(self, "orders", tuple(tuple(a) for a in self.orders))
        if not self.target.strip():
            raise ConfigError(f"{prefix}.target", "цель не задана")
        if not self.compacts:
            raise ConfigError(f"{prefix}.compact", "не задан ни один множитель компакта")
        for i, spec in enumerate(self.compacts, start=1):
            make_compact(spec, f"{prefix}.compact.{i}")
        if not self.epsilon > 0:
            raise ConfigError(f"{prefix}.epsilon", f"ε должно быть > 0, получено {self.epsilon}")
        if self.level < 1:
            raise ConfigError(f"{prefix}.level", f"уровень должен быть ≥ 1, получено {self.level}")

    @property
    def is_samples(self) -> bool:
        return self.target.strip().lower().startswith("samples")


@dataclass(frozen=True)
class RunConfig:
    """Валидированная конфигурация запуска."""

    run: RunSettings
    domains: Tuple[DomainConfig, ...]
    tasks: Tuple[TaskConfig, ...] = ()
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        object.__setattr__(self, "tasks", tuple(self.tasks))
        result = ConfigValidator().validate(self)
        if not result.is_valid:
            raise result.first_error()
        d = self.run.dimension
        for task in self.tasks:
            if not task.is_samples:
                make_target(task.target, d, f"task.{task.index}.target")
        try:
            make_enumeration(self.run.scheme, d, self.run.custom_prefix, self.run.custom_fallback)
        except ValidationError as e:
            raise ConfigError("run.custom_prefix", e.message)

    @property
    def dimension(self) -> int:
        return self.run.dimension

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Копия с переопределёнными параметрами секции [run]."""
        known = {k: v for k, v in overrides.items() if hasattr(self.run, k)}
        if not known:
            return self
        return replace(self, run=replace(self.run, **known))

    def to_text(self) -> str:
        """Каноническое представление: parse_config(cfg.to_text()) == cfg."""
        parser = _new_parser()
        run = self.run
        section: Dict[str, str] = {
            "dimension": str(run.dimension),
            "center": " ".join(format_complex(z) for z in run.center),
            "scheme": run.scheme,
            "mu": run.mu,
        }
        if run.custom_prefix:
            section["custom_prefix"] = format_multi_indices(run.custom_prefix)
        if run.custom_fallback is not None:
            section["custom_fallback"] = run.custom_fallback
        for name in ("degree_cap", "fit_density", "validation_factor", "product_cap",
                     "validation_cap", "moving_density", "lawson_iterations"):
            section[name] = str(getattr(run, name))
        section["delta_ratio"] = repr(run.delta_ratio)
        section["ridge"] = repr(run.ridge)
        if run.seminorm_orders:
            section["seminorm_orders"] = format_multi_indices(run.seminorm_orders)
        if run.seminorm_radius is not None:
            section["seminorm_radius"] = repr(run.seminorm_radius)
        parser[RUN_SECTION] = section

        for domain in self.domains:
            parser[f"{DOMAIN_PREFIX}{domain.index}"] = {"shape": domain.shape}

        for task in self.tasks:
            values = {"target": task.target}
            for i, spec in enumerate(task.compacts, start=1):
                values[f"compact.{i}"] = spec
            values["epsilon"] = repr(task.epsilon)
            values["level"] = str(task.level)
            if task.orders:
                values["orders"] = format_multi_indices(task.orders)
            if task.outside_axis is not None:
                values["outside_axis"] = str(task.outside_axis)
            values["shift_axis"] = str(task.shift_axis)
            values["assert_ad"] = "true" if task.assert_ad else "false"
            parser[f"{TASK_PREFIX}{task.index}"] = values

        lines: List[str] = []
        for name in parser.sections():
            lines.append(f"[{name}]")
            lines.extend(f"{key} = {value}" for key, value in parser[name].items())
            lines.append("")
        return "\n".join(lines)


# ==================== ЧТЕНИЕ ====================


def _new_parser() -> configparser.ConfigParser:
    return configparser.ConfigParser(interpolation=None)


def _section_index(name: str, prefix: str) -> int:
    suffix = name[len(prefix):]
    if not suffix.isdigit() or int(suffix) < 1:
        raise ConfigError(name, f"номер секции должен быть целым ≥ 1, получено {suffix!r}")
    return int(suffix)


def _check_keys(section: configparser.SectionProxy, allowed, name: str) -> None:
    for key in section.keys():
        if key not in allowed and not any(key.startswith(p) for p in allowed if p.endswith(".")):
            raise ConfigError(f"{name}.{key}", "неизвестный параметр")


_RUN_INT_KEYS = ("dimension", "degree_cap", "fit_density", "validation_factor", "product_cap",
                 "validation_cap", "moving_density", "lawson_iterations")
_RUN_KEYS = set(_RUN_INT_KEYS) | {
    "center", "scheme", "mu", "custom_prefix", "custom_fallback", "delta_ratio", "ridge",
    "seminorm_orders", "seminorm_radius",
}
_TASK_KEYS = {"target", "compact.", "epsilon", "level", "orders", "outside_axis",
              "shift_axis", "assert_ad"}


def _read_run(section: configparser.SectionProxy) -> RunSettings:
    _check_keys(section, _RUN_KEYS, RUN_SECTION)
    if "dimension" not in section:
        raise ConfigError("run.dimension", "обязательный параметр")
    values: Dict[str, Any] = {}
    for key in _RUN_INT_KEYS:
        if key in section:
            values[key] = _parse_int(section[key], f"run.{key}")
    for key in ("delta_ratio", "ridge", "seminorm_radius"):
        if key in section:
            values[key] = _parse_float(section[key], f"run.{key}")
    for key in ("scheme", "mu"):
        if key in section:
            values[key] = section[key].strip()
    if "custom_fallback" in section:
        values["custom_fallback"] = section["custom_fallback"].strip().lower()
    for key in ("custom_prefix", "seminorm_orders"):
        if key in section:
            values[key] = parse_multi_indices(section[key], f"run.{key}")
    tokens = section.get("center", "").split()
    if not tokens:
        raise ConfigError("run.center", "центр ζ⁰ не задан")
    values["center"] = tuple(
        parse_complex(t, f"run.center.{i}") for i, t in enumerate(tokens, start=1)
    )
    try:
        return RunSettings(**values)
    except ValidationError as e:
        if e.field.startswith("run."):
            raise
        raise ConfigError("run", e.message)


def _read_task(name: str, section: configparser.SectionProxy) -> TaskConfig:
    index = _section_index(name, TASK_PREFIX)
    _check_keys(section, _TASK_KEYS, name)
    if "target" not in section:
        raise ConfigError(f"{name}.target", "обязательный параметр")
    if "epsilon" not in section:
        raise ConfigError(f"{name}.epsilon", "обязательный параметр")

    compact_keys = sorted(
        (_section_index(k, "compact."), k) for k in section.keys() if k.startswith("compact.")
    )
    if [i for i, _ in compact_keys] != list(range(1, len(compact_keys) + 1)):
        raise ConfigError(f"{name}.compact", "множители должны быть пронумерованы 1..d без пропусков")

    outside = section.get("outside_axis")
    return TaskConfig(
        index=index,
        target=section["target"].strip(),
        compacts=tuple(section[k].strip() for _, k in compact_keys),
        epsilon=_parse_float(section["epsilon"], f"{name}.epsilon"),
        level=_parse_int(section.get("level", str(UniversalSettings.DEFAULT_LEVEL)), f"{name}.level"),
        orders=parse_multi_indices(section.get("orders", ""), f"{name}.orders"),
        outside_axis=_parse_int(outside, f"{name}.outside_axis") if outside else None,
        shift_axis=_parse_int(section.get("shift_axis", "1"), f"{name}.shift_axis"),
        assert_ad=_parse_bool(section.get("assert_ad", "false"), f"{name}.assert_ad"),
    )


def parse_config(text: str, base_dir: Union[str, Path] = ".") -> RunConfig:
    """
    Разбирает текст конфигурации.

    Args:
        text: Текст INI
        base_dir: Каталог для относительных путей выборок

    Returns:
        RunConfig: Валидированная конфигурация

    Raises:
        ConfigError: Ошибка с путём к полю (например, run.scheme или task.2.compact.1)
    """
    parser = _new_parser()
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError("config", f"ошибка синтаксиса: {e}")

    if RUN_SECTION not in parser.sections():
        raise ConfigError(RUN_SECTION, "секция [run] не найдена")
    for name in parser.sections():
        if name != RUN_SECTION and not name.startswith((DOMAIN_PREFIX, TASK_PREFIX)):
            raise ConfigError(name, "неизвестная секция")

    run = _read_run(parser[RUN_SECTION])

    domains = []
    for name in parser.sections():
        if name.startswith(DOMAIN_PREFIX):
            _check_keys(parser[name], {"shape"}, name)
            if "shape" not in parser[name]:
                raise ConfigError(f"{name}.shape", "обязательный параметр")
            domains.append(DomainConfig(_section_index(name, DOMAIN_PREFIX), parser[name]["shape"].strip()))
    tasks = [_read_task(name, parser[name]) for name in parser.sections() if name.startswith(TASK_PREFIX)]

    return RunConfig(
        run=run,
        domains=tuple(sorted(domains, key=lambda d: d.index)),
        tasks=tuple(sorted(tasks, key=lambda t: t.index)),
        base_dir=Path(base_dir),
    )


class ConfigReader:
    """
    Чтение конфигурации из файла с учётом переопределений.

    Приоритет для параметров сеток и бюджета: os.environ > .env > файл.
    """

    def __init__(
        self,
        config_path: Union[str, Path],
        env_path: Optional[Union[str, Path]] = DEFAULT_ENV_PATH,
    ):
        self.config_path = Path(config_path)
        self.env_path = Path(env_path) if env_path is not None else None
        self.logger = logging.getLogger(self.__class__.__name__)
        self._config: Optional[RunConfig] = None

    def load_config(self) -> RunConfig:
        """
        Загружает и валидирует конфигурацию.

        Raises:
            ConfigError: Файл не найден или содержит ошибки
        """
        if not self.config_path.exists():
            raise ConfigError("config", f"файл конфигурации не найден: {self.config_path}")
        text = self.config_path.read_text(encoding="utf-8")
        config = parse_config(text, self.config_path.parent)
        overrides = get_environment_settings(self.env_path)
        if overrides:
            self.logger.info(f"Переопределения из окружения: {overrides}")
            try:
                config = config.with_overrides(overrides)
            except ValidationError as e:
                raise ConfigError("env", e.message)
        self._config = config
        self.logger.info(
            f"Конфигурация загружена: {self.config_path} "
            f"(d={config.dimension}, задач: {len(config.tasks)})"
        )
        return config

    def get_run_config(self) -> RunConfig:
        if self._config is None:
            return self.load_config()
        return self._config


def load_config(
    config_path: Union[str, Path], env_path: Optional[Union[str, Path]] = DEFAULT_ENV_PATH
) -> RunConfig:
    """Читает конфигурацию из файла с переопределениями окружения."""
    return ConfigReader(config_path, env_path).load_config()
