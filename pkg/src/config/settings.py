"""
Настройки и константы приложения.

Централизованное хранение всех настроек, численных допусков и параметров
по умолчанию для построения универсальных рядов Тейлора.
"""

import os
from pathlib import Path
from typing import Dict, Any, Optional

try:
    from dotenv import dotenv_values

    HAS_DOTENV = True
except ImportError:
    HAS_DOTENV = False
    dotenv_values = None


# ==================== ВЕРСИЯ ПРИЛОЖЕНИЯ ====================

APP_NAME = "Overconvergence Toolkit"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = (
    "Построение и проверка усечённых универсальных рядов Тейлора "
    "на произведениях плоских областей"
)

# Версия формата файла ряда
SERIES_FORMAT_VERSION = 1


# ==================== ПУТИ И ФАЙЛЫ ====================

PROJECT_ROOT = Path(__file__).parent.parent.parent

DEFAULT_CONFIG_PATH = PROJECT_ROOT / "overconvergence.ini"

DEFAULT_ENV_PATH = PROJECT_ROOT / ".env"

DEFAULT_LOG_DIR = PROJECT_ROOT / "logs"


# ==================== ВЫБОРКИ ====================


class SamplingSettings:
    """Параметры сеток на компактах."""

    # Плотность обучающей сетки
    FIT_DENSITY = 24

    # Во сколько раз валидационная сетка плотнее обучающей
    VALIDATION_FACTOR = 3

    # Максимум точек в произведении сеток
    PRODUCT_CAP = 4000

    # Максимум точек валидационного произведения
    VALIDATION_CAP = 20000

    # Допуск принадлежности точки выборки компакту
    CONTAINS_TOLERANCE = 1e-12


# ==================== АППРОКСИМАЦИЯ ====================


class ApproximationSettings:
    """Параметры метода наименьших квадратов."""

    # Тихоновская регуляризация относительно наибольшей нормы столбца
    RIDGE = 1e-12

    # Порог предупреждения об обусловленности
    CONDITION_WARNING = 1e14

    # Предел градуировки при эскалации
    DEGREE_CAP = 60

    # Допуск совпадения точек K и L
    OVERLAP_TOLERANCE = 1e-9

    # Минимальное расстояние до полюса
    POLE_TOLERANCE = 1e-9

    # Итерации Лоусона (0 = выключено)
    LAWSON_ITERATIONS = 0


# ==================== РЯДЫ ТЕЙЛОРА ====================


class TaylorSettings:
    """Ограничения полиномиальной алгебры."""

    # Максимальная степень по каждой оси
    MAX_AXIS_DEGREE = 512


# ==================== УНИВЕРСАЛЬНЫЕ РЯДЫ ====================


class UniversalSettings:
    """Параметры построения универсального ряда."""

    # Минимальное расстояние центра до границы области
    INTERIOR_MARGIN = 1e-6

    # Запас радиуса дисков B_i в режиме одной внешней оси
    ENCLOSING_DISK_MARGIN = 0.1

    # Пределы сеток подгонки с дисками B_i (обучающая, валидационная)
    SUBSTITUTE_PRODUCT_CAP = 1500
    SUBSTITUTE_VALIDATION_CAP = 4000

    # Допуск воспроизведения сертификата
    REPLAY_TOLERANCE = 1e-12

    # Плотность сетки подвижных центров
    MOVING_DENSITY = 6

    # Уровень исчерпания по умолчанию
    DEFAULT_LEVEL = 1


# ==================== ЛОГИРОВАНИЕ ====================


class LoggingSettings:
    """Настройки системы логирования."""

    LOG_LEVEL = "INFO"

    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

    LOG_FILE_NAME = "overconvergence.log"

    LOG_BACKUP_COUNT = 30


# ==================== ТЕСТИРОВАНИЕ ====================


class TestSettings:
    """Настройки для тестирования."""

    # Минимальная валидная конфигурация d=1
    MINIMAL_CONFIG_TEXT = """
[run]
dimension = 1
center = 0
scheme = graded
mu = all

[domain.1]
shape = disk 0 1

[task.1]
target = constant 1
compact.1 = segment 2 3
epsilon = 0.1
"""


# ==================== ПЕРЕМЕННЫЕ ОКРУЖЕНИЯ ====================

# Префикс переопределений через окружение
ENV_PREFIX = "OVC_"

# Ключ окружения -> (имя параметра, тип)
ENV_OVERRIDES = {
    "FIT_DENSITY": ("fit_density", int),
    "VALIDATION_FACTOR": ("validation_factor", int),
    "PRODUCT_CAP": ("product_cap", int),
    "VALIDATION_CAP": ("validation_cap", int),
    "MOVING_DENSITY": ("moving_density", int),
    "DEGREE_CAP": ("degree_cap", int),
}


def _load_env_file(env_path: Optional[Path]) -> Dict[str, str]:
    """
    Загружает значения из .env файла без изменения os.environ.

    Args:
        env_path: Путь к .env файлу

    Returns:
        Dict[str, str]: Переменные из .env файла
    """
    if not HAS_DOTENV or env_path is None or not Path(env_path).exists():
        return {}
    return {k: v for k, v in (dotenv_values(str(env_path)) or {}).items() if v is not None}


def get_environment_settings(env_path: Optional[Path] = DEFAULT_ENV_PATH) -> Dict[str, Any]:
    """
    Возвращает переопределения параметров сеток и бюджета.

    Приоритет: os.environ > .env. Значения из файла конфигурации
    применяются вызывающей стороной только при отсутствии переопределения.

    Args:
        env_path: Путь к .env файлу

    Returns:
        Dict: Имя параметра -> значение
    """
    env_file_values = _load_env_file(env_path)
    overrides: Dict[str, Any] = {}

    for suffix, (name, cast) in ENV_OVERRIDES.items():
        key = ENV_PREFIX + suffix
        raw = os.environ.get(key, env_file_values.get(key))
        if raw is None or raw == "":
            continue
        try:
            overrides[name] = cast(raw)
        except ValueError:
            from ..core.exceptions import ConfigError

            raise ConfigError(key, f"ожидалось число, получено {raw!r}")

    return overrides


def get_runtime_info() -> Dict[str, Any]:
    """
    Возвращает информацию о рантайме.

    Returns:
        Dict: Информация о текущем состоянии приложения
    """
    import sys
    import platform

    import numpy

    return {
        "app_name": APP_NAME,
        "app_version": APP_VERSION,
        "python_version": sys.version,
        "numpy_version": numpy.__version__,
        "platform": platform.platform(),
        "working_directory": os.getcwd(),
    }
