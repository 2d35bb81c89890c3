"""
Файл ряда: коэффициенты, расписание и сертификат в одном JSON-документе.

Все вещественные числа записываются через float.hex, поэтому
load_series(save_series(s)) воспроизводит ряд бит в бит.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from ..config.settings import APP_VERSION, SERIES_FORMAT_VERSION
from ..core.exceptions import OverconvergenceError, SeriesFileError
from ..geometry.compacts import ProductCompact, make_compact
from ..geometry.domains import make_domain
from ..series.enumerations import Enumeration
from ..series.polynomial import MultiPolynomial
from ..series.targets import RawSamples, make_target
from ..universal.builder import UniversalSeries
from ..universal.certificate import Certificate, StageRecord
from ..universal.tasks import DomainSpec, MuSpec, UniversalTask

logger = logging.getLogger(__name__)

FORMAT_NAME = "overconvergence-series"


# ==================== ЧИСЛА ====================


def _hex(x: float) -> str:
    return float(x).hex()


def _unhex(text: Any, field: str) -> float:
    if not isinstance(text, str):
        raise SeriesFileError(field, f"ожидалась hex-строка, получено {text!r}")
    try:
        return float.fromhex(text)
    except ValueError:
        raise SeriesFileError(field, f"некорректное число {text!r}")


def _complex_pair(z: complex) -> List[str]:
    return [_hex(z.real), _hex(z.imag)]


def _from_pair(pair: Any, field: str) -> complex:
    if not isinstance(pair, list) or len(pair) != 2:
        raise SeriesFileError(field, "ожидалась пара [re, im]")
    return complex(_unhex(pair[0], f"{field}.re"), _unhex(pair[1], f"{field}.im"))


def _require(data: Dict[str, Any], key: str, kind, field: str):
    if not isinstance(data, dict) or key not in data:
        raise SeriesFileError(field, f"отсутствует поле {key!r}")
    value = data[key]
    if kind is int and isinstance(value, bool):
        raise SeriesFileError(f"{field}.{key}", "ожидалось целое число")
    if not isinstance(value, kind):
        raise SeriesFileError(f"{field}.{key}", f"неверный тип {type(value).__name__}")
    return value


# ==================== ЗАПИСЬ ====================


def _target_spec(target) -> str:
    if isinstance(target, RawSamples) and target.source:
        return f"samples {Path(target.source).resolve()}"
    return target.to_spec()


def _task_to_dict(task: UniversalTask) -> Dict[str, Any]:
    return {
        "label": task.label,
        "target": _target_spec(task.target),
        "assert_ad": bool(getattr(task.target, "assert_ad", False)),
        "compact": task.compact.to_specs(),
        "epsilon": _hex(task.epsilon),
        "level": task.level,
        "orders": [list(a) for a in task.orders],
        "outside_axis": task.outside_axis,
        "shift_axis": task.shift_axis,
    }


def _stage_to_dict(record: StageRecord) -> Dict[str, Any]:
    return {
        "stage": record.stage,
        "task_label": record.task_label,
        "lambda": record.lam,
        "epsilon": _hex(record.epsilon),
        "delta": _hex(record.delta),
        "level": record.level,
        "err_K": _hex(record.err_k),
        "err_L_block": _hex(record.err_l_block),
        "err_L_limit": _hex(record.err_l_limit),
        "degree": record.degree,
        "order_errors": {label: _hex(v) for label, v in record.order_errors.items()},
        "axis": record.axis,
        "power": record.power,
        "grading_bound": record.grading_bound,
        "support_size": record.support_size,
    }


def _certificate_to_dict(certificate: Certificate) -> Dict[str, Any]:
    return {
        "enumeration": certificate.enumeration,
        "fit_density": certificate.fit_density,
        "validation_factor": certificate.validation_factor,
        "product_cap": certificate.product_cap,
        "validation_cap": certificate.validation_cap,
        "degree_cap": certificate.degree_cap,
        "delta_ratio": _hex(certificate.delta_ratio),
        "tool_version": certificate.tool_version,
        "stages": [_stage_to_dict(r) for r in certificate.stages],
    }


def series_to_dict(series: UniversalSeries) -> Dict[str, Any]:
    """Документ файла ряда."""
    enumeration = series.enumeration
    coefficients = sorted(
        (enumeration.index_of_multi(a), a, c) for a, c in series.polynomial.coefficients.items()
    )
    return {
        "format": FORMAT_NAME,
        "version": SERIES_FORMAT_VERSION,
        "dimension": series.dimension,
        "enumeration": enumeration.describe(),
        "center": [_complex_pair(z) for z in series.domain.center],
        "domain": list(series.domain.to_specs()),
        "mu": series.mu.to_text(),
        "coefficients": [
            {"index": j, "multi": list(a), "re": _hex(c.real), "im": _hex(c.imag)}
            for j, a, c in coefficients
        ],
        "tasks": [_task_to_dict(t) for t in series.tasks],
        "certificate": _certificate_to_dict(series.certificate),
        "metadata": {
            "tool_version": APP_VERSION,
            "fit_density": series.certificate.fit_density,
            "validation_factor": series.certificate.validation_factor,
        },
    }


def series_to_text(series: UniversalSeries) -> str:
    return json.dumps(series_to_dict(series), indent=2, ensure_ascii=False) + "\n"


def save_series(series: UniversalSeries, path: Union[str, Path]) -> Path:
    """
    Сохраняет ряд с сертификатом.

    Returns:
        Path: Путь к записанному файлу
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(series_to_text(series), encoding="utf-8")
    logger.info(f"Ряд сохранён: {path} ({len(series.polynomial)} коэффициентов)")
    return path


# ==================== ЧТЕНИЕ ====================


def _load_task(data: Dict[str, Any], n: int, dimension: int, base_dir: Path) -> UniversalTask:
    field = f"tasks.{n}"
    specs = _require(data, "compact", list, field)
    compact = ProductCompact(
        tuple(make_compact(s, f"{field}.compact.{i + 1}") for i, s in enumerate(specs))
    )
    target = make_target(
        _require(data, "target", str, field),
        dimension,
        f"{field}.target",
        base_dir,
        bool(data.get("assert_ad", False)),
    )
    outside = data.get("outside_axis")
    return UniversalTask(
        target=target,
        compact=compact,
        epsilon=_unhex(data.get("epsilon"), f"{field}.epsilon"),
        level=_require(data, "level", int, field),
        orders=tuple(tuple(a) for a in _require(data, "orders", list, field)),
        outside_axis=int(outside) if outside is not None else None,
        shift_axis=_require(data, "shift_axis", int, field),
        label=_require(data, "label", str, field),
    )


def _load_stage(data: Dict[str, Any], n: int) -> StageRecord:
    field = f"certificate.stages.{n}"
    order_errors = _require(data, "order_errors", dict, field)
    return StageRecord(
        stage=_require(data, "stage", int, field),
        task_label=_require(data, "task_label", str, field),
        lam=_require(data, "lambda", int, field),
        epsilon=_unhex(data.get("epsilon"), f"{field}.epsilon"),
        delta=_unhex(data.get("delta"), f"{field}.delta"),
        level=_require(data, "level", int, field),
        err_k=_unhex(data.get("err_K"), f"{field}.err_K"),
        err_l_block=_unhex(data.get("err_L_block"), f"{field}.err_L_block"),
        err_l_limit=_unhex(data.get("err_L_limit"), f"{field}.err_L_limit"),
        degree=_require(data, "degree", int, field),
        order_errors={
            str(k): _unhex(v, f"{field}.order_errors.{k}") for k, v in order_errors.items()
        },
        axis=_require(data, "axis", int, field),
        power=_require(data, "power", int, field),
        grading_bound=_require(data, "grading_bound", int, field),
        support_size=_require(data, "support_size", int, field),
    )


def _load_certificate(data: Dict[str, Any]) -> Certificate:
    field = "certificate"
    stages = _require(data, "stages", list, field)
    return Certificate(
        stages=tuple(_load_stage(s, n + 1) for n, s in enumerate(stages)),
        enumeration=_require(data, "enumeration", str, field),
        fit_density=_require(data, "fit_density", int, field),
        validation_factor=_require(data, "validation_factor", int, field),
        product_cap=_require(data, "product_cap", int, field),
        validation_cap=_require(data, "validation_cap", int, field),
        degree_cap=_require(data, "degree_cap", int, field),
        delta_ratio=_unhex(data.get("delta_ratio"), f"{field}.delta_ratio"),
        tool_version=_require(data, "tool_version", str, field),
    )


def series_from_dict(data: Dict[str, Any], base_dir: Path = Path(".")) -> UniversalSeries:
    """
    Восстанавливает ряд из документа.

    Raises:
        SeriesFileError: Версия не совпадает или данные повреждены
    """
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise SeriesFileError("format", "это не файл ряда")
    version = data.get("version")
    if version != SERIES_FORMAT_VERSION:
        raise SeriesFileError(
            "version", f"версия формата {version!r}, поддерживается {SERIES_FORMAT_VERSION}"
        )

    try:
        dimension = _require(data, "dimension", int, "series")
        enumeration = Enumeration.from_descriptor(_require(data, "enumeration", dict, "series"))
        if enumeration.dimension != dimension:
            raise SeriesFileError("enumeration", "размерность нумерации не совпадает")

        centers = _require(data, "center", list, "series")
        center = tuple(_from_pair(p, f"center.{i + 1}") for i, p in enumerate(centers))
        domains = tuple(
            make_domain(s, f"domain.{i + 1}")
            for i, s in enumerate(_require(data, "domain", list, "series"))
        )
        domain = DomainSpec(domains, center)
        mu = MuSpec.parse(_require(data, "mu", str, "series"))

        coefficients = {}
        for n, record in enumerate(_require(data, "coefficients", list, "series"), start=1):
            field = f"coefficients.{n}"
            multi = tuple(_require(record, "multi", list, field))
            index = _require(record, "index", int, field)
            if enumeration.index_of_multi(multi) != index:
                raise SeriesFileError(field, f"номер {index} не соответствует {multi}")
            coefficients[multi] = complex(
                _unhex(record.get("re"), f"{field}.re"), _unhex(record.get("im"), f"{field}.im")
            )
        polynomial = MultiPolynomial(dimension, coefficients, center)

        tasks = tuple(
            _load_task(t, n + 1, dimension, base_dir)
            for n, t in enumerate(_require(data, "tasks", list, "series"))
        )
        certificate = _load_certificate(_require(data, "certificate", dict, "series"))
    except SeriesFileError:
        raise
    except OverconvergenceError as e:
        raise SeriesFileError("series", f"некорректные данные: {e.message}")
    except (TypeError, ValueError, KeyError) as e:
        raise SeriesFileError("series", f"некорректные данные: {e}")

    if len(certificate.stages) != len(tasks):
        raise SeriesFileError("certificate", "число этапов не совпадает с расписанием")
    return UniversalSeries(polynomial, enumeration, domain, mu, tasks, certificate)


def load_series(path: Union[str, Path]) -> UniversalSeries:
    """
    Загружает ряд из файла.

    Raises:
        SeriesFileError: Файл отсутствует, обрезан, повреждён или другой версии
    """
    path = Path(path)
    if not path.exists():
        raise SeriesFileError("series", f"файл не найден: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SeriesFileError("series", f"файл повреждён или обрезан: {e.msg} (строка {e.lineno})")
    series = series_from_dict(data, path.parent)
    logger.info(f"Ряд загружен: {path} ({len(series.polynomial)} коэффициентов)")
    return series


__all__ = [
    "FORMAT_NAME",
    "load_series",
    "save_series",
    "series_from_dict",
    "series_to_dict",
    "series_to_text",
]
