"""
Цели аппроксимации и их разбор из текста.

Цель - любой объект с методом values(points, order), возвращающим
∂^order цели в точках (N, d). Поддерживаются аналитические тестовые
функции, многочлены, сырые выборки и разности цели с многочленом.
"""

import csv
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Protocol, Sequence, Union

import numpy as np

from ..core.exceptions import ConfigError, DimensionError, PreconditionError, ValidationError
from .polynomial import MultiPolynomial
from .analytic import (
    AnalyticTestFunction,
    ExpFactor,
    Factor,
    OneFactor,
    PolyFactor,
    RationalFactor,
    SeparableTerm,
)

logger = logging.getLogger(__name__)

# Допуск поиска точки в сырой выборке
SAMPLE_LOOKUP_TOLERANCE = 1e-12


class Target(Protocol):
    """Протокол цели аппроксимации."""

    def values(self, points, order: Optional[Sequence[int]] = None) -> np.ndarray: ...

    def to_spec(self) -> str: ...


@dataclass(frozen=True, eq=False)
class RawSamples:
    """
    Значения цели, заданные только в точках.

    Принадлежность классу A_D(K) не проверяется: требуется явное
    утверждение пользователя (assert_ad).
    """

    points: np.ndarray
    samples: np.ndarray
    assert_ad: bool = False
    source: str = ""

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        samples = np.asarray(self.samples, dtype=complex).reshape(-1)
        if len(points) != len(samples):
            raise ValidationError("samples", f"{len(points)} точек, но {len(samples)} значений")
        if len(points) == 0:
            raise ValidationError("samples", "пустая выборка")
        if not self.assert_ad:
            raise PreconditionError(
                "assert_ad", "сырые выборки принимаются только с явным assert_ad = true"
            )
        points.setflags(write=False)
        samples.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "samples", samples)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def values(self, points, order: Optional[Sequence[int]] = None) -> np.ndarray:
        if order is not None and any(order):
            raise PreconditionError("order", "производные сырой выборки недоступны")
        points = np.asarray(points, dtype=complex).reshape(-1, self.dimension)
        out = np.empty(len(points), dtype=complex)
        for i, p in enumerate(points):
            distance = np.max(np.abs(self.points - p), axis=1)
            j = int(np.argmin(distance))
            if distance[j] > SAMPLE_LOOKUP_TOLERANCE:
                raise PreconditionError("samples", f"точка {tuple(p)} отсутствует в выборке")
            out[i] = self.samples[j]
        return out

    def to_spec(self) -> str:
        return f"samples {self.source}" if self.source else "samples"


@dataclass(frozen=True, eq=False)
class DifferenceTarget:
    """target − poly (остаток этапа построения)."""

    target: object
    poly: MultiPolynomial

    def values(self, points, order: Optional[Sequence[int]] = None) -> np.ndarray:
        return self.target.values(points, order) - self.poly.values(points, order)

    def to_spec(self) -> str:
        return f"({self.target.to_spec()}) - polynomial[{len(self.poly)}]"


def raw_sample_points(target) -> Optional[np.ndarray]:
    """Точки сырой выборки, лежащей в основе цели (None для аналитических целей)."""
    while isinstance(target, DifferenceTarget):
        target = target.target
    if isinstance(target, RawSamples):
        return target.points
    return None


# ==================== РАЗБОР ====================

_FACTOR_RE = re.compile(r"^(?P<name>[a-z]+)\s*(?:\((?P<args>.*)\))?$")


def _numbers(text: str, field_name: str) -> List[complex]:
    try:
        return [complex(token) for token in text.split()]
    except ValueError:
        raise ConfigError(field_name, f"некорректные числа: {text!r}")


def parse_factor(text: str, field_name: str) -> Factor:
    """Разбирает множитель: one | poly(c0 c1 ...) | rat(c0 ... / p1 ...) | exp(α β)."""
    match = _FACTOR_RE.match(text.strip().lower())
    if not match:
        raise ConfigError(field_name, f"некорректный множитель: {text!r}")
    name, args = match.group("name"), match.group("args") or ""

    if name == "one":
        return OneFactor()
    if name == "poly":
        coefficients = _numbers(args, field_name)
        if not coefficients:
            raise ConfigError(field_name, "poly без коэффициентов")
        return PolyFactor(tuple(coefficients))
    if name == "rat":
        if "/" not in args:
            raise ConfigError(field_name, "rat ожидает 'числитель / полюсы'")
        numerator, poles = args.split("/", 1)
        numerator_values = _numbers(numerator, field_name)
        if not numerator_values:
            raise ConfigError(field_name, "rat без числителя")
        return RationalFactor(tuple(numerator_values), tuple(_numbers(poles, field_name)))
    if name == "exp":
        values = _numbers(args, field_name)
        if len(values) not in (1, 2):
            raise ConfigError(field_name, "exp ожидает 'alpha [beta]'")
        return ExpFactor(*values)
    raise ConfigError(field_name, f"неизвестный множитель: {name!r}")


def parse_analytic(text: str, dimension: int, field_name: str = "target") -> AnalyticTestFunction:
    """Разбирает сумму разделимых членов 'scale : f_1, ..., f_d; ...'."""
    terms = []
    for n, chunk in enumerate(part for part in text.split(";") if part.strip()):
        term_field = f"{field_name}.term.{n + 1}"
        if ":" not in chunk:
            raise ConfigError(term_field, "ожидалось '<scale> : <множители>'")
        scale_text, factors_text = chunk.split(":", 1)
        scale = _numbers(scale_text, term_field)
        if len(scale) != 1:
            raise ConfigError(term_field, f"некорректный масштаб: {scale_text.strip()!r}")
        factors = [
            parse_factor(token, f"{term_field}.factor.{i + 1}")
            for i, token in enumerate(factors_text.split(","))
        ]
        if len(factors) != dimension:
            raise DimensionError(
                term_field, f"ожидалось {dimension} множителей, получено {len(factors)}"
            )
        terms.append(SeparableTerm(scale[0], tuple(factors)))
    return AnalyticTestFunction(dimension, tuple(terms))


def load_samples(path: Union[str, Path], dimension: int, assert_ad: bool) -> RawSamples:
    """
    Загружает выборку из CSV: re_1,im_1,...,re_d,im_d,re,im.

    Raises:
        ConfigError: Файл отсутствует или строки некорректны
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError("target", f"файл выборки не найден: {path}")
    points, samples = [], []
    with open(path, newline="", encoding="utf-8") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2 * dimension + 2:
                raise ConfigError(
                    "target", f"{path.name}:{line_no}: ожидалось {2 * dimension + 2} столбцов"
                )
            try:
                numbers = [float(x) for x in row]
            except ValueError:
                raise ConfigError("target", f"{path.name}:{line_no}: некорректное число")
            points.append([complex(numbers[2 * i], numbers[2 * i + 1]) for i in range(dimension)])
            samples.append(complex(numbers[-2], numbers[-1]))
    return RawSamples(np.asarray(points), np.asarray(samples), assert_ad, str(path))


def make_target(
    spec: str,
    dimension: int,
    field_name: str = "target",
    base_dir: Optional[Path] = None,
    assert_ad: bool = False,
):
    """
    Создаёт цель по текстовому описанию.

    Args:
        spec: 'zero' | 'constant <c>' | 'samples <path>' | аналитические члены
        dimension: Размерность d
        field_name: Путь к полю для сообщений
        base_dir: Каталог для относительных путей выборок
        assert_ad: Утверждение пользователя для сырых выборок

    Raises:
        ConfigError: Некорректное описание
    """
    text = spec.strip()
    if not text:
        raise ConfigError(field_name, "пустое описание цели")
    head, _, rest = text.partition(" ")
    head = head.lower()

    try:
        if head == "zero":
            return AnalyticTestFunction.zero(dimension)
        if head == "constant":
            values = _numbers(rest, field_name)
            if len(values) != 1:
                raise ConfigError(field_name, "constant ожидает одно число")
            return AnalyticTestFunction.constant(dimension, values[0])
        if head == "samples":
            path = Path(rest.strip())
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return load_samples(path, dimension, assert_ad)
        return parse_analytic(text, dimension, field_name)
    except ValidationError as e:
        if e.field.startswith(field_name):
            raise
        raise ConfigError(f"{field_name}.{e.field}", e.message.split(": ", 1)[-1])
