"""
Аналитические тестовые функции замкнутого класса.

Функция - конечная сумма масштабированных разделимых произведений
∏_i φ_i(z_i), где каждый множитель φ_i - многочлен, рациональная
функция с явными полюсами, exp(αz + β) или единица.

Производные и ряды Тейлора вычисляются по множителям в замкнутой форме:
для каждой точки строятся одномерные коэффициенты Тейлора φ_i^{(k)}(ζ)/k!.
"""

import logging
from dataclasses import dataclass
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import ApproximationSettings
from ..core.exceptions import DimensionError, PoleCollisionError, ValidationError
from .enumerations import Enumeration, MultiIndex
from .polynomial import MultiPolynomial

logger = logging.getLogger(__name__)


def _format_number(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0 and not np.signbit(z.imag):
        return repr(z.real)
    return repr(z)


def _cauchy_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Усечённое произведение рядов по строкам: (N, K+1) × (N, K+1)."""
    out = np.zeros_like(left)
    order = left.shape[1] - 1
    for j in range(order + 1):
        out[:, j] = np.sum(left[:, : j + 1] * right[:, j::-1], axis=1)
    return out


# ==================== МНОЖИТЕЛИ ====================


class Factor:
    """Одномерный множитель φ(z)."""

    def taylor_rows(self, points: np.ndarray, order: int) -> np.ndarray:
        """Коэффициенты Тейлора φ^{(k)}(ζ)/k!, k = 0..order, в каждой точке ζ."""
        raise NotImplementedError

    def poles(self) -> Tuple[complex, ...]:
        return ()

    def to_spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class OneFactor(Factor):
    """Тождественная единица."""

    def taylor_rows(self, points: np.ndarray, order: int) -> np.ndarray:
        rows = np.zeros((len(points), order + 1), dtype=complex)
        rows[:, 0] = 1.0
        return rows

    def to_spec(self) -> str:
        return "one"


@dataclass(frozen=True)
class PolyFactor(Factor):
    """Многочлен Σ c_n z^n (коэффициенты по возрастанию степени)."""

    coefficients: Tuple[complex, ...]

    def __post_init__(self):
        coefficients = tuple(complex(c) for c in self.coefficients)
        if not coefficients:
            raise ValidationError("poly", "многочлен без коэффициентов")
        object.__setattr__(self, "coefficients", coefficients)

    def taylor_rows(self, points: np.ndarray, order: int) -> np.ndarray:
        rows = np.zeros((len(points), order + 1), dtype=complex)
        degree = len(self.coefficients) - 1
        for k in range(min(order, degree) + 1):
            # c_k(ζ) = Σ_{n ≥ k} C(n, k) c_n ζ^{n−k}
            shifted = [comb(n, k) * self.coefficients[n] for n in range(k, degree + 1)]
            rows[:, k] = np.polynomial.polynomial.polyval(points, shifted)
        return rows

    def to_spec(self) -> str:
        return "poly(" + " ".join(_format_number(c) for c in self.coefficients) + ")"


@dataclass(frozen=True)
class RationalFactor(Factor):
    """p(z) / ∏ (z − p_j): числитель по возрастанию степени и явные полюсы."""

    numerator: Tuple[complex, ...]
    pole_list: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(complex(c) for c in self.numerator))
        object.__setattr__(self, "pole_list", tuple(complex(p) for p in self.pole_list))
        if not self.numerator:
            raise ValidationError("rat", "пустой числитель")

    def poles(self) -> Tuple[complex, ...]:
        return self.pole_list

    def taylor_rows(self, points: np.ndarray, order: int) -> np.ndarray:
        rows = PolyFactor(self.numerator).taylor_rows(points, order)
        k = np.arange(order + 1)
        for pole in self.pole_list:
            # 1/(z − p) = Σ_k (−1)^k w^k / (ζ − p)^{k+1}
            base = 1.0 / (points - pole)
            series = ((-1.0) ** k)[None, :] * base[:, None] ** (k[None, :] + 1)
            rows = _cauchy_product(rows, series)
        return rows

    def to_spec(self) -> str:
        numerator = " ".join(_format_number(c) for c in self.numerator)
        poles = " ".join(_format_number(p) for p in self.pole_list)
        return f"rat({numerator} / {poles})"


@dataclass(frozen=True)
class ExpFactor(Factor):
    """exp(αz + β)."""

    alpha: complex
    beta: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    def taylor_rows(self, points: np.ndarray, order: int) -> np.ndarray:
        value = np.exp(self.alpha * points + self.beta)
        k = np.arange(order + 1)
        scale = np.asarray([self.alpha**j / factorial(j) for j in k], dtype=complex)
        return value[:, None] * scale[None, :]

    def to_spec(self) -> str:
        return f"exp({_format_number(self.alpha)} {_format_number(self.beta)})"


# ==================== ФУНКЦИЯ ====================


@dataclass(frozen=True)
class SeparableTerm:
    """scale · ∏_i φ_i(z_i)."""

    scale: complex
    factors: Tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "scale", complex(self.scale))
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class AnalyticTestFunction:
    """
    Сумма разделимых произведений с замкнутыми производными.

    Полюсы хранятся явно; вычисление ближе 1e-9 к полюсу запрещено.
    """

    dimension: int
    terms: Tuple[SeparableTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for i, term in enumerate(self.terms):
            if len(term.factors) != self.dimension:
                raise DimensionError(
                    f"target.term.{i + 1}",
                    f"ожидалось {self.dimension} множителей, получено {len(term.factors)}",
                )

    @classmethod
    def constant(cls, dimension: int, value: complex) -> "AnalyticTestFunction":
        return cls(dimension, (SeparableTerm(value, (OneFactor(),) * dimension),))

    @classmethod
    def zero(cls, dimension: int) -> "AnalyticTestFunction":
        return cls(dimension, ())

    def poles(self, axis: int) -> List[complex]:
        """Все полюсы по оси axis (0-based)."""
        found: List[complex] = []
        for term in self.terms:
            found.extend(term.factors[axis].poles())
        return found

    def check_poles(self, points, tolerance: Optional[float] = None) -> None:
        """
        Проверяет удалённость точек от полюсов.

        Raises:
            PoleCollisionError: Точка ближе tolerance к полюсу
        """
        tolerance = ApproximationSettings.POLE_TOLERANCE if tolerance is None else tolerance
        points = np.asarray(points, dtype=complex).reshape(-1, self.dimension)
        for axis in range(self.dimension):
            for pole in self.poles(axis):
                distance = np.abs(points[:, axis] - pole)
                if len(distance) and distance.min() <= tolerance:
                    worst = points[int(np.argmin(distance))]
                    raise PoleCollisionError(
                        "target",
                        f"точка {tuple(worst)} на расстоянии {distance.min():.3g} от полюса {pole} (ось {axis + 1})",
                    )

    def values(self, points, order: Optional[Sequence[int]] = None) -> np.ndarray:
        """∂^order функции в точках (N, d)."""
        points = np.asarray(points, dtype=complex).reshape(-1, self.dimension)
        order = tuple(order) if order is not None else (0,) * self.dimension
        if len(order) != self.dimension:
            raise DimensionError("order", f"порядок {order} не длины {self.dimension}")
        self.check_poles(points)

        total = np.zeros(len(points), dtype=complex)
        for term in self.terms:
            product = np.full(len(points), term.scale, dtype=complex)
            for axis, (factor, k) in enumerate(zip(term.factors, order)):
                rows = factor.taylor_rows(points[:, axis], k)
                product *= factorial(k) * rows[:, k]
            total += product
        return total

    def __call__(self, z: Sequence[complex]) -> complex:
        return complex(self.values(np.asarray(z, dtype=complex).reshape(1, -1))[0])

    def to_spec(self) -> str:
        """Описание в грамматике целей конфигурации."""
        if not self.terms:
            return "zero"
        parts = []
        for term in self.terms:
            factors = ", ".join(f.to_spec() for f in term.factors)
            parts.append(f"{_format_number(term.scale)} : {factors}")
        return "; ".join(parts)


# ==================== ТОЧНЫЕ РЯДЫ ====================


@dataclass(frozen=True)
class SeriesPrefix:
    """
    Коэффициенты a_{N_j}(h, ζ) для всех j ≤ last_index (блоки 0..B).

    Хранит и нулевые коэффициенты, в отличие от MultiPolynomial.
    """

    enumeration: Enumeration
    center: Tuple[complex, ...]
    grade: int
    coefficients: Tuple[complex, ...]

    @property
    def count(self) -> int:
        return len(self.coefficients)

    def coefficient_at(self, j: int) -> complex:
        if not 0 <= j < self.count:
            raise ValidationError(
                "index", f"доступно {self.count} коэффициентов, запрошен номер {j}"
            )
        return self.coefficients[j]

    def coefficient_map(self) -> Dict[MultiIndex, complex]:
        multis = self.enumeration.multis_upto(self.count)
        return dict(zip(multis, self.coefficients))

    def polynomial(self) -> MultiPolynomial:
        """Усечённый ряд как многочлен с центром ζ."""
        return MultiPolynomial(self.enumeration.dimension, self.coefficient_map(), self.center)


def exact_series(
    h: AnalyticTestFunction,
    center: Sequence[complex],
    grade: int,
    enumeration: Enumeration,
) -> SeriesPrefix:
    """
    Точные коэффициенты Тейлора h в ζ для всех a с g(a) ≤ B.

    Args:
        h: Аналитическая тестовая функция
        center: Центр ζ
        grade: Граница градуировки B
        enumeration: Нумерация

    Raises:
        PoleCollisionError: ζ ближе 1e-9 к полюсу
    """
    if enumeration.dimension != h.dimension:
        raise DimensionError("enumeration", "размерность нумерации не совпадает с функцией")
    zeta = np.asarray(center, dtype=complex).reshape(1, h.dimension)
    h.check_poles(zeta)

    multis = enumeration.prefix_support(grade)
    if not multis:
        return SeriesPrefix(enumeration, tuple(complex(c) for c in zeta[0]), grade, ())
    degrees = np.asarray(multis, dtype=np.int64).max(axis=0)

    values = np.zeros(len(multis), dtype=complex)
    index = np.asarray(multis, dtype=np.int64)
    for term in h.terms:
        product = np.full(len(multis), term.scale, dtype=complex)
        for axis, factor in enumerate(term.factors):
            rows = factor.taylor_rows(zeta[:, axis], int(degrees[axis]))[0]
            product *= rows[index[:, axis]]
        values += product

    logger.debug(f"Точный ряд: {len(multis)} коэффициентов до градуировки {grade}")
    return SeriesPrefix(enumeration, tuple(complex(c) for c in zeta[0]), grade, tuple(values))


def polynomial_target_spec(f: MultiPolynomial) -> str:
    """
    Описание многочлена в грамматике целей: каждый моном c·∏(z_i − ζ_i)^{a_i}
    записывается разделимым членом с множителями poly(...).
    """
    if f.is_zero():
        return "zero"
    parts = []
    for a, c in f.coefficients.items():
        factors = []
        for ai, zi in zip(a, f.center):
            if ai == 0:
                factors.append("one")
                continue
            coefficients = [comb(ai, k) * (-zi) ** (ai - k) for k in range(ai + 1)]
            factors.append("poly(" + " ".join(_format_number(x) for x in coefficients) + ")")
        parts.append(f"{_format_number(c)} : {', '.join(factors)}")
    return "; ".join(parts)
