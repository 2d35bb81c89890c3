"""
Многомерные многочлены с комплексными коэффициентами.

Многочлен хранит отображение мультииндекс → коэффициент и центр ζ:
мономы имеют вид (z − ζ)^a. Точные нули не хранятся.

Все алгоритмы (сдвиг Тейлора, вычисление, производные) работают
с плотным массивом коэффициентов по осям.
"""

import logging
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import TaylorSettings
from ..core.exceptions import DegreeLimitError, DimensionError
from .enumerations import Enumeration, MultiIndex

logger = logging.getLogger(__name__)

# Размер порции точек при векторном вычислении
_EVAL_CHUNK = 2048


def _as_center(center: Optional[Sequence[complex]], dimension: int) -> Tuple[complex, ...]:
    if center is None:
        return (0j,) * dimension
    center = tuple(complex(c) for c in np.atleast_1d(np.asarray(center, dtype=complex)))
    if len(center) != dimension:
        raise DimensionError("center", f"ожидалось {dimension} координат, получено {len(center)}")
    return center


class MultiPolynomial:
    """
    Многочлен Σ c_a (z − ζ)^a от d переменных.

    Неизменяем: все операции возвращают новый объект.
    """

    __slots__ = ("_dimension", "_coefficients", "_center")

    def __init__(
        self,
        dimension: int,
        coefficients: Optional[Mapping[Sequence[int], complex]] = None,
        center: Optional[Sequence[complex]] = None,
    ):
        if int(dimension) != dimension or dimension < 1:
            raise DimensionError("dimension", f"d должно быть ≥ 1, получено {dimension}")
        self._dimension = int(dimension)
        self._center = _as_center(center, self._dimension)

        cleaned: Dict[MultiIndex, complex] = {}
        for key, value in (coefficients or {}).items():
            a = tuple(int(x) for x in key)
            if len(a) != self._dimension:
                raise DimensionError("multi_index", f"мультииндекс {a} не длины {self._dimension}")
            if any(x < 0 for x in a):
                raise DimensionError("multi_index", f"отрицательный показатель в {a}")
            if max(a) > TaylorSettings.MAX_AXIS_DEGREE:
                raise DegreeLimitError(
                    "degree", f"степень {max(a)} превышает предел {TaylorSettings.MAX_AXIS_DEGREE}"
                )
            c = complex(value)
            if c != 0:
                cleaned[a] = cleaned.get(a, 0j) + c
                if cleaned[a] == 0:
                    del cleaned[a]
        self._coefficients = dict(sorted(cleaned.items()))

    # ---------- конструкторы ----------

    @classmethod
    def zero(cls, dimension: int, center: Optional[Sequence[complex]] = None) -> "MultiPolynomial":
        return cls(dimension, {}, center)

    @classmethod
    def constant(
        cls, dimension: int, value: complex, center: Optional[Sequence[complex]] = None
    ) -> "MultiPolynomial":
        return cls(dimension, {(0,) * dimension: value}, center)

    @classmethod
    def from_dense(cls, array: np.ndarray, center: Sequence[complex]) -> "MultiPolynomial":
        """Многочлен из плотного массива коэффициентов формы (n_1+1, ..., n_d+1)."""
        array = np.asarray(array, dtype=complex)
        nonzero = np.argwhere(array != 0)
        coefficients = {tuple(int(x) for x in idx): array[tuple(idx)] for idx in nonzero}
        return cls(array.ndim, coefficients, center)

    # ---------- свойства ----------

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def center(self) -> Tuple[complex, ...]:
        return self._center

    @property
    def coefficients(self) -> Mapping[MultiIndex, complex]:
        return MappingProxyType(self._coefficients)

    @property
    def support(self) -> List[MultiIndex]:
        return list(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def __len__(self) -> int:
        return len(self._coefficients)

    def coefficient(self, a: Sequence[int]) -> complex:
        """Коэффициент при (z − ζ)^a (0, если не хранится)."""
        return self._coefficients.get(tuple(int(x) for x in a), 0j)

    @property
    def degrees(self) -> Tuple[int, ...]:
        """Степени по осям (−1 для нулевого многочлена)."""
        if not self._coefficients:
            return (-1,) * self._dimension
        keys = np.asarray(list(self._coefficients), dtype=np.int64)
        return tuple(int(x) for x in keys.max(axis=0))

    @property
    def total_degree(self) -> int:
        if not self._coefficients:
            return -1
        return max(sum(a) for a in self._coefficients)

    def to_dense(self) -> np.ndarray:
        """Плотный массив коэффициентов (для нулевого - массив из одного нуля)."""
        shape = tuple(max(n, 0) + 1 for n in self.degrees)
        array = np.zeros(shape, dtype=complex)
        for a, c in self._coefficients.items():
            array[a] = c
        return array

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPolynomial):
            return NotImplemented
        return (
            self._dimension == other._dimension
            and self._center == other._center
            and self._coefficients == other._coefficients
        )

    def __hash__(self):
        return hash((self._dimension, self._center, tuple(self._coefficients.items())))

    def __repr__(self) -> str:
        return (
            f"MultiPolynomial(d={self._dimension}, terms={len(self._coefficients)}, "
            f"center={self._center})"
        )

    # ---------- арифметика ----------

    def _aligned(self, other: "MultiPolynomial") -> "MultiPolynomial":
        if other._dimension != self._dimension:
            raise DimensionError("dimension", "многочлены разной размерности")
        if other._center != self._center:
            return taylor_shift(other, self._center)
        return other

    def __add__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        other = self._aligned(other)
        result = dict(self._coefficients)
        for a, c in other._coefficients.items():
            result[a] = result.get(a, 0j) + c
        return MultiPolynomial(self._dimension, result, self._center)

    def __neg__(self) -> "MultiPolynomial":
        return MultiPolynomial(
            self._dimension, {a: -c for a, c in self._coefficients.items()}, self._center
        )

    def __sub__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        return self + (-other)

    def scale(self, factor: complex) -> "MultiPolynomial":
        factor = complex(factor)
        return MultiPolynomial(
            self._dimension, {a: factor * c for a, c in self._coefficients.items()}, self._center
        )

    def times_axis_power(self, axis: int, center: complex, power: int) -> "MultiPolynomial":
        """
        Умножение на (z_axis − center)^power.

        Результат центрирован в center по оси axis (0-based), остальные
        координаты центра не меняются.
        """
        if power < 0:
            raise DegreeLimitError("power", f"степень должна быть ≥ 0, получено {power}")
        new_center = list(self._center)
        new_center[axis] = complex(center)
        shifted = taylor_shift(self, new_center)
        if power == 0:
            return shifted
        coefficients = {}
        for a, c in shifted._coefficients.items():
            b = list(a)
            b[axis] += power
            coefficients[tuple(b)] = c
        return MultiPolynomial(self._dimension, coefficients, new_center)

    def select(self, enumeration: Enumeration, low: int, high: int) -> "MultiPolynomial":
        """Мономы с номерами нумерации в полуинтервале (low, high]."""
        return MultiPolynomial(
            self._dimension,
            {
                a: c
                for a, c in self._coefficients.items()
                if low < enumeration.index_of_multi(a) <= high
            },
            self._center,
        )

    def top_index(self, enumeration: Enumeration) -> int:
        """Наибольший номер монома в нумерации (−1 для нуля)."""
        if not self._coefficients:
            return -1
        return max(enumeration.index_of_multi(a) for a in self._coefficients)

    # ---------- вычисление ----------

    def evaluate_many(self, points) -> np.ndarray:
        """
        Значения в точках (N, d) вложенной схемой Горнера.

        Оси сворачиваются с последней к первой.
        """
        points = np.asarray(points, dtype=complex).reshape(-1, self._dimension)
        if not self._coefficients:
            return np.zeros(len(points), dtype=complex)

        dense = self.to_dense()
        shifted = points - np.asarray(self._center)
        out = np.empty(len(points), dtype=complex)
        for start in range(0, len(points), _EVAL_CHUNK):
            chunk = shifted[start:start + _EVAL_CHUNK]
            acc = np.broadcast_to(dense, (len(chunk),) + dense.shape)
            for axis in reversed(range(self._dimension)):
                w = chunk[:, axis].reshape((-1,) + (1,) * axis)
                n = acc.shape[-1]
                result = acc[..., n - 1]
                for k in range(n - 2, -1, -1):
                    result = result * w + acc[..., k]
                acc = result
            out[start:start + len(chunk)] = acc
        return out

    def evaluate(self, z: Sequence[complex]) -> complex:
        """Значение в одной точке."""
        return complex(self.evaluate_many(np.asarray(z, dtype=complex).reshape(1, -1))[0])

    def __call__(self, z: Sequence[complex]) -> complex:
        return self.evaluate(z)

    # Интерфейс цели для аппроксимации
    def values(self, points, order: Optional[Sequence[int]] = None) -> np.ndarray:
        """Значения ∂^order многочлена в точках."""
        if order is not None and any(order):
            return derivative(self, order).evaluate_many(points)
        return self.evaluate_many(points)

    def to_spec(self) -> str:
        """Описание цели в грамматике конфигурации (сумма разделимых мономов)."""
        from .analytic import polynomial_target_spec

        return polynomial_target_spec(self)


# ==================== ОПЕРАЦИИ ====================


def _shift_axis(array: np.ndarray, axis: int, delta: complex) -> np.ndarray:
    """Сдвиг Горнера по одной оси: p(w + δ) в базисе w."""
    moved = np.moveaxis(array.copy(), axis, 0)
    n = moved.shape[0] - 1
    for k in range(n):
        for j in range(n - 1, k - 1, -1):
            moved[j] += delta * moved[j + 1]
    return np.moveaxis(moved, 0, axis)


def taylor_shift(f: MultiPolynomial, center: Sequence[complex]) -> MultiPolynomial:
    """
    Перецентрирование: тот же многочлен в мономах (z − center)^a.

    Выполняется по осям одномерными сдвигами Горнера.
    """
    target = _as_center(center, f.dimension)
    if target == f.center or f.is_zero():
        return MultiPolynomial(f.dimension, f.coefficients, target)

    array = f.to_dense()
    for axis, (old, new) in enumerate(zip(f.center, target)):
        delta = new - old
        if delta != 0:
            array = _shift_axis(array, axis, delta)
    return MultiPolynomial.from_dense(array, target)


def taylor_coefficient(f: MultiPolynomial, center: Sequence[complex], a: Sequence[int]) -> complex:
    """a(f, ζ) = ∂^a f(ζ) / a!, вычисленный через сдвиг Тейлора."""
    return taylor_shift(f, center).coefficient(a)


def partial_sum(
    f: MultiPolynomial, center: Sequence[complex], n: int, enumeration: Enumeration
) -> MultiPolynomial:
    """
    S_N(f, ζ): мономы N_0..N_N сдвига f в ζ.

    Args:
        f: Многочлен
        center: Центр ζ
        n: Номер последнего монома N
        enumeration: Нумерация мономов
    """
    if enumeration.dimension != f.dimension:
        raise DimensionError("enumeration", "размерность нумерации не совпадает с многочленом")
    shifted = taylor_shift(f, center)
    return shifted.select(enumeration, -1, n)


def derivative(f: MultiPolynomial, order: Sequence[int]) -> MultiPolynomial:
    """∂^a f по точной рекурренте коэффициентов."""
    order = tuple(int(x) for x in order)
    if len(order) != f.dimension:
        raise DimensionError("order", f"порядок {order} не длины {f.dimension}")
    if not any(order):
        return f
    coefficients = {}
    for a, c in f.coefficients.items():
        if any(ai < ki for ai, ki in zip(a, order)):
            continue
        factor = 1
        for ai, ki in zip(a, order):
            for j in range(ki):
                factor *= ai - j
        coefficients[tuple(ai - ki for ai, ki in zip(a, order))] = c * factor
    return MultiPolynomial(f.dimension, coefficients, f.center)


def evaluate(f: MultiPolynomial, z: Sequence[complex]) -> complex:
    return f.evaluate(z)


def evaluate_many(f: MultiPolynomial, points) -> np.ndarray:
    return f.evaluate_many(points)
