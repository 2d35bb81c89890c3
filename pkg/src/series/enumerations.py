"""
Градуированные нумерации мультииндексов ℕ → ℕ^d.

Схемы:
    rectangular: g(a) = max a_i
    spherical:   g(a) = Σ a_i² (целое, без извлечения корня)
    graded:      g(a) = Σ a_i
    custom:      явный префикс + одна из трёх схем как продолжение

Внутри блока одинаковой градуировки порядок лексикографический
(по a_1, затем по a_2, ...).
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import EnumerationError, DimensionError

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]

RECTANGULAR = "rectangular"
SPHERICAL = "spherical"
GRADED = "graded"
CUSTOM = "custom"

BASE_SCHEMES = (RECTANGULAR, SPHERICAL, GRADED)
SCHEMES = BASE_SCHEMES + (CUSTOM,)

# Начальная граница по оси для таблицы индексов
_INITIAL_AXIS_BOUND = 8


def grading(scheme: str, a: Sequence[int]) -> int:
    """Значение градуировки мультииндекса в базовой схеме."""
    if scheme == RECTANGULAR:
        return max(a) if len(a) else 0
    if scheme == SPHERICAL:
        return sum(x * x for x in a)
    if scheme == GRADED:
        return sum(a)
    raise EnumerationError("scheme", f"неизвестная схема: {scheme!r}")


def _grading_array(scheme: str, multis: np.ndarray) -> np.ndarray:
    if scheme == RECTANGULAR:
        return multis.max(axis=1)
    if scheme == SPHERICAL:
        return (multis * multis).sum(axis=1)
    return multis.sum(axis=1)


def _complete_grade(scheme: str, axis_bound: int) -> int:
    """Наибольшая градуировка, блоки которой целиком лежат в [0, R]^d."""
    if scheme == SPHERICAL:
        return axis_bound * axis_bound
    return axis_bound


class _BaseTable:
    """Отсортированная таблица мультииндексов для базовой схемы."""

    def __init__(self, scheme: str, dimension: int):
        self.scheme = scheme
        self.dimension = dimension
        self.axis_bound = -1
        self.multis = np.zeros((0, dimension), dtype=np.int64)
        self.grades = np.zeros(0, dtype=np.int64)
        self.keys = np.zeros(0, dtype=np.int64)

    @property
    def complete_grade(self) -> int:
        return _complete_grade(self.scheme, self.axis_bound) if self.axis_bound >= 0 else -1

    def _rebuild(self, axis_bound: int) -> None:
        axes = [np.arange(axis_bound + 1, dtype=np.int64)] * self.dimension
        mesh = np.meshgrid(*axes, indexing="ij")
        multis = np.stack([m.ravel() for m in mesh], axis=1)
        grades = _grading_array(self.scheme, multis)
        keep = grades <= _complete_grade(self.scheme, axis_bound)
        multis, grades = multis[keep], grades[keep]

        # последний ключ lexsort основной: сначала g, затем a_1, a_2, ...
        keys = tuple(multis[:, i] for i in reversed(range(self.dimension))) + (grades,)
        order = np.lexsort(keys)

        self.multis = multis[order]
        self.grades = grades[order]
        self.axis_bound = axis_bound
        self.keys = self._keys_of(self.multis, self.grades)
        logger.debug(
            f"Таблица {self.scheme} d={self.dimension}: граница {axis_bound}, "
            f"{len(self.grades)} индексов"
        )

    def _grow(self) -> None:
        if self.axis_bound < 0:
            self._rebuild(_INITIAL_AXIS_BOUND)
        else:
            self._rebuild(max(self.axis_bound + 1, (self.axis_bound * 3) // 2))

    def ensure_count(self, count: int) -> None:
        while len(self.grades) < count:
            self._grow()

    def ensure_grade(self, grade: int) -> None:
        while self.complete_grade < grade:
            self._grow()

    def ensure_multi(self, a: MultiIndex) -> None:
        self.ensure_grade(grading(self.scheme, a))

    def _keys_of(self, multis: np.ndarray, grades: np.ndarray) -> np.ndarray:
        base = self.axis_bound + 1
        lex = np.zeros(len(grades), dtype=np.int64)
        for i in range(self.dimension):
            lex = lex * base + multis[:, i]
        return grades * base**self.dimension + lex

    def position(self, a: MultiIndex) -> int:
        """Позиция мультииндекса в таблице (таблица уже покрывает его блок)."""
        multi = np.asarray([a], dtype=np.int64)
        key = self._keys_of(multi, _grading_array(self.scheme, multi))[0]
        return int(np.searchsorted(self.keys, key))

    def block_bounds(self, grade: int) -> Optional[Tuple[int, int]]:
        self.ensure_grade(grade)
        start = int(np.searchsorted(self.grades, grade, side="left"))
        stop = int(np.searchsorted(self.grades, grade, side="right"))
        if start == stop:
            return None
        return start, stop - 1


_TABLES: Dict[Tuple[str, int], _BaseTable] = {}


def _table(scheme: str, dimension: int) -> _BaseTable:
    key = (scheme, dimension)
    if key not in _TABLES:
        _TABLES[key] = _BaseTable(scheme, dimension)
    return _TABLES[key]


def _min_power_base(scheme: str, grade: int) -> int:
    if scheme == SPHERICAL:
        return math.isqrt(max(grade, 0)) + 1
    return max(grade, 0) + 1


@dataclass(frozen=True)
class Enumeration:
    """
    Градуированная биекция j ↦ N_j ∈ ℕ^d.

    Для схемы custom префикс должен быть перестановкой полных первых
    блоков схемы-продолжения; все элементы префикса образуют один блок
    с градуировкой B_p (максимальная градуировка префикса), дальше
    нумерация совпадает с продолжением.
    """

    dimension: int
    scheme: str = GRADED
    prefix: Tuple[MultiIndex, ...] = ()
    fallback: Optional[str] = None

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DimensionError("dimension", f"d должно быть ≥ 1, получено {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))
        if self.scheme not in SCHEMES:
            raise EnumerationError("scheme", f"неизвестная схема: {self.scheme!r}")
        if self.scheme == CUSTOM:
            self._validate_custom()
        elif self.prefix or self.fallback:
            raise EnumerationError("prefix", "префикс допустим только для схемы custom")

    def _validate_custom(self) -> None:
        if self.fallback not in BASE_SCHEMES:
            raise EnumerationError(
                "fallback", f"продолжение должно быть одной из {BASE_SCHEMES}, получено {self.fallback!r}"
            )
        prefix = tuple(tuple(int(x) for x in a) for a in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        if not prefix:
            raise EnumerationError("prefix", "префикс custom не может быть пустым")
        for a in prefix:
            if len(a) != self.dimension:
                raise DimensionError("prefix", f"мультииндекс {a} не длины {self.dimension}")
            if any(x < 0 for x in a):
                raise EnumerationError("prefix", f"отрицательный показатель в {a}")
        if len(set(prefix)) != len(prefix):
            raise EnumerationError("prefix", "префикс содержит повторяющиеся мультииндексы")

        top = self.prefix_grade
        table = _table(self.fallback, self.dimension)
        bounds = table.block_bounds(top)
        expected = {tuple(int(x) for x in row) for row in table.multis[: bounds[1] + 1]}
        if set(prefix) != expected:
            raise EnumerationError(
                "prefix",
                f"префикс должен перечислять ровно блоки 0..{top} схемы {self.fallback} "
                f"({len(expected)} мультииндексов)",
            )

    # ---------- служебные ----------

    @property
    def base_scheme(self) -> str:
        return self.fallback if self.scheme == CUSTOM else self.scheme

    @property
    def prefix_grade(self) -> int:
        """Градуировка блока префикса (−1, если префикса нет)."""
        if not self.prefix:
            return -1
        return max(grading(self.fallback, a) for a in self.prefix)

    @cached_property
    def _prefix_positions(self) -> Dict[MultiIndex, int]:
        return {a: i for i, a in enumerate(self.prefix)}

    @property
    def _table(self) -> _BaseTable:
        return _table(self.base_scheme, self.dimension)

    def _check_multi(self, a: Sequence[int]) -> MultiIndex:
        a = tuple(int(x) for x in a)
        if len(a) != self.dimension:
            raise DimensionError("multi_index", f"ожидалась длина {self.dimension}, получено {len(a)}")
        if any(x < 0 for x in a):
            raise EnumerationError("multi_index", f"отрицательный показатель в {a}")
        return a

    @property
    def name(self) -> str:
        if self.scheme == CUSTOM:
            return f"custom/{self.fallback}"
        return self.scheme

    # ---------- градуировка ----------

    def grading(self, a: Sequence[int]) -> int:
        """Градуировка мультииндекса в этой нумерации."""
        a = self._check_multi(a)
        g = grading(self.base_scheme, a)
        if self.scheme == CUSTOM:
            return max(g, self.prefix_grade)
        return g

    def grade_of_index(self, j: int) -> int:
        """Градуировка блока, содержащего индекс j."""
        return self.grading(self.multi_of_index(j))

    # ---------- основные операции ----------

    def multi_of_index(self, j: int) -> MultiIndex:
        """j-й мультииндекс в порядке (градуировка, лексикографический)."""
        if j < 0:
            raise EnumerationError("index", f"индекс должен быть ≥ 0, получено {j}")
        if j < len(self.prefix):
            return self.prefix[j]
        table = self._table
        table.ensure_count(j + 1)
        return tuple(int(x) for x in table.multis[j])

    def index_of_multi(self, a: Sequence[int]) -> int:
        """Единственный j с multi_of_index(j) = a."""
        a = self._check_multi(a)
        if self.prefix:
            position = self._prefix_positions.get(a)
            if position is not None:
                return position
        table = self._table
        table.ensure_multi(a)
        return table.position(a)

    def multis_upto(self, count: int) -> List[MultiIndex]:
        """Первые count мультииндексов."""
        if count <= 0:
            return []
        table = self._table
        table.ensure_count(count)
        head = list(self.prefix[:count])
        rows = table.multis[len(head):count]
        return head + [tuple(int(x) for x in row) for row in rows]

    def block_range(self, grade: int) -> Optional[Tuple[int, int]]:
        """
        Диапазон индексов блока градуировки B (включительно).

        Returns:
            (start, end) или None для пустого блока
        """
        if grade < 0:
            return None
        if self.scheme == CUSTOM:
            top = self.prefix_grade
            if grade < top:
                return None
            if grade == top:
                return 0, len(self.prefix) - 1
        return self._table.block_bounds(grade)

    def prefix_end(self, grade: int) -> int:
        """Последний индекс блоков 0..B (−1, если они пусты)."""
        if grade < 0:
            return -1
        if self.scheme == CUSTOM and grade < self.prefix_grade:
            return -1
        table = self._table
        table.ensure_grade(grade)
        return int(np.searchsorted(table.grades, grade, side="right")) - 1

    def prefix_support(self, grade: int) -> List[MultiIndex]:
        """Все мультииндексы блоков 0..B в порядке нумерации."""
        return self.multis_upto(self.prefix_end(grade) + 1)

    def min_power_exceeding_block(self, axis: int, grade: int) -> int:
        """
        Наименьшее m такое, что a_{axis} ≥ m влечёт g(a) > B.

        Args:
            axis: Номер оси (1..d)
            grade: Градуировка B
        """
        if not 1 <= axis <= self.dimension:
            raise DimensionError("axis", f"ось должна быть в 1..{self.dimension}, получено {axis}")
        if self.scheme == CUSTOM:
            return _min_power_base(self.fallback, max(grade, self.prefix_grade))
        return _min_power_base(self.scheme, grade)

    # ---------- описание ----------

    def describe(self) -> Dict[str, object]:
        """Словарь-дескриптор для файлов рядов."""
        descriptor: Dict[str, object] = {"scheme": self.scheme, "dimension": self.dimension}
        if self.scheme == CUSTOM:
            descriptor["fallback"] = self.fallback
            descriptor["prefix"] = [list(a) for a in self.prefix]
        return descriptor

    @classmethod
    def from_descriptor(cls, descriptor: Dict[str, object]) -> "Enumeration":
        return cls(
            dimension=int(descriptor["dimension"]),
            scheme=str(descriptor["scheme"]),
            prefix=tuple(tuple(a) for a in descriptor.get("prefix", ())),
            fallback=descriptor.get("fallback"),
        )


def make_enumeration(
    scheme: str,
    dimension: int,
    prefix: Sequence[Sequence[int]] = (),
    fallback: Optional[str] = None,
) -> Enumeration:
    """
    Создаёт нумерацию по имени схемы.

    Raises:
        EnumerationError: Неизвестная схема или некорректный префикс
    """
    scheme = scheme.strip().lower()
    if scheme != CUSTOM:
        return Enumeration(dimension, scheme)
    return Enumeration(
        dimension, CUSTOM, tuple(tuple(a) for a in prefix), (fallback or GRADED).strip().lower()
    )
