"""
Детерминированные сетки на компактах.

Обучающие сетки (kind='fit') и валидационные (kind='validation')
строятся с разными фазами: валидационная фаза иррациональна
относительно обучающей, поэтому сетки не пересекаются
(кроме обязательных концов отрезков).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..core.exceptions import GeometryError, DimensionError
from .compacts import Disk, Segment, Polygon, PointCloud, PlanarCompact, ProductCompact

logger = logging.getLogger(__name__)

FIT = "fit"
VALIDATION = "validation"

# Фаза валидационной сетки (золотое сечение)
VALIDATION_PHASE = (math.sqrt(5.0) - 1.0) / 2.0

# Фаза обучающей внутренней решётки многоугольника
FIT_GRID_PHASE = 0.5


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Набор точек в ℂ^d с происхождением (fit | validation)."""

    dimension: int
    points: np.ndarray
    kind: str
    density: int

    def __post_init__(self):
        points = np.array(self.points, dtype=complex).reshape(-1, self.dimension)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        if len(points) == 0:
            raise GeometryError("points", "выборка не может быть пустой")
        if self.kind not in (FIT, VALIDATION):
            raise GeometryError("kind", f"неизвестный тип выборки: {self.kind!r}")

    def __len__(self) -> int:
        return len(self.points)

    def axis(self, i: int) -> np.ndarray:
        """Координаты по оси i (0-based)."""
        return self.points[:, i]

    def union(self, other: "SampleSet") -> "SampleSet":
        """Объединение без дубликатов (порядок сохраняется)."""
        if other.dimension != self.dimension:
            raise DimensionError("samples", "объединение выборок разной размерности")
        merged = _unique_rows(np.concatenate([self.points, other.points]))
        return SampleSet(self.dimension, merged, self.kind, max(self.density, other.density))


def _unique_rows(points: np.ndarray) -> np.ndarray:
    """Удаляет точные дубликаты, сохраняя порядок первого появления."""
    seen = {}
    for idx, row in enumerate(points):
        seen.setdefault(tuple(row.tolist()), idx)
    return points[sorted(seen.values())]


def _phase(kind: str) -> float:
    return 0.0 if kind == FIT else VALIDATION_PHASE


def _disk_points(disk: Disk, density: int, kind: str) -> np.ndarray:
    """Граница из density точек плюс концентрические кольца."""
    phase = _phase(kind)
    rings = math.ceil(density / 4)
    k = np.arange(density)
    parts = [disk.center + disk.radius * np.exp(2j * np.pi * (k + phase) / density)]

    if kind == FIT:
        parts.append(np.asarray([disk.center]))
        radii_steps = [j for j in range(1, rings)]
    else:
        radii_steps = [j - 1 + phase for j in range(1, rings + 1)]

    for step in radii_steps:
        fraction = step / rings
        count = max(3, math.ceil(density * fraction))
        angles = 2.0 * np.pi * (np.arange(count) + phase) / count
        parts.append(disk.center + disk.radius * fraction * np.exp(1j * angles))

    return np.concatenate(parts)


def _segment_points(segment: Segment, density: int, kind: str) -> np.ndarray:
    """Равномерные точки, включая концы (density ≥ 2)."""
    if density == 1:
        t = np.asarray([0.5])
    elif kind == FIT:
        t = np.arange(density) / (density - 1)
    else:
        interior = (np.arange(density - 1) + VALIDATION_PHASE) / (density - 1)
        t = np.concatenate([[0.0], interior, [1.0]])
    return segment.a + t * (segment.b - segment.a)


def _polygon_points(polygon: Polygon, density: int, kind: str) -> np.ndarray:
    """Граница по длине дуги плюс внутренние узлы решётки."""
    phase = _phase(kind)
    edges = polygon.edges
    lengths = np.asarray([abs(b - a) for a, b in edges])
    cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
    perimeter = cumulative[-1]

    arclength = perimeter * (np.arange(density) + phase) / density
    boundary = []
    for s in arclength:
        i = min(int(np.searchsorted(cumulative, s, side="right")) - 1, len(edges) - 1)
        a, b = edges[i]
        t = (s - cumulative[i]) / lengths[i] if lengths[i] > 0 else 0.0
        boundary.append(a + t * (b - a))

    vertices = np.asarray(polygon.vertices)
    xmin, xmax = vertices.real.min(), vertices.real.max()
    ymin, ymax = vertices.imag.min(), vertices.imag.max()
    cells = max(2, math.ceil(density / 4))
    grid_phase = FIT_GRID_PHASE if kind == FIT else VALIDATION_PHASE
    gx = xmin + (np.arange(cells) + grid_phase) * (xmax - xmin) / cells
    gy = ymin + (np.arange(cells) + grid_phase) * (ymax - ymin) / cells
    grid = (gx[:, None] + 1j * gy[None, :]).ravel()
    interior = grid[polygon.winding_inside(grid)]

    return np.concatenate([np.asarray(boundary), interior])


def sample(compact: PlanarCompact, density: int, kind: str = FIT) -> SampleSet:
    """
    Детерминированная сетка на плоском компакте.

    Args:
        compact: Компакт
        density: Плотность (≥ 1)
        kind: 'fit' или 'validation'

    Returns:
        SampleSet: Набор точек размерности 1

    Raises:
        GeometryError: При density < 1
    """
    if int(density) != density or density < 1:
        raise GeometryError("density", f"плотность должна быть ≥ 1, получено {density}")
    density = int(density)

    if isinstance(compact, Disk):
        points = _disk_points(compact, density, kind)
    elif isinstance(compact, Segment):
        points = _segment_points(compact, density, kind)
    elif isinstance(compact, Polygon):
        points = _polygon_points(compact, density, kind)
    elif isinstance(compact, PointCloud):
        points = np.asarray(compact.points)
    else:
        raise GeometryError("compact", f"неподдерживаемый компакт: {type(compact).__name__}")

    return SampleSet(1, _unique_rows(points.reshape(-1, 1)), kind, density)


def _thin_strides(counts: Sequence[int], cap: int) -> List[int]:
    """
    Шаги прореживания по осям.

    Пока произведение размеров превышает cap, шаг оси с наибольшим
    текущим размером (при равенстве - с меньшим номером) увеличивается на 1.
    """
    strides = [1] * len(counts)

    def thinned(i: int) -> int:
        return math.ceil(counts[i] / strides[i])

    while math.prod(thinned(i) for i in range(len(counts))) > cap:
        sizes = [thinned(i) for i in range(len(counts))]
        if max(sizes) == 1:
            break
        axis = sizes.index(max(sizes))
        strides[axis] += 1
    return strides


def product_sample(
    compact: ProductCompact, density: int, cap: int, kind: str = FIT
) -> SampleSet:
    """
    Декартово произведение сеток множителей с детерминированным прореживанием.

    Args:
        compact: Произведение компактов
        density: Плотность по каждой оси
        cap: Максимальное число точек
        kind: 'fit' или 'validation'

    Returns:
        SampleSet: Точки в ℂ^d, не более cap (если cap ≥ 1)
    """
    if cap < 1:
        raise GeometryError("cap", f"cap должен быть ≥ 1, получено {cap}")

    factor_points = [sample(f, density, kind).points[:, 0] for f in compact.factors]
    strides = _thin_strides([len(p) for p in factor_points], cap)
    if any(s > 1 for s in strides):
        logger.debug(f"Прореживание произведения сеток: шаги {strides}")
    factor_points = [p[::s] for p, s in zip(factor_points, strides)]

    mesh = np.meshgrid(*factor_points, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    return SampleSet(compact.dimension, points, kind, density)


def validation_density(density: int, factor: int = 3) -> int:
    """Плотность валидационной сетки (не менее 3× обучающей)."""
    return int(density) * max(3, int(factor))
