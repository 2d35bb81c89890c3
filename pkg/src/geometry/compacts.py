"""
Компакты на плоскости и их произведения.

Поддерживаемые формы: диск, отрезок, многоугольник, облако точек.
Связность дополнения не вычисляется - это утверждение пользователя
(флаг connected_complement_asserted).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import GeometryError, DimensionError

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, float, int]


def format_complex(z: ComplexLike) -> str:
    """Форматирует комплексное число без потерь (кратчайший round-trip)."""
    z = complex(z)
    if z.imag == 0.0 and not np.signbit(z.imag):
        return repr(z.real)
    return repr(z)


def parse_complex(token: str, field_name: str = "value") -> complex:
    """Разбирает комплексный литерал в синтаксисе Python."""
    try:
        return complex(token.strip())
    except ValueError:
        raise GeometryError(field_name, f"некорректное комплексное число: {token!r}")


def _segment_distance(points: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Расстояния от точек до отрезка [a, b]."""
    direction = b - a
    t = ((points - a) * np.conj(direction)).real / (abs(direction) ** 2)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(points - (a + t * direction))


class PlanarCompact:
    """Базовый класс компакта K ⊂ ℂ."""

    kind: str = "compact"

    def distance(self, points) -> np.ndarray:
        """Расстояния от точек до компакта (векторизовано)."""
        raise NotImplementedError

    def contains(self, p: ComplexLike, tol: float = 0.0) -> bool:
        """True, если dist(p, K) ≤ tol."""
        return bool(self.distance(np.asarray([complex(p)]))[0] <= tol)

    def contains_all(self, points: Sequence[complex], tol: float = 0.0) -> np.ndarray:
        """Векторная проверка принадлежности."""
        return self.distance(np.asarray(points, dtype=complex)) <= tol

    def bounding_points(self) -> np.ndarray:
        """Характерные точки формы (для охватывающих дисков)."""
        raise NotImplementedError

    def max_modulus(self) -> float:
        """max |z| по компакту."""
        raise NotImplementedError

    def to_spec(self) -> str:
        """Текстовое описание в грамматике конфигурации."""
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(PlanarCompact):
    """Замкнутый диск {|z − center| ≤ radius}."""

    center: complex
    radius: float
    connected_complement_asserted: bool = True
    kind: str = field(default="disk", init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise GeometryError("radius", f"радиус должен быть > 0, получено {self.radius}")

    def distance(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        return np.maximum(np.abs(points - self.center) - self.radius, 0.0)

    def bounding_points(self) -> np.ndarray:
        angles = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
        return self.center + self.radius * np.exp(1j * angles)

    def max_modulus(self) -> float:
        return abs(self.center) + self.radius

    def to_spec(self) -> str:
        return f"disk {format_complex(self.center)} {self.radius!r}"


@dataclass(frozen=True)
class Segment(PlanarCompact):
    """Отрезок [a, b]."""

    a: complex
    b: complex
    connected_complement_asserted: bool = True
    kind: str = field(default="segment", init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == self.b:
            raise GeometryError("b", "концы отрезка совпадают")

    def distance(self, points) -> np.ndarray:
        return _segment_distance(np.asarray(points, dtype=complex), self.a, self.b)

    def bounding_points(self) -> np.ndarray:
        return np.asarray([self.a, self.b])

    def max_modulus(self) -> float:
        return max(abs(self.a), abs(self.b))

    def to_spec(self) -> str:
        return f"segment {format_complex(self.a)} {format_complex(self.b)}"


@dataclass(frozen=True)
class Polygon(PlanarCompact):
    """
    Замкнутый многоугольник (граница и внутренность).

    Отсутствие самопересечений не проверяется: это ответственность пользователя.
    """

    vertices: Tuple[complex, ...]
    connected_complement_asserted: bool = True
    kind: str = field(default="polygon", init=False)

    def __post_init__(self):
        vertices = tuple(complex(v) for v in self.vertices)
        if len(vertices) >= 2 and vertices[0] == vertices[-1]:
            vertices = vertices[:-1]
        object.__setattr__(self, "vertices", vertices)
        if len(vertices) < 3:
            raise GeometryError("vertices", "многоугольнику нужно ≥3 вершин")

    @property
    def edges(self) -> List[Tuple[complex, complex]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def winding_inside(self, points) -> np.ndarray:
        """Ненулевое число вращения (точки строго внутри или на границе)."""
        points = np.asarray(points, dtype=complex)
        x, y = points.real, points.imag
        winding = np.zeros(points.shape, dtype=int)
        for a, b in self.edges:
            upward = (a.imag <= y) & (b.imag > y)
            downward = (a.imag > y) & (b.imag <= y)
            cross = (b.real - a.real) * (y - a.imag) - (x - a.real) * (b.imag - a.imag)
            winding += np.where(upward & (cross > 0), 1, 0)
            winding -= np.where(downward & (cross < 0), 1, 0)
        return winding != 0

    def boundary_distance(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        return np.min(
            np.stack([_segment_distance(points, a, b) for a, b in self.edges]), axis=0
        )

    def distance(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        return np.where(self.winding_inside(points), 0.0, self.boundary_distance(points))

    @property
    def perimeter(self) -> float:
        return float(sum(abs(b - a) for a, b in self.edges))

    def centroid(self) -> complex:
        """Центр масс многоугольника (площадная формула)."""
        v = np.asarray(self.vertices)
        x, y = v.real, v.imag
        x1, y1 = np.roll(x, -1), np.roll(y, -1)
        cross = x * y1 - x1 * y
        area = cross.sum() / 2.0
        if abs(area) < 1e-300:
            return complex(v.mean())
        cx = ((x + x1) * cross).sum() / (6.0 * area)
        cy = ((y + y1) * cross).sum() / (6.0 * area)
        return complex(cx, cy)

    def bounding_points(self) -> np.ndarray:
        return np.asarray(self.vertices)

    def max_modulus(self) -> float:
        return max(abs(v) for v in self.vertices)

    def to_spec(self) -> str:
        return "polygon " + " ".join(format_complex(v) for v in self.vertices)


@dataclass(frozen=True)
class PointCloud(PlanarCompact):
    """Конечное множество точек."""

    points: Tuple[complex, ...]
    connected_complement_asserted: bool = True
    kind: str = field(default="points", init=False)

    def __post_init__(self):
        points = tuple(complex(p) for p in self.points)
        object.__setattr__(self, "points", points)
        if not points:
            raise GeometryError("points", "облако точек не может быть пустым")

    def distance(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        cloud = np.asarray(self.points)
        return np.min(np.abs(points[..., None] - cloud), axis=-1)

    def bounding_points(self) -> np.ndarray:
        return np.asarray(self.points)

    def max_modulus(self) -> float:
        return max(abs(p) for p in self.points)

    def to_spec(self) -> str:
        return "points " + " ".join(format_complex(p) for p in self.points)


@dataclass(frozen=True)
class ProductCompact:
    """Произведение K = K_1 × … × K_d."""

    factors: Tuple[PlanarCompact, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if len(factors) < 1:
            raise DimensionError("factors", "произведение должно иметь d ≥ 1 множителей")

    @property
    def dimension(self) -> int:
        return len(self.factors)

    def require_dimension(self, d: int, field_name: str = "compact") -> None:
        """Проверяет согласованность размерности."""
        if self.dimension != d:
            raise DimensionError(
                field_name, f"ожидалось {d} множителей, получено {self.dimension}"
            )

    def replace_factor(self, axis: int, factor: PlanarCompact) -> "ProductCompact":
        factors = list(self.factors)
        factors[axis] = factor
        return ProductCompact(tuple(factors))

    def to_specs(self) -> List[str]:
        return [f.to_spec() for f in self.factors]


_SHAPE_ARITY = {"disk": 2, "segment": 2}


def make_compact(spec: str, field_name: str = "compact") -> PlanarCompact:
    """
    Создаёт валидированный компакт по текстовому описанию.

    Args:
        spec: 'disk <c> <r>' | 'segment <a> <b>' | 'polygon <z1> <z2> <z3> ...' | 'points <z1> ...'
        field_name: Путь к полю для сообщений об ошибке

    Returns:
        PlanarCompact: Валидированный компакт

    Raises:
        GeometryError: При вырожденной или некорректной геометрии
    """
    tokens = spec.split()
    if not tokens:
        raise GeometryError(field_name, "пустое описание формы")

    shape, args = tokens[0].lower(), tokens[1:]
    if shape in _SHAPE_ARITY and len(args) != _SHAPE_ARITY[shape]:
        raise GeometryError(
            field_name, f"форма {shape} ожидает {_SHAPE_ARITY[shape]} аргумента"
        )

    try:
        if shape == "disk":
            radius = parse_complex(args[1], f"{field_name}.radius")
            if radius.imag != 0:
                raise GeometryError(f"{field_name}.radius", "радиус должен быть вещественным")
            return Disk(parse_complex(args[0], f"{field_name}.center"), radius.real)
        if shape == "segment":
            return Segment(
                parse_complex(args[0], f"{field_name}.a"),
                parse_complex(args[1], f"{field_name}.b"),
            )
        if shape == "polygon":
            return Polygon(tuple(parse_complex(t, f"{field_name}.vertices") for t in args))
        if shape == "points":
            return PointCloud(tuple(parse_complex(t, f"{field_name}.points") for t in args))
    except GeometryError as e:
        if e.field.startswith(field_name):
            raise
        raise GeometryError(f"{field_name}.{e.field}", e.message.split(": ", 1)[-1])

    raise GeometryError(field_name, f"неизвестная форма: {shape!r}")
