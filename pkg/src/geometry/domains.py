"""
Односвязные плоские области Ω_i и их исчерпания компактами L_{i,m}.

Поддерживаются: открытый диск, внутренность многоугольника,
полуполоса {Re z > x0, y_low < Im z < y_high}.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ..core.exceptions import GeometryError
from .compacts import (
    Disk,
    Polygon,
    PlanarCompact,
    format_complex,
    make_compact,
    parse_complex,
)

logger = logging.getLogger(__name__)


def exhaustion_factor(m: int) -> float:
    """Коэффициент сжатия уровня m: 1 − 1/(m+1)."""
    if m < 1:
        raise GeometryError("level", f"уровень исчерпания должен быть ≥ 1, получено {m}")
    return 1.0 - 1.0 / (m + 1)


class PlanarDomain:
    """Базовый класс открытой области Ω ⊂ ℂ."""

    kind: str = "domain"

    def contains(self, points) -> np.ndarray:
        """Принадлежность открытой области (векторизовано)."""
        raise NotImplementedError

    def boundary_distance(self, points) -> np.ndarray:
        """Расстояние до границы ∂Ω."""
        raise NotImplementedError

    def interior_distance(self, points) -> np.ndarray:
        """Расстояние до границы для точек внутри, 0 для точек снаружи."""
        points = np.asarray(points, dtype=complex)
        return np.where(self.contains(points), self.boundary_distance(points), 0.0)

    def exhaustion(self, m: int) -> PlanarCompact:
        """Компакт L_m ⊂ Ω уровня m (возрастает по m)."""
        raise NotImplementedError

    def closure(self) -> PlanarCompact:
        """Компакт, приближающий замыкание Ω̄ (для полуполосы - усечение)."""
        raise NotImplementedError

    def to_spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class DiskDomain(PlanarDomain):
    """Открытый диск {|z − center| < radius}."""

    center: complex
    radius: float
    kind: str = field(default="disk", init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise GeometryError("radius", f"радиус должен быть > 0, получено {self.radius}")

    def contains(self, points) -> np.ndarray:
        return np.abs(np.asarray(points, dtype=complex) - self.center) < self.radius

    def boundary_distance(self, points) -> np.ndarray:
        return np.abs(np.abs(np.asarray(points, dtype=complex) - self.center) - self.radius)

    def exhaustion(self, m: int) -> PlanarCompact:
        return Disk(self.center, exhaustion_factor(m) * self.radius)

    def closure(self) -> PlanarCompact:
        return Disk(self.center, self.radius)

    def to_spec(self) -> str:
        return f"disk {format_complex(self.center)} {self.radius!r}"


@dataclass(frozen=True)
class PolygonDomain(PlanarDomain):
    """Внутренность многоугольника."""

    vertices: Tuple[complex, ...]
    kind: str = field(default="polygon", init=False)

    def __post_init__(self):
        polygon = Polygon(tuple(self.vertices))
        object.__setattr__(self, "vertices", polygon.vertices)

    @property
    def polygon(self) -> Polygon:
        return Polygon(self.vertices)

    def contains(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        polygon = self.polygon
        return polygon.winding_inside(points) & (polygon.boundary_distance(points) > 0)

    def boundary_distance(self, points) -> np.ndarray:
        return self.polygon.boundary_distance(points)

    def exhaustion(self, m: int) -> PlanarCompact:
        polygon = self.polygon
        c = polygon.centroid()
        factor = exhaustion_factor(m)
        return Polygon(tuple(c + factor * (v - c) for v in polygon.vertices))

    def closure(self) -> PlanarCompact:
        return self.polygon

    def to_spec(self) -> str:
        return "polygon " + " ".join(format_complex(v) for v in self.vertices)


@dataclass(frozen=True)
class HalfStripDomain(PlanarDomain):
    """Полуполоса {Re z > x0, y_low < Im z < y_high}."""

    x0: float
    y_low: float
    y_high: float
    kind: str = field(default="halfstrip", init=False)

    def __post_init__(self):
        for name in ("x0", "y_low", "y_high"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.y_low < self.y_high:
            raise GeometryError("y_high", "ширина полуполосы должна быть > 0")

    @property
    def width(self) -> float:
        return self.y_high - self.y_low

    def contains(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        return (
            (points.real > self.x0)
            & (points.imag > self.y_low)
            & (points.imag < self.y_high)
        )

    def boundary_distance(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        x, y = points.real, points.imag
        inside_dist = np.minimum.reduce(
            [np.abs(x - self.x0), np.abs(y - self.y_low), np.abs(y - self.y_high)]
        )
        # снаружи: расстояние до замкнутого множества границы
        dx = np.maximum(self.x0 - x, 0.0)
        dy = np.maximum(np.maximum(self.y_low - y, y - self.y_high), 0.0)
        outside = np.hypot(dx, dy)
        return np.where(self.contains(points), inside_dist, outside)

    def exhaustion(self, m: int) -> PlanarCompact:
        if m < 1:
            raise GeometryError("level", f"уровень исчерпания должен быть ≥ 1, получено {m}")
        inset = self.width / (2.0 * (m + 1))
        x_left = self.x0 + inset
        x_right = self.x0 + (m + 1) * self.width
        y_low, y_high = self.y_low + inset, self.y_high - inset
        return Polygon(
            (
                complex(x_left, y_low),
                complex(x_right, y_low),
                complex(x_right, y_high),
                complex(x_left, y_high),
            )
        )

    def closure(self) -> PlanarCompact:
        # Ω̄ неограничена; берётся прямоугольник длины 4·ширина
        x_right = self.x0 + 4.0 * self.width
        return Polygon(
            (
                complex(self.x0, self.y_low),
                complex(x_right, self.y_low),
                complex(x_right, self.y_high),
                complex(self.x0, self.y_high),
            )
        )

    def to_spec(self) -> str:
        return f"halfstrip {self.x0!r} {self.y_low!r} {self.y_high!r}"


def make_domain(spec: str, field_name: str = "domain") -> PlanarDomain:
    """
    Создаёт область по текстовому описанию.

    Args:
        spec: 'disk <c> <r>' | 'polygon <z1> ...' | 'halfstrip <x0> <y_low> <y_high>'
        field_name: Путь к полю для сообщений об ошибке

    Raises:
        GeometryError: При некорректной геометрии
    """
    tokens = spec.split()
    if not tokens:
        raise GeometryError(field_name, "пустое описание области")
    shape = tokens[0].lower()

    if shape == "disk":
        compact = make_compact(spec, field_name)
        return DiskDomain(compact.center, compact.radius)
    if shape == "polygon":
        compact = make_compact(spec, field_name)
        return PolygonDomain(compact.vertices)
    if shape == "halfstrip":
        if len(tokens) != 4:
            raise GeometryError(field_name, "halfstrip ожидает 3 аргумента")
        values = []
        for name, token in zip(("x0", "y_low", "y_high"), tokens[1:]):
            value = parse_complex(token, f"{field_name}.{name}")
            if value.imag != 0:
                raise GeometryError(f"{field_name}.{name}", "ожидалось вещественное число")
            values.append(value.real)
        try:
            return HalfStripDomain(*values)
        except GeometryError as e:
            raise GeometryError(f"{field_name}.{e.field}", e.message.split(": ", 1)[-1])

    raise GeometryError(field_name, f"неизвестная область: {shape!r}")
