"""
Описание задачи построения универсального ряда.

DomainSpec - произведение областей Ω = ∏Ω_i с центром ζ⁰;
MuSpec - допустимое множество индексов μ;
UniversalTask - один этап расписания;
BuildBudget - бюджеты сеток, степени и правило малости δ_t.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..approximation.approximators import SamplingPlan
from ..config.settings import ApproximationSettings, SamplingSettings, UniversalSettings
from ..core.exceptions import (
    ConfigError,
    DimensionError,
    MuExhaustedError,
    PreconditionError,
    ValidationError,
)
from ..geometry.compacts import Disk, PlanarCompact, ProductCompact, format_complex
from ..geometry.domains import PlanarDomain
from ..geometry.sampling import FIT, sample
from ..series.enumerations import MultiIndex

logger = logging.getLogger(__name__)


# ==================== ОБЛАСТЬ ====================


@dataclass(frozen=True)
class DomainSpec:
    """
    Ω = Ω_1 × … × Ω_d и центр разложения ζ⁰ ∈ Ω.

    Raises:
        PreconditionError: ζ⁰ не лежит строго внутри Ω
    """

    domains: Tuple[PlanarDomain, ...]
    center: Tuple[complex, ...]

    def __post_init__(self):
        domains = tuple(self.domains)
        center = tuple(complex(c) for c in self.center)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "center", center)
        if not domains:
            raise DimensionError("domain", "нужна хотя бы одна область")
        if len(center) != len(domains):
            raise DimensionError(
                "center", f"центр длины {len(center)}, областей {len(domains)}"
            )
        for i, (domain, zeta) in enumerate(zip(domains, center), start=1):
            point = np.asarray([zeta])
            inside = bool(domain.contains(point)[0])
            margin = float(domain.boundary_distance(point)[0])
            if not inside or margin <= UniversalSettings.INTERIOR_MARGIN:
                raise PreconditionError(
                    f"center.{i}",
                    f"ζ⁰_{i} = {format_complex(zeta)} должен лежать внутри Ω_{i} "
                    f"(расстояние до границы {margin:.3g})",
                )

    @property
    def dimension(self) -> int:
        return len(self.domains)

    def exhaustion(self, m: int) -> ProductCompact:
        """L_m = ∏ L_{i,m}."""
        return ProductCompact(tuple(d.exhaustion(m) for d in self.domains))

    def closure(self) -> ProductCompact:
        """Компакт Ω̄ (для неограниченных областей - усечение)."""
        return ProductCompact(tuple(d.closure() for d in self.domains))

    def contains_axis(self, axis: int, points) -> np.ndarray:
        """Принадлежность точек Ω_axis (axis 0-based)."""
        return self.domains[axis].contains(np.asarray(points, dtype=complex))

    def to_specs(self) -> Tuple[str, ...]:
        return tuple(d.to_spec() for d in self.domains)


# ==================== МНОЖЕСТВО μ ====================

MU_ALL = "all"
MU_RESIDUE = "residue"
MU_LIST = "list"
MU_PATTERN = "pattern"


@dataclass(frozen=True)
class MuSpec:
    """
    Допустимые индексы частичных сумм.

    all - все n; residue - n ≡ r (mod q); list - конечный список
    (исчерпание даёт ошибку); pattern - явные значения, затем
    все n > max(values) с n ≡ r (mod q).
    """

    kind: str = MU_ALL
    residue: int = 0
    modulus: int = 1
    values: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.kind not in (MU_ALL, MU_RESIDUE, MU_LIST, MU_PATTERN):
            raise ConfigError("mu", f"неизвестный вид μ: {self.kind!r}")
        if self.kind in (MU_RESIDUE, MU_PATTERN):
            if self.modulus < 1:
                raise ConfigError("mu", f"модуль q должен быть ≥ 1, получено {self.modulus}")
            if not 0 <= self.residue < self.modulus:
                raise ConfigError("mu", f"остаток r должен быть в 0..{self.modulus - 1}")
        if self.kind in (MU_LIST, MU_PATTERN):
            if not self.values:
                raise ConfigError("mu", "список μ не может быть пустым")
            if any(v < 0 for v in self.values):
                raise ConfigError("mu", "индексы μ должны быть ≥ 0")
            if list(self.values) != sorted(set(self.values)):
                raise ConfigError("mu", "индексы μ должны строго возрастать")

    @classmethod
    def parse(cls, text: str, field_name: str = "mu") -> "MuSpec":
        """all | residue r q | list n1 n2 ... | pattern n1 ... then r q."""
        tokens = text.split()
        if not tokens:
            raise ConfigError(field_name, "пустое описание μ")
        kind, args = tokens[0].lower(), tokens[1:]
        try:
            if kind == MU_ALL and not args:
                return cls()
            if kind == MU_RESIDUE and len(args) == 2:
                return cls(MU_RESIDUE, int(args[0]), int(args[1]))
            if kind == MU_LIST and args:
                return cls(MU_LIST, values=tuple(int(a) for a in args))
            if kind == MU_PATTERN and "then" in args:
                split = args.index("then")
                tail = args[split + 1:]
                if len(tail) != 2:
                    raise ConfigError(field_name, "после 'then' ожидается 'r q'")
                return cls(
                    MU_PATTERN,
                    int(tail[0]),
                    int(tail[1]),
                    tuple(int(a) for a in args[:split]),
                )
        except ValueError:
            raise ConfigError(field_name, f"некорректное описание μ: {text!r}")
        except ConfigError as e:
            if e.field == field_name:
                raise
            raise ConfigError(field_name, e.message.split(": ", 1)[-1])
        raise ConfigError(field_name, f"некорректное описание μ: {text!r}")

    def is_admissible(self, n: int) -> bool:
        if self.kind == MU_ALL:
            return n >= 0
        if self.kind == MU_RESIDUE:
            return n >= 0 and n % self.modulus == self.residue
        if self.kind == MU_LIST:
            return n in self.values
        if n in self.values:
            return True
        return n > self.values[-1] and n % self.modulus == self.residue

    def next_admissible(self, n: int) -> int:
        """
        Наименьший допустимый индекс ≥ n.

        Raises:
            MuExhaustedError: Конечный список μ исчерпан
        """
        n = max(int(n), 0)
        if self.kind == MU_ALL:
            return n
        if self.kind == MU_LIST:
            for v in self.values:
                if v >= n:
                    return v
            raise MuExhaustedError(f"в μ нет индексов ≥ {n} (список {list(self.values)})")
        if self.kind == MU_PATTERN:
            for v in self.values:
                if v >= n:
                    return v
            n = max(n, self.values[-1] + 1)
        return n + (self.residue - n) % self.modulus

    def to_text(self) -> str:
        if self.kind == MU_ALL:
            return MU_ALL
        if self.kind == MU_RESIDUE:
            return f"{MU_RESIDUE} {self.residue} {self.modulus}"
        values = " ".join(str(v) for v in self.values)
        if self.kind == MU_LIST:
            return f"{MU_LIST} {values}"
        return f"{MU_PATTERN} {values} then {self.residue} {self.modulus}"


# ==================== ЭТАП ====================


@dataclass(frozen=True, eq=False)
class UniversalTask:
    """
    Этап расписания: цель h на компакте K с допуском ε и уровнем L_m.

    outside_axis (1-based) включает режим одной внешней оси: только
    K_{i0} обязан лежать вне Ω_{i0}, остальные множители в подгонке
    заменяются охватывающими дисками.
    """

    target: object
    compact: ProductCompact
    epsilon: float
    level: int = UniversalSettings.DEFAULT_LEVEL
    orders: Tuple[MultiIndex, ...] = ()
    outside_axis: Optional[int] = None
    shift_axis: int = 1
    label: str = ""

    def __post_init__(self):
        field_name = f"task.{self.label}" if self.label else "task"
        d = self.compact.dimension
        object.__setattr__(self, "orders", tuple(tuple(int(x) for x in a) for a in self.orders))
        if not self.epsilon > 0:
            raise ValidationError(f"{field_name}.epsilon", f"ε должно быть > 0, получено {self.epsilon}")
        if self.level < 1:
            raise ValidationError(f"{field_name}.level", f"уровень должен быть ≥ 1, получено {self.level}")
        for a in self.orders:
            if len(a) != d:
                raise DimensionError(f"{field_name}.orders", f"порядок {a} не длины {d}")
            if any(x < 0 for x in a):
                raise ValidationError(f"{field_name}.orders", f"отрицательный порядок в {a}")
        for name in ("outside_axis", "shift_axis"):
            axis = getattr(self, name)
            if axis is not None and not 1 <= axis <= d:
                raise DimensionError(f"{field_name}.{name}", f"ось должна быть в 1..{d}, получено {axis}")

    @property
    def dimension(self) -> int:
        return self.compact.dimension

    @property
    def field_name(self) -> str:
        return f"task.{self.label}" if self.label else "task"

    @property
    def designated_axis(self) -> int:
        """Ось множителя носителя i0 (1-based)."""
        return self.outside_axis if self.outside_axis is not None else self.shift_axis

    @property
    def fit_orders(self) -> Tuple[MultiIndex, ...]:
        """Порядки производных, контролируемые на K (значения всегда)."""
        zero = (0,) * self.dimension
        return (zero,) + tuple(a for a in self.orders if a != zero)

    def check_outside(self, domain: DomainSpec, density: int = SamplingSettings.FIT_DENSITY) -> None:
        """
        Проверяет расположение K относительно Ω по точкам выборки.

        Raises:
            PreconditionError: K_i пересекает Ω_i или ζ⁰_{i0} ∈ K_{i0}
        """
        self.compact.require_dimension(domain.dimension, f"{self.field_name}.compact")
        axes = (
            [self.outside_axis - 1]
            if self.outside_axis is not None
            else list(range(self.dimension))
        )
        for axis in axes:
            factor = self.compact.factors[axis]
            points = sample(factor, density, FIT).points[:, 0]
            if np.any(domain.contains_axis(axis, points)):
                raise PreconditionError(
                    f"{self.field_name}.compact.{axis + 1}",
                    f"K_{axis + 1} пересекает Ω_{axis + 1}",
                )

        i0 = self.designated_axis - 1
        zeta = domain.center[i0]
        distance = float(self.compact.factors[i0].distance(np.asarray([zeta]))[0])
        if distance <= UniversalSettings.INTERIOR_MARGIN:
            raise PreconditionError(
                f"{self.field_name}.compact.{i0 + 1}",
                f"ζ⁰_{i0 + 1} лежит в K_{i0 + 1} (расстояние {distance:.3g})",
            )


def enclosing_disk(compacts: Sequence[PlanarCompact]) -> Disk:
    """Наименьший диск с центром 0, содержащий компакты, плюс запас."""
    radius = max(c.max_modulus() for c in compacts)
    return Disk(0j, radius + UniversalSettings.ENCLOSING_DISK_MARGIN)


# ==================== БЮДЖЕТ ====================


@dataclass(frozen=True)
class BuildBudget:
    """Бюджеты построения: сетки, предел градуировки, δ_t = ε_t · ratio^t."""

    degree_cap: int = ApproximationSettings.DEGREE_CAP
    plan: SamplingPlan = field(default_factory=SamplingPlan)
    delta_ratio: float = 0.5
    ridge: float = ApproximationSettings.RIDGE
    lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS

    def __post_init__(self):
        if self.degree_cap < 0:
            raise ValidationError("degree_cap", "предел градуировки должен быть ≥ 0")
        if not 0 < self.delta_ratio < 1:
            raise ValidationError("delta_ratio", "коэффициент δ должен быть в (0, 1)")

    def delta(self, stage: int, epsilon: float) -> float:
        """Бюджет малости блока этапа stage (1-based)."""
        return epsilon * self.delta_ratio**stage
