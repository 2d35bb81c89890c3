"""
Перестановки вещественных рядов с неплотными частичными суммами.

Алгоритм контрольных точек: перед каждым отрицательным членом −c
выпускаются неиспользованные положительные члены, пока сумма не
превысит k + c для текущей контрольной точки k; после этого все
частичные суммы остаются больше k. Случай −∞ симметричен.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ConfigError, ValidationError

logger = logging.getLogger(__name__)

# Порог малости хвоста для классификации без метки
TAIL_SMALLNESS = 1e-6


class LimitClass(str, Enum):
    """Класс предела частичных сумм перестановки."""

    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"
    FINITE = "finite"


# Метки пресетов: (Σb⁺ расходится, Σb⁻ расходится)
PRESET_TAGS = {
    "alternating_harmonic": (True, True),
    "geometric": (False, False),
    "zeros": (False, False),
}


@dataclass(frozen=True, eq=False)
class TermSequence:
    """Конечный префикс b_0..b_{T−1} с необязательной меткой пресета."""

    terms: np.ndarray
    tag: Optional[str] = None

    def __post_init__(self):
        terms = np.array(self.terms, dtype=float).reshape(-1)
        if len(terms) < 1:
            raise ValidationError("terms", "последовательность должна содержать ≥ 1 члена")
        if not np.all(np.isfinite(terms)):
            raise ValidationError("terms", "члены должны быть конечными числами")
        if self.tag is not None and self.tag not in PRESET_TAGS:
            raise ValidationError("tag", f"неизвестный пресет: {self.tag!r}")
        terms.setflags(write=False)
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    @classmethod
    def alternating_harmonic(cls, count: int) -> "TermSequence":
        """b_n = (−1)^n / (n + 1)."""
        n = np.arange(count)
        return cls(np.where(n % 2 == 0, 1.0, -1.0) / (n + 1.0), "alternating_harmonic")

    @classmethod
    def geometric(cls, count: int, ratio: float = 0.5) -> "TermSequence":
        """b_n = ratio^n, |ratio| < 1."""
        if not abs(ratio) < 1:
            raise ValidationError("ratio", "для пресета geometric нужно |ratio| < 1")
        return cls(np.asarray([ratio**n for n in range(count)]), "geometric")

    @classmethod
    def zeros(cls, count: int) -> "TermSequence":
        return cls(np.zeros(count), "zeros")

    @classmethod
    def preset(cls, name: str, count: int) -> "TermSequence":
        presets = {
            "alternating_harmonic": cls.alternating_harmonic,
            "geometric": cls.geometric,
            "zeros": cls.zeros,
        }
        if name not in presets:
            raise ConfigError("preset", f"неизвестный пресет: {name!r}")
        if count < 1:
            raise ConfigError("count", f"длина должна быть ≥ 1, получено {count}")
        return presets[name](count)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TermSequence":
        """
        Читает члены из файла: одно вещественное число на строку.

        Raises:
            ConfigError: Файл отсутствует или строка не является числом
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError("terms", f"файл членов не найден: {path}")
        values = []
        for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ConfigError("terms", f"{path.name}:{line_no}: некорректное число {line!r}")
        return cls(np.asarray(values))


@dataclass(frozen=True)
class Checkpoint:
    """После позиции position все частичные суммы > k (для −∞: < −k)."""

    k: int
    position: int


@dataclass(frozen=True, eq=False)
class RearrangementResult:
    """Перестановка, класс предела, контрольные точки и след частичных сумм."""

    permutation: np.ndarray
    limit_class: LimitClass
    trace: np.ndarray
    checkpoints: Tuple[Checkpoint, ...] = ()
    horizon: int = 0
    limit_estimate: Optional[float] = None
    extrapolated: bool = False

    def __len__(self) -> int:
        return len(self.permutation)

    def is_bijection(self) -> bool:
        return bool(
            np.array_equal(np.sort(self.permutation), np.arange(len(self.permutation)))
        )

    def verify_checkpoints(self) -> bool:
        """Проверяет свойство всех контрольных точек на следе до горизонта."""
        sign = -1.0 if self.limit_class == LimitClass.MINUS_INFINITY else 1.0
        for checkpoint in self.checkpoints:
            window = sign * self.trace[checkpoint.position:self.horizon]
            if len(window) and not np.all(window > checkpoint.k):
                return False
        return True

    def rows(self) -> List[Tuple[int, int, float]]:
        """Строки (позиция, номер члена, частичная сумма)."""
        return [
            (position, int(index), float(value))
            for position, (index, value) in enumerate(zip(self.permutation, self.trace))
        ]


def classify(terms: TermSequence) -> Tuple[LimitClass, bool]:
    """
    Класс предела по префиксу и метке.

    Returns:
        (класс, extrapolated) - extrapolated=True для входа без метки
    """
    b = terms.terms
    if terms.tag is not None:
        plus_diverges, minus_diverges = PRESET_TAGS[terms.tag]
        if plus_diverges:
            return LimitClass.PLUS_INFINITY, False
        if minus_diverges:
            return LimitClass.MINUS_INFINITY, False
        return LimitClass.FINITE, False

    total = math.fsum(np.abs(b))
    tail = math.fsum(np.abs(b[len(b) // 2:]))
    if tail <= TAIL_SMALLNESS * max(1.0, total):
        return LimitClass.FINITE, True
    positive = math.fsum(b[b > 0])
    negative = -math.fsum(b[b < 0])
    if positive >= negative:
        return LimitClass.PLUS_INFINITY, True
    return LimitClass.MINUS_INFINITY, True


class RearrangementSteering:
    """Построение перестановки по контрольным точкам."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def _steer_up(self, b: np.ndarray) -> Tuple[List[int], List[Checkpoint], int]:
        supply = [i for i in range(len(b)) if b[i] >= 0]
        demand = [i for i in range(len(b)) if b[i] < 0]
        order: List[int] = []
        checkpoints: List[Checkpoint] = []
        s = 0.0
        k = 1
        used = 0
        horizon = None

        for j in demand:
            c = -b[j]
            while s <= k + c and used < len(supply):
                s += b[supply[used]]
                order.append(supply[used])
                used += 1
            if s <= k + c:
                horizon = len(order)
                break
            order.append(j)
            s += b[j]
            checkpoints.append(Checkpoint(k, len(order) - 1))
            k += 1

        if horizon is None:
            order.extend(supply[used:])
            horizon = len(order)
        emitted = set(order)
        order.extend(i for i in range(len(b)) if i not in emitted)
        return order, checkpoints, horizon

    def steer(self, terms: TermSequence) -> RearrangementResult:
        limit_class, extrapolated = classify(terms)
        b = terms.terms

        if limit_class == LimitClass.FINITE:
            permutation = np.arange(len(b))
            trace = np.cumsum(b)
            return RearrangementResult(
                permutation=permutation,
                limit_class=limit_class,
                trace=trace,
                horizon=len(b),
                limit_estimate=math.fsum(b),
                extrapolated=extrapolated,
            )

        sign = 1.0 if limit_class == LimitClass.PLUS_INFINITY else -1.0
        order, checkpoints, horizon = self._steer_up(sign * b)
        permutation = np.asarray(order, dtype=np.int64)

        trace = np.empty(len(b))
        s = 0.0
        for position, index in enumerate(permutation):
            s += b[index]
            trace[position] = s

        self.logger.info(
            f"Перестановка {limit_class.value}: {len(checkpoints)} контрольных точек, "
            f"горизонт {horizon} из {len(b)}"
        )
        return RearrangementResult(
            permutation=permutation,
            limit_class=limit_class,
            trace=trace,
            checkpoints=tuple(checkpoints),
            horizon=horizon,
            extrapolated=extrapolated,
        )


def steer_rearrangement(terms: TermSequence) -> RearrangementResult:
    """
    Строит перестановку с неплотными частичными суммами.

    Для класса FINITE возвращается тождественная перестановка и ℓ = Σ b_n.
    """
    return RearrangementSteering().steer(terms)


# ==================== СВИДЕТЕЛЬ НЕПЛОТНОСТИ ====================

ESCAPE_ABOVE = "escape_above"
ESCAPE_BELOW = "escape_below"
GAP = "gap"


@dataclass(frozen=True)
class NondensityWitness:
    """
    Свидетель неплотности.

    escape_above: все суммы хвоста > bound; escape_below: все < bound;
    gap: интервал (low, high) длины ≥ 1 без сумм хвоста.
    """

    kind: str
    bound: Optional[float] = None
    low: Optional[float] = None
    high: Optional[float] = None
    tail_start: int = 0


def check_nondensity(
    trace: Sequence[float], tail_start: int, min_gap: float = 1.0
) -> Optional[NondensityWitness]:
    """
    Ищет уход за пределы начального диапазона или пропуск длины ≥ min_gap.

    Args:
        trace: Частичные суммы
        tail_start: Начало хвоста
        min_gap: Минимальная длина пропущенного интервала

    Returns:
        NondensityWitness или None
    """
    trace = np.asarray(trace, dtype=float)
    if len(trace) == 0:
        raise ValidationError("trace", "след частичных сумм пуст")
    if not 0 <= tail_start < len(trace):
        raise ValidationError("tail_start", f"начало хвоста должно быть в 0..{len(trace) - 1}")

    head, tail = trace[:tail_start], trace[tail_start:]
    if len(head):
        if tail.min() > head.max():
            return NondensityWitness(ESCAPE_ABOVE, bound=float(head.max()), tail_start=tail_start)
        if tail.max() < head.min():
            return NondensityWitness(ESCAPE_BELOW, bound=float(head.min()), tail_start=tail_start)

    ordered = np.sort(tail)
    if len(ordered) > 1:
        gaps = np.diff(ordered)
        j = int(np.argmax(gaps))
        if gaps[j] >= min_gap:
            return NondensityWitness(
                GAP, low=float(ordered[j]), high=float(ordered[j + 1]), tail_start=tail_start
            )
    return None
