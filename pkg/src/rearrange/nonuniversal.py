"""
Нумерации, не сохраняющие универсальность.

Члены A_j = a_{N_j}(f, z1) · (z2 − z1)^{N_j} переставляются так, чтобы
частичные суммы Re S_n(z2) не были плотны; перестановка задаёт префикс
новой нумерации N″.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from ..core.exceptions import DimensionError, PreconditionError, ValidationError
from ..series.enumerations import Enumeration, MultiIndex
from ..series.polynomial import MultiPolynomial, taylor_shift
from ..series.analytic import SeriesPrefix
from .steering import (
    NondensityWitness,
    RearrangementResult,
    TermSequence,
    check_nondensity,
    steer_rearrangement,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NonuniversalResult:
    """Перестановка членов и префикс нумерации N″."""

    rearrangement: RearrangementResult
    permutation: np.ndarray
    enumeration_prefix: List[MultiIndex]
    terms: np.ndarray
    trace: np.ndarray
    witness: Optional[NondensityWitness]
    grouped: bool = False


def _coefficients(
    f: Union[MultiPolynomial, SeriesPrefix],
    z1: Sequence[complex],
    enumeration: Enumeration,
    count: int,
) -> np.ndarray:
    """a_{N_j}(f, z1) для j < count."""
    if isinstance(f, SeriesPrefix):
        if tuple(complex(c) for c in f.center) != tuple(complex(c) for c in z1):
            raise PreconditionError("z1", "центр префикса ряда не совпадает с z1")
        return np.asarray([f.coefficient_at(j) for j in range(count)], dtype=complex)
    shifted = taylor_shift(f, z1)
    return np.asarray(
        [shifted.coefficient(a) for a in enumeration.multis_upto(count)], dtype=complex
    )


def _check_points(domain, z1: Sequence[complex], z2: Sequence[complex]) -> None:
    for axis in range(domain.dimension):
        if not bool(domain.contains_axis(axis, [z1[axis]])[0]):
            raise PreconditionError(f"z1.{axis + 1}", "z1 должна лежать в Ω")
    if all(bool(domain.contains_axis(axis, [z2[axis]])[0]) for axis in range(domain.dimension)):
        raise PreconditionError("z2", "z2 должна лежать вне Ω")


def nonuniversal_enumeration(
    f: Union[MultiPolynomial, SeriesPrefix],
    z1: Sequence[complex],
    z2: Sequence[complex],
    enumeration: Enumeration,
    count: int,
    domain=None,
    group_blocks: bool = False,
    tail_start: Optional[int] = None,
) -> NonuniversalResult:
    """
    Перестановка членов ряда в z2 с неплотными частичными суммами.

    Args:
        f: Многочлен или префикс точного ряда (центр z1)
        z1: Центр разложения (в Ω)
        z2: Точка вне Ω
        enumeration: Исходная нумерация
        count: Длина префикса T
        domain: DomainSpec для проверки положения z1, z2 (необязательно)
        group_blocks: Объединять члены одного блока градуировки
        tail_start: Начало хвоста для поиска свидетеля (по умолчанию половина следа)

    Raises:
        ValidationError: T больше числа доступных коэффициентов
        PreconditionError: z1 вне Ω или z2 в Ω
    """
    d = enumeration.dimension
    z1 = tuple(complex(z) for z in z1)
    z2 = tuple(complex(z) for z in z2)
    if len(z1) != d or len(z2) != d:
        raise DimensionError("points", f"z1 и z2 должны иметь длину {d}")
    f_dimension = f.dimension if isinstance(f, MultiPolynomial) else f.enumeration.dimension
    if f_dimension != d:
        raise DimensionError("f", f"размерность ряда {f_dimension}, нумерации {d}")
    if count < 1:
        raise ValidationError("count", f"T должно быть ≥ 1, получено {count}")
    if domain is not None:
        _check_points(domain, z1, z2)

    coefficients = _coefficients(f, z1, enumeration, count)
    multis = enumeration.multis_upto(count)
    exponents = np.asarray(multis, dtype=np.int64)
    powers = np.ones(count, dtype=complex)
    for axis in range(d):
        top = int(exponents[:, axis].max())
        table = np.ones(top + 1, dtype=complex)
        table[1:] = np.cumprod(np.full(top, z2[axis] - z1[axis]))
        powers *= table[exponents[:, axis]]
    terms = coefficients * powers
    real_terms = terms.real.copy()

    if group_blocks:
        grades = [enumeration.grading(a) for a in multis]
        block_ids = sorted(set(grades))
        members = {g: [j for j, gj in enumerate(grades) if gj == g] for g in block_ids}
        block_terms = np.asarray([sum(real_terms[j] for j in members[g]) for g in block_ids])
        rearrangement = steer_rearrangement(TermSequence(block_terms))
        permutation = np.asarray(
            [j for b in rearrangement.permutation for j in members[block_ids[b]]], dtype=np.int64
        )
    else:
        rearrangement = steer_rearrangement(TermSequence(real_terms))
        permutation = rearrangement.permutation

    trace = rearrangement.trace
    start = len(trace) // 2 if tail_start is None else tail_start
    witness = check_nondensity(trace, min(start, len(trace) - 1))
    logger.info(
        f"Нумерация N″: {count} членов, класс {rearrangement.limit_class.value}, "
        f"свидетель {witness.kind if witness else 'не найден'}"
    )
    return NonuniversalResult(
        rearrangement=rearrangement,
        permutation=permutation,
        enumeration_prefix=[multis[j] for j in permutation],
        terms=terms,
        trace=trace,
        witness=witness,
        grouped=group_blocks,
    )
