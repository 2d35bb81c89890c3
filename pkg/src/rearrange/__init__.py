"""
Модуль перестановок.

Перестановки вещественных рядов с неплотными частичными суммами
и нумерации, разрушающие универсальность.
"""

from .steering import (
    LimitClass,
    TermSequence,
    Checkpoint,
    RearrangementResult,
    RearrangementSteering,
    NondensityWitness,
    classify,
    steer_rearrangement,
    check_nondensity,
    ESCAPE_ABOVE,
    ESCAPE_BELOW,
    GAP,
)
from .nonuniversal import NonuniversalResult, nonuniversal_enumeration

__all__ = [
    "LimitClass",
    "TermSequence",
    "Checkpoint",
    "RearrangementResult",
    "RearrangementSteering",
    "NondensityWitness",
    "classify",
    "steer_rearrangement",
    "check_nondensity",
    "ESCAPE_ABOVE",
    "ESCAPE_BELOW",
    "GAP",
    "NonuniversalResult",
    "nonuniversal_enumeration",
]
