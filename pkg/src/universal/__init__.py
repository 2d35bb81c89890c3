"""
Модуль построения универсальных рядов.

Расписание задач, жадное построение с корректирующими блоками,
сертификат достигнутых ошибок и его проверка.
"""

from .tasks import (
    DomainSpec,
    MuSpec,
    UniversalTask,
    BuildBudget,
    enclosing_disk,
)
from .certificate import (
    StageRecord,
    StageMeasurement,
    Certificate,
    MovingCenterSpec,
    MovingCenterResult,
    VerificationReport,
    CertificateVerifier,
    measure_stage,
    verify_certificate,
    limit_seminorms,
    order_label,
    parse_order_label,
)
from .builder import (
    UniversalSeries,
    UniversalBuilder,
    CorrectionBlock,
    build_universal,
    correction_block,
)

__all__ = [
    "DomainSpec",
    "MuSpec",
    "UniversalTask",
    "BuildBudget",
    "enclosing_disk",
    "StageRecord",
    "StageMeasurement",
    "Certificate",
    "MovingCenterSpec",
    "MovingCenterResult",
    "VerificationReport",
    "CertificateVerifier",
    "measure_stage",
    "verify_certificate",
    "limit_seminorms",
    "order_label",
    "parse_order_label",
    "UniversalSeries",
    "UniversalBuilder",
    "CorrectionBlock",
    "build_universal",
    "correction_block",
]
