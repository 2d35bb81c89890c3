"""
Модуль плоских множеств.

Компакты на плоскости, их произведения, области Ω_i с исчерпаниями
и детерминированные сетки для подгонки и валидации.
"""

from .compacts import (
    PlanarCompact,
    Disk,
    Segment,
    Polygon,
    PointCloud,
    ProductCompact,
    make_compact,
    format_complex,
    parse_complex,
)
from .domains import (
    PlanarDomain,
    DiskDomain,
    PolygonDomain,
    HalfStripDomain,
    make_domain,
    exhaustion_factor,
)
from .sampling import (
    SampleSet,
    sample,
    product_sample,
    validation_density,
    FIT,
    VALIDATION,
)

__all__ = [
    "PlanarCompact",
    "Disk",
    "Segment",
    "Polygon",
    "PointCloud",
    "ProductCompact",
    "make_compact",
    "format_complex",
    "parse_complex",
    "PlanarDomain",
    "DiskDomain",
    "PolygonDomain",
    "HalfStripDomain",
    "make_domain",
    "exhaustion_factor",
    "SampleSet",
    "sample",
    "product_sample",
    "validation_density",
    "FIT",
    "VALIDATION",
]
