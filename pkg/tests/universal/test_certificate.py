"""
Тесты сертификата: пересчёт, инварианты, подвижный центр и полунормы.
"""

import dataclasses
import math

import pytest

from src.approximation.approximators import SamplingPlan
from src.core.exceptions import DimensionError, IntegrityError
from src.geometry.compacts import ProductCompact, make_compact
from src.geometry.domains import DiskDomain
from src.series.enumerations import GRADED, make_enumeration
from src.series.polynomial import MultiPolynomial
from src.series.targets import make_target
from src.universal.builder import UniversalSeries, build_universal
from src.universal.certificate import (
    Certificate,
    MovingCenterResult,
    MovingCenterSpec,
    limit_seminorms,
    order_label,
    parse_order_label,
    verify_certificate,
)
from src.universal.tasks import BuildBudget, DomainSpec, MuSpec, UniversalTask

DOMAIN = DomainSpec((DiskDomain(0j, 1.0),), (0,))
ENUM_1D = make_enumeration(GRADED, 1)
BUDGET = BuildBudget(degree_cap=20, plan=SamplingPlan(fit_density=12))


def _zero_series() -> UniversalSeries:
    task = UniversalTask(
        make_target("zero", 1), ProductCompact((make_compact("segment 2 3"),)), 0.1
    )
    return build_universal(DOMAIN, ENUM_1D, MuSpec(), [task, task], BUDGET)


def _with_polynomial(series: UniversalSeries, polynomial: MultiPolynomial) -> UniversalSeries:
    return UniversalSeries(
        polynomial, series.enumeration, series.domain, series.mu, series.tasks, series.certificate
    )


@pytest.mark.unit
class TestOrderLabels:
    def test_round_trip(self):
        assert order_label((1, 0, 2)) == "1,0,2"
        assert parse_order_label("1,0,2") == (1, 0, 2)


@pytest.mark.unit
class TestCertificate:
    """Параметры построения в сертификате."""

    def test_plan_restored(self):
        certificate = Certificate(fit_density=12, validation_factor=2, product_cap=100, validation_cap=200)
        plan = certificate.plan
        assert (plan.fit_density, plan.validation_factor) == (12, 2)
        assert (plan.product_cap, plan.validation_cap) == (100, 200)

    def test_built_certificate(self):
        series = _zero_series()
        certificate = series.certificate
        assert len(certificate) == 2
        assert certificate.enumeration == ENUM_1D.name
        assert certificate.fit_density == 12
        assert certificate.degree_cap == 20
        assert [r.stage for r in certificate.stages] == [1, 2]
        assert certificate.stages[1].power == 1


@pytest.mark.unit
class TestVerify:
    """Пересчёт сертификата на свежих сетках."""

    def test_replay_passes(self):
        report = verify_certificate(_zero_series())
        assert report.passed
        assert report.stages_checked == 2
        assert "пройдена" in report.summary()

    def test_tampered_coefficient(self):
        series = _zero_series()
        tampered = _with_polynomial(series, MultiPolynomial(1, {(0,): 1e-3}))
        with pytest.raises(IntegrityError) as exc_info:
            verify_certificate(tampered)
        assert exc_info.value.stage == 1

    def test_tampered_record(self):
        series = _zero_series()
        stages = list(series.certificate.stages)
        stages[1] = dataclasses.replace(stages[1], err_k=0.5)
        certificate = dataclasses.replace(series.certificate, stages=tuple(stages))
        tampered = UniversalSeries(
            series.polynomial, series.enumeration, series.domain, series.mu, series.tasks, certificate
        )
        with pytest.raises(IntegrityError) as exc_info:
            verify_certificate(tampered)
        assert exc_info.value.stage == 2

    def test_invariant_violation_reported(self):
        series = _zero_series()
        stages = list(series.certificate.stages)
        stages[1] = dataclasses.replace(stages[1], lam=0)
        certificate = dataclasses.replace(series.certificate, stages=tuple(stages))
        broken = UniversalSeries(
            series.polynomial, series.enumeration, series.domain, series.mu, series.tasks, certificate
        )
        report = verify_certificate(broken)
        assert not report.passed
        assert any("λ=0" in v for v in report.violations)

    def test_stage_count_mismatch(self):
        series = _zero_series()
        broken = UniversalSeries(
            series.polynomial, series.enumeration, series.domain, series.mu, series.tasks[:1],
            series.certificate,
        )
        with pytest.raises(DimensionError):
            verify_certificate(broken)

    def test_moving_center(self):
        series = _zero_series()
        spec = MovingCenterSpec(ProductCompact((make_compact("disk 0 0.5"),)), density=4)
        report = verify_certificate(series, spec)
        assert len(report.moving) == 2
        assert all(r.worst_k_error == 0.0 for r in report.moving)


@pytest.mark.unit
class TestMovingCenterResult:
    def test_ratio(self):
        result = MovingCenterResult(1, 0.01, 0.03, (0j,), 0.0, (0j,))
        assert result.ratio == pytest.approx(3.0)

    def test_ratio_zero_center_error(self):
        assert MovingCenterResult(1, 0.0, 0.0, (0j,), 0.0, (0j,)).ratio == 1.0
        assert MovingCenterResult(1, 0.0, 0.1, (0j,), 0.0, (0j,)).ratio == float("inf")


@pytest.mark.unit
class TestLimitSeminorms:
    """Полунормы хвоста S_λ − f по этапам."""

    def test_quadratic_tail(self):
        series = _with_polynomial(_zero_series(), MultiPolynomial(1, {(2,): 1.0}))
        profile = limit_seminorms(series, [(0,), (2,)], radius=1.0, density=12)
        assert len(profile) == 2
        # λ1 = 0, λ2 = 1: хвост z² на обоих этапах
        for values in profile:
            assert values["0"] == pytest.approx(1.0, abs=1e-9)
            assert values["2"] == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.slow
    def test_built_series_tails_decrease(self):
        """Единица, затем ноль с чётными λ: полунормы порядков 0 и 1 убывают к нулю."""
        segment = ProductCompact((make_compact("segment 2 3"),))
        schedule = [
            UniversalTask(make_target("constant 1", 1), segment, 0.1),
            UniversalTask(make_target("zero", 1), segment, 0.1),
        ]
        budget = BuildBudget(degree_cap=40, plan=SamplingPlan(fit_density=16))
        series = build_universal(DOMAIN, ENUM_1D, MuSpec.parse("residue 0 2"), schedule, budget)

        first, second = limit_seminorms(series, [(0,), (1,)], radius=1.0, density=12)
        for label in ("0", "1"):
            assert math.isfinite(first[label])
            assert first[label] > 0.0
            assert second[label] <= first[label]
            # λ₂ не меньше верхнего индекса: хвоста нет
            assert second[label] == 0.0
