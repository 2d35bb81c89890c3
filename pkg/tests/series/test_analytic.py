"""
Тесты аналитических тестовых функций и точных рядов Тейлора.
"""

from math import factorial

import numpy as np
import pytest

from src.core.exceptions import DimensionError, PoleCollisionError, ValidationError
from src.series.enumerations import GRADED, RECTANGULAR, make_enumeration
from src.series.targets import parse_analytic
from src.series.analytic import (
    AnalyticTestFunction,
    ExpFactor,
    OneFactor,
    PolyFactor,
    RationalFactor,
    SeparableTerm,
    exact_series,
)

GEOMETRIC = "-1 : rat(1 / 1)"


@pytest.mark.unit
class TestExactSeries:
    """Точные коэффициенты Тейлора в центре."""

    def test_geometric_series(self):
        prefix = exact_series(parse_analytic(GEOMETRIC, 1), (0,), 15, make_enumeration(GRADED, 1))
        assert prefix.count == 16
        np.testing.assert_allclose(prefix.coefficients, np.ones(16), rtol=1e-14)

    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_geometric_tail_bound(self, n):
        """sup_{|z| ≤ 1/2} |S_N − 1/(1−z)| ≤ 2·0.5^N, равенство порядка в z = 1/2."""
        h = parse_analytic(GEOMETRIC, 1)
        partial = exact_series(h, (0,), n, make_enumeration(GRADED, 1)).polynomial()
        angles = 2.0 * np.pi * np.arange(64) / 64
        points = np.concatenate([r * np.exp(1j * angles) for r in (0.1, 0.25, 0.4, 0.5)])
        points = points.reshape(-1, 1)

        errors = np.abs(partial.evaluate_many(points) - h.values(points))
        assert np.max(errors) <= 2.0 * 0.5**n

        at_half = np.array([[0.5]], dtype=complex)
        error = abs(partial.evaluate_many(at_half)[0] - h.values(at_half)[0])
        assert error == pytest.approx(0.5**n, abs=1e-9)
        assert np.max(errors) == pytest.approx(error, abs=1e-12)

    def test_shifted_pole(self):
        h = parse_analytic("1 : rat(1 / 3)", 1)
        prefix = exact_series(h, (0,), 12, make_enumeration(GRADED, 1))
        expected = [-(3.0 ** (-k - 1)) for k in range(13)]
        np.testing.assert_allclose(prefix.coefficients, expected, rtol=1e-13)

    def test_product_of_geometric_series(self):
        h = parse_analytic("1 : rat(-1 / 1), rat(-1 / 1)", 2)
        prefix = exact_series(h, (0, 0), 4, make_enumeration(GRADED, 2))
        assert prefix.count == 15
        np.testing.assert_allclose(prefix.coefficients, np.ones(15), rtol=1e-14)

    def test_coefficient_map_follows_enumeration(self):
        e = make_enumeration(RECTANGULAR, 2)
        h = parse_analytic("1 : poly(0 1), poly(0 0 1)", 2)
        prefix = exact_series(h, (0, 0), 2, e)
        assert prefix.coefficient_map()[(1, 2)] == pytest.approx(1.0)
        assert prefix.coefficient_at(e.index_of_multi((1, 2))) == pytest.approx(1.0)
        assert len(prefix.polynomial()) == 1

    def test_exp_at_shifted_center(self):
        h = AnalyticTestFunction(1, (SeparableTerm(1, (ExpFactor(1),)),))
        prefix = exact_series(h, (1,), 5, make_enumeration(GRADED, 1))
        expected = [np.e / factorial(k) for k in range(6)]
        np.testing.assert_allclose(prefix.coefficients, expected, rtol=1e-14)

    def test_center_at_pole(self):
        with pytest.raises(PoleCollisionError):
            exact_series(parse_analytic(GEOMETRIC, 1), (1 + 1e-10,), 3, make_enumeration(GRADED, 1))

    def test_coefficient_index_out_of_range(self):
        prefix = exact_series(parse_analytic(GEOMETRIC, 1), (0,), 3, make_enumeration(GRADED, 1))
        with pytest.raises(ValidationError):
            prefix.coefficient_at(4)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            exact_series(parse_analytic(GEOMETRIC, 1), (0, 0), 3, make_enumeration(GRADED, 2))


@pytest.mark.unit
class TestAnalyticValues:
    """Значения и производные в замкнутой форме."""

    def test_rational_derivative(self):
        h = parse_analytic("1 : rat(1 / 3)", 1)
        z = np.asarray([[0.5], [1j]])
        np.testing.assert_allclose(h.values(z, (1,)), -1 / (z[:, 0] - 3) ** 2, rtol=1e-14)
        np.testing.assert_allclose(h.values(z, (2,)), 2 / (z[:, 0] - 3) ** 3, rtol=1e-13)

    def test_polynomial_factor(self):
        factor = PolyFactor((1, 2, 3))
        rows = factor.taylor_rows(np.asarray([2.0]), 3)
        # 1 + 2z + 3z² в ζ = 2: 17, 14, 3, 0
        np.testing.assert_allclose(rows[0], [17, 14, 3, 0])

    def test_separable_product(self):
        h = parse_analytic("2 : exp(1), poly(0 1); 1 : one, one", 2)
        z = np.asarray([[0.3, 2.0]])
        assert h.values(z)[0] == pytest.approx(2 * np.exp(0.3) * 2.0 + 1)
        assert h.values(z, (1, 1))[0] == pytest.approx(2 * np.exp(0.3))

    def test_pole_collision_on_values(self):
        h = AnalyticTestFunction(1, (SeparableTerm(1, (RationalFactor((1,), (0.5,)),)),))
        with pytest.raises(PoleCollisionError):
            h.values([[0.5]])

    def test_constant_and_zero(self):
        assert AnalyticTestFunction.constant(2, 3)((1, 1)) == 3
        assert AnalyticTestFunction.zero(1)((4,)) == 0
        assert AnalyticTestFunction.zero(1).to_spec() == "zero"

    def test_factor_count_must_match(self):
        with pytest.raises(DimensionError):
            AnalyticTestFunction(2, (SeparableTerm(1, (OneFactor(),)),))

    def test_to_spec_round_trip(self):
        text = "2.0 : exp(1.0 0.5), rat(1.0 / 3.0 -3.0); 1j : poly(1.0 2.0), one"
        h = parse_analytic(text, 2)
        assert h.to_spec() == text
