"""
Тесты перестановок с контрольными точками и свидетелей неплотности.
"""

import numpy as np
import pytest

from src.core.exceptions import ConfigError, ValidationError
from src.rearrange.steering import (
    ESCAPE_ABOVE,
    ESCAPE_BELOW,
    GAP,
    LimitClass,
    TermSequence,
    check_nondensity,
    classify,
    steer_rearrangement,
)


@pytest.mark.unit
class TestTermSequence:
    """Пресеты и чтение членов из файла."""

    def test_alternating_harmonic(self):
        terms = TermSequence.alternating_harmonic(4)
        np.testing.assert_allclose(terms.terms, [1.0, -0.5, 1 / 3, -0.25])
        assert terms.tag == "alternating_harmonic"

    def test_geometric_ratio(self):
        with pytest.raises(ValidationError):
            TermSequence.geometric(5, ratio=1.0)

    def test_preset_unknown(self):
        with pytest.raises(ConfigError):
            TermSequence.preset("harmonic", 10)

    def test_preset_count(self):
        with pytest.raises(ConfigError):
            TermSequence.preset("zeros", 0)

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            TermSequence([1.0, float("nan")])

    def test_from_file(self, tmp_path):
        path = tmp_path / "terms.txt"
        path.write_text("# члены\n1.5\n\n-2\n0.25\n", encoding="utf-8")
        terms = TermSequence.from_file(path)
        np.testing.assert_array_equal(terms.terms, [1.5, -2.0, 0.25])
        assert terms.tag is None

    def test_from_file_bad_line(self, tmp_path):
        path = tmp_path / "terms.txt"
        path.write_text("1\nabc\n", encoding="utf-8")
        with pytest.raises(ConfigError) as exc_info:
            TermSequence.from_file(path)
        assert "terms.txt:2" in str(exc_info.value)

    def test_from_file_missing(self, tmp_path):
        with pytest.raises(ConfigError):
            TermSequence.from_file(tmp_path / "missing.txt")


@pytest.mark.unit
class TestClassify:
    """Класс предела по метке или по префиксу."""

    def test_tagged(self):
        assert classify(TermSequence.alternating_harmonic(10)) == (LimitClass.PLUS_INFINITY, False)
        assert classify(TermSequence.geometric(10)) == (LimitClass.FINITE, False)

    def test_untagged_small_tail(self):
        terms = TermSequence(np.concatenate([[1.0, -2.0], np.zeros(10)]))
        assert classify(terms) == (LimitClass.FINITE, True)

    def test_untagged_negative_mass(self):
        terms = TermSequence(np.tile([0.5, -1.0], 20))
        assert classify(terms) == (LimitClass.MINUS_INFINITY, True)


@pytest.mark.unit
class TestSteering:
    """Перестановки для трёх классов пределов."""

    @pytest.mark.slow
    def test_alternating_harmonic_checkpoints(self):
        result = steer_rearrangement(TermSequence.alternating_harmonic(200_000))
        assert result.limit_class == LimitClass.PLUS_INFINITY
        assert not result.extrapolated
        assert result.is_bijection()
        assert [c.k for c in result.checkpoints[:5]] == [1, 2, 3, 4, 5]
        assert result.verify_checkpoints()
        positions = [c.position for c in result.checkpoints]
        assert positions == sorted(positions)

    def test_first_checkpoint(self):
        result = steer_rearrangement(TermSequence.alternating_harmonic(200))
        # 1 + 1/3 + 1/5 > 1.5: первый отрицательный член после трёх положительных
        first = result.checkpoints[0]
        assert first.k == 1
        assert list(result.permutation[:4]) == [0, 2, 4, 1]
        assert first.position == 3
        assert np.all(result.trace[first.position:result.horizon] > 1)

    def test_minus_infinity_mirror(self):
        terms = TermSequence(-TermSequence.alternating_harmonic(2000).terms)
        result = steer_rearrangement(terms)
        assert result.limit_class == LimitClass.MINUS_INFINITY
        assert result.extrapolated
        assert result.is_bijection()
        assert result.checkpoints
        assert result.verify_checkpoints()

    def test_geometric_limit(self):
        result = steer_rearrangement(TermSequence.geometric(60))
        assert result.limit_class == LimitClass.FINITE
        assert abs(result.limit_estimate - 2.0) <= 2.0**-49
        np.testing.assert_array_equal(result.permutation, np.arange(60))

    def test_zeros(self):
        result = steer_rearrangement(TermSequence.zeros(8))
        assert result.limit_class == LimitClass.FINITE
        assert result.limit_estimate == 0.0
        assert result.checkpoints == ()

    def test_rows(self):
        result = steer_rearrangement(TermSequence.geometric(3))
        assert result.rows() == [(0, 0, 1.0), (1, 1, 1.5), (2, 2, 1.75)]


@pytest.mark.unit
class TestNondensity:
    """Свидетели неплотности следа частичных сумм."""

    def test_escape_above(self):
        witness = check_nondensity([0, 1, 2, 3, 10, 11, 12], 4)
        assert witness.kind == ESCAPE_ABOVE
        assert witness.bound == 3.0

    def test_escape_below(self):
        witness = check_nondensity([0, -1, -2, -7, -8], 3)
        assert witness.kind == ESCAPE_BELOW
        assert witness.bound == -2.0

    def test_gap(self):
        witness = check_nondensity([0.0, 5.0, 0.0, 5.0], 0)
        assert witness.kind == GAP
        assert (witness.low, witness.high) == (0.0, 5.0)

    def test_dense_trace(self):
        assert check_nondensity(np.linspace(0, 1, 20), 0) is None

    def test_invalid_arguments(self):
        with pytest.raises(ValidationError):
            check_nondensity([], 0)
        with pytest.raises(ValidationError):
            check_nondensity([1.0, 2.0], 2)
