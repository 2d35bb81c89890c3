"""
Тесты целей аппроксимации: разбор, сырые выборки, разности.
"""

import numpy as np
import pytest

from src.core.exceptions import ConfigError, DimensionError, PreconditionError, ValidationError
from src.series.polynomial import MultiPolynomial
from src.series.targets import (
    DifferenceTarget,
    RawSamples,
    load_samples,
    make_target,
    parse_analytic,
    raw_sample_points,
)
from src.series.analytic import AnalyticTestFunction


@pytest.fixture
def samples_file(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text("# re,im,value_re,value_im\n2,0,1,0\n2.5,0,1,0\n3,0,1,0.5\n", encoding="utf-8")
    return path


@pytest.mark.unit
class TestMakeTarget:
    """Разбор описаний целей."""

    def test_zero_and_constant(self):
        assert make_target("zero", 2).values([[1, 1]])[0] == 0
        assert make_target("constant 1+2j", 1).values([[5]])[0] == 1 + 2j

    def test_analytic(self):
        target = make_target("-1 : rat(1 / 1)", 1)
        assert isinstance(target, AnalyticTestFunction)
        assert target.values([[0.5]])[0] == pytest.approx(2.0)

    def test_samples_relative_to_base_dir(self, samples_file):
        target = make_target("samples samples.csv", 1, base_dir=samples_file.parent, assert_ad=True)
        assert isinstance(target, RawSamples)
        np.testing.assert_array_equal(target.values([[3], [2]]), [1 + 0.5j, 1])

    def test_samples_need_assertion(self, samples_file):
        with pytest.raises(ValidationError) as exc_info:
            make_target(f"samples {samples_file}", 1, "task.1.target")
        assert exc_info.value.field.startswith("task.1.target")

    def test_missing_samples_file(self, tmp_path):
        with pytest.raises(ConfigError):
            make_target(f"samples {tmp_path / 'missing.csv'}", 1, assert_ad=True)

    @pytest.mark.parametrize("spec", ["", "constant", "constant 1 2", "1 : sin(1)", "1 rat(1 / 1)", "x : one"])
    def test_invalid(self, spec):
        with pytest.raises(ConfigError):
            make_target(spec, 1)

    def test_error_field_is_prefixed(self):
        with pytest.raises(ValidationError) as exc_info:
            make_target("1 : one", 2, "task.3.target")
        assert exc_info.value.field.startswith("task.3.target")

    def test_wrong_factor_count(self):
        with pytest.raises(DimensionError):
            parse_analytic("1 : one", 2)


@pytest.mark.unit
class TestRawSamples:
    """Цели, заданные только в точках."""

    def test_load(self, samples_file):
        samples = load_samples(samples_file, 1, True)
        assert samples.dimension == 1
        assert len(samples.points) == 3
        assert samples.to_spec() == f"samples {samples_file}"

    def test_bad_column_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_samples(path, 1, True)

    def test_unknown_point(self, samples_file):
        samples = load_samples(samples_file, 1, True)
        with pytest.raises(PreconditionError):
            samples.values([[2.25]])

    def test_no_derivatives(self, samples_file):
        samples = load_samples(samples_file, 1, True)
        with pytest.raises(PreconditionError):
            samples.values([[2]], (1,))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            RawSamples(np.asarray([1, 2]), np.asarray([1]), assert_ad=True)


@pytest.mark.unit
class TestDifferenceTarget:
    """Остаток цели после вычитания многочлена."""

    def test_values(self, samples_file):
        samples = load_samples(samples_file, 1, True)
        residual = DifferenceTarget(samples, MultiPolynomial.constant(1, 1))
        np.testing.assert_allclose(residual.values([[2], [3]]), [0, 0.5j])
        np.testing.assert_array_equal(raw_sample_points(residual), samples.points)

    def test_analytic_has_no_raw_points(self):
        assert raw_sample_points(make_target("zero", 1)) is None
