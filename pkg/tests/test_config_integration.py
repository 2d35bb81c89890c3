"""
Интеграционные тесты для модуля конфигурации.

Проверяет разбор INI-файлов запуска, перекрёстную валидацию секций
и переопределения параметров сеток из окружения.
"""

import pytest
from pathlib import Path
from unittest.mock import patch

from src.config.config_reader import (
    ConfigReader,
    RunConfig,
    load_config,
    parse_config,
    parse_multi_indices,
)
from src.config.settings import TestSettings, get_environment_settings
from src.config.validation import ConfigValidator, validate_system
from src.core.exceptions import ConfigError, DimensionError, GeometryError, ValidationError


def _with(text: str, old: str, new: str) -> str:
    assert old in text
    return text.replace(old, new)


@pytest.mark.unit
class TestParseConfig:
    """Тесты разбора текста конфигурации."""

    def test_minimal_config(self):
        """Тест: минимальная конфигурация d=1 разбирается со значениями по умолчанию."""
        config = parse_config(TestSettings.MINIMAL_CONFIG_TEXT)

        assert isinstance(config, RunConfig)
        assert config.dimension == 1
        assert config.run.center == (0j,)
        assert config.run.scheme == "graded"
        assert config.run.fit_density == 24
        assert [d.shape for d in config.domains] == ["disk 0 1"]
        assert len(config.tasks) == 1
        task = config.tasks[0]
        assert task.compacts == ("segment 2 3",)
        assert task.epsilon == 0.1
        assert task.level == 1

    def test_text_round_trip(self):
        """Тест: каноническое представление разбирается в ту же конфигурацию."""
        config = parse_config(TestSettings.MINIMAL_CONFIG_TEXT)
        assert parse_config(config.to_text()) == config

    def test_misspelled_scheme(self):
        """Тест: опечатка в схеме даёт ошибку с путём run.scheme."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "scheme = graded", "scheme = sperical")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "run.scheme"

    def test_compact_count_mismatch(self):
        """Тест: два множителя компакта при d=1."""
        text = _with(
            TestSettings.MINIMAL_CONFIG_TEXT, "compact.1 = segment 2 3",
            "compact.1 = segment 2 3\ncompact.2 = segment 2 3",
        )
        with pytest.raises(DimensionError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "task.1.compact"

    def test_missing_domain_section(self):
        """Тест: нет секции [domain.1]."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "[domain.1]\nshape = disk 0 1\n", "")
        with pytest.raises(DimensionError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "domain"

    def test_unknown_key(self):
        """Тест: неизвестный параметр секции."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "mu = all", "mu = all\ncolour = red")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "run.colour"

    def test_unknown_section(self):
        """Тест: неизвестная секция."""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(TestSettings.MINIMAL_CONFIG_TEXT + "\n[extra]\nkey = 1\n")
        assert exc_info.value.field == "extra"

    def test_invalid_epsilon(self):
        """Тест: ε ≤ 0."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "epsilon = 0.1", "epsilon = 0")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "task.1.epsilon"

    def test_invalid_compact(self):
        """Тест: отрезок нулевой длины."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "segment 2 3", "segment 2 2")
        with pytest.raises(ValidationError) as exc_info:
            parse_config(text)
        assert exc_info.value.field.startswith("task.1.compact.1")

    def test_samples_require_assertion(self, tmp_path):
        """Тест: сырая выборка без assert_ad отклоняется."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "target = constant 1", "target = samples data.csv")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text, tmp_path)
        assert exc_info.value.field == "task.1.assert_ad"

    def test_custom_scheme_requires_prefix(self):
        """Тест: схема custom без префикса."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "scheme = graded", "scheme = custom")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "run.custom_prefix"

    def test_seminorm_radius_required(self):
        """Тест: порядки полунорм без радиуса."""
        text = _with(TestSettings.MINIMAL_CONFIG_TEXT, "mu = all", "mu = all\nseminorm_orders = 0; 2")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "run.seminorm_radius"

    def test_multi_indices(self):
        """Тест: разбор списка мультииндексов."""
        assert parse_multi_indices("1,0; 0,2", "orders") == ((1, 0), (0, 2))
        assert parse_multi_indices("", "orders") == ()


@pytest.mark.unit
class TestValidator:
    """Тесты перекрёстной валидации."""

    def test_valid_config(self):
        """Тест: валидная конфигурация без ошибок."""
        config = parse_config(TestSettings.MINIMAL_CONFIG_TEXT)
        result = ConfigValidator().validate(config)
        assert result.is_valid
        assert not result.has_warnings()

    def test_empty_schedule_warning(self):
        """Тест: пустое расписание даёт предупреждение, не ошибку."""
        text = TestSettings.MINIMAL_CONFIG_TEXT.split("[task.1]")[0]
        config = parse_config(text)
        result = ConfigValidator().validate(config)
        assert result.is_valid
        assert result.has_warnings()

    def test_system_validation(self):
        """Тест: системные требования выполнены в тестовом окружении."""
        ok, report = validate_system()
        assert ok
        assert "✅" in report


@pytest.mark.unit
class TestEnvironmentOverrides:
    """Тесты переопределений os.environ > .env > файл."""

    @pytest.fixture
    def config_file(self, tmp_path) -> Path:
        path = tmp_path / "run.ini"
        path.write_text(TestSettings.MINIMAL_CONFIG_TEXT, encoding="utf-8")
        return path

    def test_no_overrides(self, config_file):
        """Тест: без окружения значения берутся из файла."""
        with patch.dict("os.environ", {}, clear=True):
            config = load_config(config_file, env_path=None)
        assert config.run.fit_density == 24

    def test_environment_override(self, config_file):
        """Тест: OVC_FIT_DENSITY переопределяет плотность."""
        with patch.dict("os.environ", {"OVC_FIT_DENSITY": "12"}, clear=True):
            config = load_config(config_file, env_path=None)
        assert config.run.fit_density == 12

    def test_env_file_override(self, config_file, tmp_path):
        """Тест: .env применяется, os.environ имеет приоритет."""
        env_path = tmp_path / ".env"
        env_path.write_text("OVC_DEGREE_CAP=7\nOVC_FIT_DENSITY=10\n", encoding="utf-8")
        with patch.dict("os.environ", {"OVC_FIT_DENSITY": "14"}, clear=True):
            config = load_config(config_file, env_path=env_path)
        assert config.run.degree_cap == 7
        assert config.run.fit_density == 14

    def test_invalid_environment_value(self):
        """Тест: нечисловое значение в окружении."""
        with patch.dict("os.environ", {"OVC_PRODUCT_CAP": "many"}, clear=True):
            with pytest.raises(ConfigError) as exc_info:
                get_environment_settings(None)
        assert exc_info.value.field == "OVC_PRODUCT_CAP"

    def test_out_of_range_override(self, config_file):
        """Тест: нулевая плотность из окружения отклоняется."""
        with patch.dict("os.environ", {"OVC_FIT_DENSITY": "0"}, clear=True):
            with pytest.raises(ConfigError) as exc_info:
                load_config(config_file, env_path=None)
        assert exc_info.value.field == "env"

    def test_missing_file(self, tmp_path):
        """Тест: отсутствующий файл конфигурации."""
        with pytest.raises(ConfigError):
            ConfigReader(tmp_path / "missing.ini", env_path=None).load_config()

    def test_reader_caches_config(self, config_file):
        """Тест: повторный запрос не перечитывает файл."""
        reader = ConfigReader(config_file, env_path=None)
        with patch.dict("os.environ", {}, clear=True):
            first = reader.get_run_config()
            config_file.unlink()
            assert reader.get_run_config() is first
