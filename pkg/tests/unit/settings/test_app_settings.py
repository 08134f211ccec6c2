"""Tests for layered configuration: defaults, SOAT_ environment, config file, overrides."""

import pytest

from core.domain.enums import MaskPattern
from core.domain.exceptions import ConfigError
from core.settings import AppSettings


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "toy.env"
    path.write_text("SEED=4\nlearning_rate=0.01\nITERATIONS=7\npattern=all\n", encoding="utf-8")
    return path


class TestPrecedence:
    def test_defaults(self):
        settings = AppSettings.from_sources()
        assert settings.run.seed == 0
        assert settings.model.d_model == 64
        assert settings.run.mask_pattern is MaskPattern.SELECTIVE_OBJECT

    def test_environment_overrides_defaults(self, monkeypatch):
        monkeypatch.setenv("SOAT_SEED", "9")
        assert AppSettings.from_sources().run.seed == 9

    def test_file_overrides_environment(self, monkeypatch, config_file):
        monkeypatch.setenv("SOAT_SEED", "9")
        settings = AppSettings.from_sources(config_file)
        assert settings.run.seed == 4
        assert settings.train.learning_rate == 0.01
        assert settings.train.iterations == 7

    def test_overrides_win(self, config_file):
        settings = AppSettings.from_sources(config_file, {"seed": 11, "iterations": None})
        assert settings.run.seed == 11
        assert settings.train.iterations == 7


class TestValidation:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="no_such_key"):
            AppSettings.from_sources(overrides={"no_such_key": 1})

    def test_unknown_key_in_file(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("learning_rat=0.1\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            AppSettings.from_sources(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            AppSettings.from_sources(tmp_path / "missing.env")

    @pytest.mark.parametrize(
        "overrides",
        [
            {"bc_fraction": 1.5},
            {"d_model": 30, "num_heads": 4},
            {"pattern": "sideways"},
            {"variant": "baseline+obj+agg"},
            {"split": "test"},
        ],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            AppSettings.from_sources(overrides=overrides)

    def test_exit_code(self):
        with pytest.raises(ConfigError) as info:
            AppSettings.from_sources(overrides={"nope": 1})
        assert info.value.exit_code == 2


class TestVariant:
    def test_pattern_defaults(self):
        variant = AppSettings.from_sources(overrides={"pattern": "baseline"}).run.policy_variant
        assert not variant.object_features
        assert not variant.view_aggregation

    def test_explicit_variant_is_normalized(self):
        settings = AppSettings.from_sources(overrides={"variant": "all"})
        assert settings.run.variant == "all+obj+agg"
        assert settings.run.policy_variant.pattern is MaskPattern.ALL_ATTENTION


class TestEcho:
    def test_echo_replays_to_same_settings(self, tmp_path, config_file):
        settings = AppSettings.from_sources(config_file, {"pretrain": False, "variant": "selective-object+obj+agg"})
        echo = settings.write_echo(tmp_path / "run" / "resolved_config.env")

        replayed = AppSettings.from_sources(echo)
        assert replayed.to_flat() == settings.to_flat()
        assert replayed.train.pretrain is False

    def test_flat_keys_are_sorted_strings(self):
        flat = AppSettings.from_sources().to_flat()
        assert list(flat) == sorted(flat)
        assert flat["pretrain"] == "true"
        assert all(isinstance(v, str) for v in flat.values())

    def test_replace(self, config_file):
        settings = AppSettings.from_sources(config_file)
        changed = settings.replace(seed=2, pretrain=False)
        assert changed.run.seed == 2
        assert changed.train.pretrain is False
        assert changed.train.learning_rate == settings.train.learning_rate
        assert settings.run.seed == 4
