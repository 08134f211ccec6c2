# core/settings/app.py
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from core.domain.exceptions import ConfigError
from core.settings.sections import (
    EnvSettings,
    EvalSettings,
    ModelSettings,
    RunSettings,
    TrainSettings,
)

SECTIONS = {
    "env": EnvSettings,
    "model": ModelSettings,
    "train": TrainSettings,
    "eval": EvalSettings,
    "run": RunSettings,
}


def _key_index() -> Dict[str, str]:
    index: Dict[str, str] = {}
    for section, cls in SECTIONS.items():
        for field in cls.model_fields:
            if field in index:
                raise ConfigError(f"Config key {field!r} declared by two sections")
            index[field] = section
    return index


class AppSettings:
    """
    Central settings aggregator.

    Sections resolve with precedence built-in defaults < SOAT_* environment
    < config file < explicit overrides (CLI flags). Keys are flat and unique
    across sections, so a config file is a plain KEY=VALUE list.
    """

    def __init__(
        self,
        env: Optional[EnvSettings] = None,
        model: Optional[ModelSettings] = None,
        train: Optional[TrainSettings] = None,
        eval: Optional[EvalSettings] = None,
        run: Optional[RunSettings] = None,
    ):
        self.env = env or EnvSettings()
        self.model = model or ModelSettings()
        self.train = train or TrainSettings()
        self.eval = eval or EvalSettings()
        self.run = run or RunSettings()

    @classmethod
    def from_sources(
        cls,
        config_file: Optional[Path] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "AppSettings":
        """
        Resolve every section.

        Args:
            config_file: optional KEY=VALUE file (dotenv syntax); keys are
                case-insensitive
            overrides: explicit values, typically parsed CLI flags; None
                values are ignored

        Raises:
            ConfigError: unknown key, unreadable file or invalid value
        """
        index = _key_index()
        merged: Dict[str, Any] = {}

        if config_file is not None:
            path = Path(config_file)
            if not path.is_file():
                raise ConfigError(f"Config file not found: {path}")
            for key, value in dotenv_values(path).items():
                merged[key.strip().lower()] = value

        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key.lower()] = value

        unknown = sorted(set(merged) - set(index))
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")

        per_section: Dict[str, Dict[str, Any]] = {name: {} for name in SECTIONS}
        for key, value in merged.items():
            per_section[index[key]][key] = value

        try:
            built = {name: SECTIONS[name](**values) for name, values in per_section.items()}
        except ValidationError as exc:
            raise ConfigError(f"Invalid configuration: {exc}") from exc
        return cls(**built)

    def to_flat(self) -> Dict[str, str]:
        """Every resolved key as a string, sorted by key."""
        flat: Dict[str, str] = {}
        for name in SECTIONS:
            for key, value in getattr(self, name).model_dump().items():
                if isinstance(value, bool):
                    flat[key] = "true" if value else "false"
                elif value is None:
                    flat[key] = ""
                else:
                    flat[key] = str(value)
        return dict(sorted(flat.items()))

    def write_echo(self, path: Path) -> Path:
        """Write the resolved configuration so the run can be replayed with --config."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"{key}={value}" for key, value in self.to_flat().items()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def replace(self, **overrides: Any) -> "AppSettings":
        """Copy with some flat keys changed (validated like from_sources)."""
        values: Dict[str, Any] = dict(self.to_flat())
        values.update(overrides)
        return AppSettings.from_sources(overrides=values)
