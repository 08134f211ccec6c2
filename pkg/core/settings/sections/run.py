from typing import Literal

from pydantic import Field, field_validator

from core.domain.enums import MaskPattern
from core.domain.value_objects import PolicyVariant
from core.settings.base import SoatBaseSettings


class RunSettings(SoatBaseSettings):
    """Paths, seeds and process-level switches shared by every command."""

    seed: int = Field(default=0, ge=0)
    pattern: str = MaskPattern.SELECTIVE_OBJECT.value
    variant: str = Field(default="", description="Explicit pattern+obj|noobj+agg|noagg; empty uses pattern defaults")
    workers: int = Field(default=1, ge=1)
    out: str = "runs/latest"
    dataset: str = "data/soat"
    checkpoint: str = ""
    report: str = ""
    baseline_report: str = ""
    verbosity: Literal["debug", "info", "warning", "error"] = "info"
    force: bool = False
    resume: bool = False
    seeds: int = Field(default=1, ge=1)

    @field_validator("pattern")
    @classmethod
    def _known_pattern(cls, value: str) -> str:
        return MaskPattern.parse(value).value

    @field_validator("variant")
    @classmethod
    def _known_variant(cls, value: str) -> str:
        return PolicyVariant.parse(value).name if value else ""

    @property
    def mask_pattern(self) -> MaskPattern:
        return MaskPattern(self.pattern)

    @property
    def policy_variant(self) -> PolicyVariant:
        if self.variant:
            return PolicyVariant.parse(self.variant)
        return PolicyVariant.for_pattern(self.mask_pattern)
