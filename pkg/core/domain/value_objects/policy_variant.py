"""Switches for the three proposed modules: object features, view aggregation, selective attention."""

from dataclasses import dataclass

from ..enums import MaskPattern
from ..exceptions import ConfigError


@dataclass(frozen=True)
class PolicyVariant:
    """
    Architecture configuration of the navigation policy.

    pattern chooses the attention mask; object_features feeds object tokens
    into the transformer; view_aggregation represents each view by its best
    scene-or-object score (otherwise only scene scores are used).
    """

    pattern: MaskPattern = MaskPattern.SELECTIVE_OBJECT
    object_features: bool = True
    view_aggregation: bool = True

    def __post_init__(self) -> None:
        if self.view_aggregation and not self.object_features:
            raise ValueError("View aggregation needs object features to aggregate")
        if self.pattern is MaskPattern.OBJECT_ONLY and not self.view_aggregation:
            raise ValueError("object-only pattern scores views through object aggregation")
        if self.pattern is MaskPattern.BASELINE and self.object_features:
            raise ValueError("baseline pattern has no object tokens; use 'all' for objects without selection")

    @classmethod
    def for_pattern(cls, pattern: MaskPattern) -> "PolicyVariant":
        """CLI defaults: baseline is scene-only, every other pattern is the full model."""
        if pattern is MaskPattern.BASELINE:
            return cls(pattern=pattern, object_features=False, view_aggregation=False)
        return cls(pattern=pattern, object_features=True, view_aggregation=True)

    @property
    def raw_scene_scores(self) -> bool:
        """Scene scores from raw projected features (view aggregation) or encoded outputs."""
        return self.view_aggregation

    @property
    def has_scene_features(self) -> bool:
        return self.pattern is not MaskPattern.OBJECT_ONLY

    @property
    def name(self) -> str:
        parts = [self.pattern.value]
        parts.append("obj" if self.object_features else "noobj")
        parts.append("agg" if self.view_aggregation else "noagg")
        return "+".join(parts)

    @classmethod
    def parse(cls, name: str) -> "PolicyVariant":
        """
        Inverse of name: 'pattern+obj|noobj+agg|noagg'; a bare pattern gives for_pattern defaults.

        Raises:
            ConfigError: on an unknown pattern, malformed name or meaningless combination
        """
        parts = name.split("+")
        pattern = MaskPattern.parse(parts[0])
        if len(parts) == 1:
            return cls.for_pattern(pattern)
        if len(parts) != 3 or parts[1] not in ("obj", "noobj") or parts[2] not in ("agg", "noagg"):
            raise ConfigError(f"Malformed policy variant '{name}', expected pattern+obj|noobj+agg|noagg")
        try:
            return cls(pattern=pattern, object_features=parts[1] == "obj", view_aggregation=parts[2] == "agg")
        except ValueError as exc:
            raise ConfigError(f"Invalid policy variant '{name}': {exc}") from exc
