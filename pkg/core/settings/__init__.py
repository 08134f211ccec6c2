from .app import AppSettings
from .sections import EnvSettings, EvalSettings, ModelSettings, RunSettings, TrainSettings

__all__ = [
    "AppSettings",
    "EnvSettings",
    "EvalSettings",
    "ModelSettings",
    "RunSettings",
    "TrainSettings",
]
