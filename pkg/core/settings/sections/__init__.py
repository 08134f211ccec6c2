from .env import EnvSettings
from .eval import EvalSettings
from .model import ModelSettings
from .run import RunSettings
from .train import TrainSettings

__all__ = ["EnvSettings", "EvalSettings", "ModelSettings", "RunSettings", "TrainSettings"]
