"""genkw: fine-tune and run a text-to-text keyword generation model,
emitting predictions in the evaluation toolkit's JSONL format."""

from .data import build_training_pairs, parse_model_output
from .schedule import GenerationConfig, TrainConfig, lr_at

__version__ = "0.1.0"

__all__ = [
    "build_training_pairs",
    "parse_model_output",
    "GenerationConfig",
    "TrainConfig",
    "lr_at",
    "__version__",
]
