"""Learning-rate schedule: linear warmup to the peak, then a
multiplicative decay at every epoch boundary.

The closed form is the single source of truth; the trainer sets the
optimizer LR from it at every step, so the logged trace matches it
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TrainConfig:
    peak_lr: float = 3e-5
    warmup_steps: int = 100
    lr_decay_factor_per_epoch: float = 0.7
    epochs: int = 10
    batch_size: int = 8


@dataclass(frozen=True)
class GenerationConfig:
    num_beams: int = 4
    no_repeat_ngram_size: int = 3
    max_input_tokens: int = 512
    max_target_tokens: int = 128


def lr_at(config: TrainConfig, global_step: int, epoch_index: int) -> float:
    """LR at a 1-based global step inside a 0-based epoch.

    warmup factor = min(1, step / warmup_steps); decay factor =
    decay^epoch_index, applied at each epoch boundary.
    """
    if global_step < 1:
        raise ValueError("global_step is 1-based")
    warmup = min(1.0, global_step / config.warmup_steps)
    return config.peak_lr * warmup * config.lr_decay_factor_per_epoch**epoch_index


def schedule_trace(config: TrainConfig, steps_per_epoch: int) -> list[tuple[int, int, float]]:
    """Full (global_step, epoch_index, lr) trace for a run."""
    trace = []
    step = 0
    for epoch in range(config.epochs):
        for _ in range(steps_per_epoch):
            step += 1
            trace.append((step, epoch, lr_at(config, step, epoch)))
    return trace
