"""Fine-tuning loop: Adam, per-step LR from the closed-form schedule,
per-epoch checkpoints, and a full LR/loss trace for verification."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import torch

from .data import TrainingPair
from .model import save_checkpoint
from .schedule import TrainConfig, lr_at
from .tokenizer import PAD_ID, WordTokenizer

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    epoch_losses: list[float]
    lr_trace: list[tuple[int, int, float]] = field(repr=False, default_factory=list)
    checkpoint_dirs: list[str] = field(default_factory=list)


def _batches(pairs: list[TrainingPair], batch_size: int):
    for start in range(0, len(pairs), batch_size):
        yield pairs[start : start + batch_size]


def _encode_batch(
    batch: list[TrainingPair],
    tokenizer: WordTokenizer,
    max_input: int,
    max_target: int,
):
    sources = [tokenizer.encode(p.source, max_input) for p in batch]
    targets = [tokenizer.encode(p.target, max_target) for p in batch]
    src_len = max(len(s) for s in sources)
    tgt_len = max(len(t) for t in targets)
    input_ids = torch.full((len(batch), src_len), PAD_ID, dtype=torch.long)
    attention = torch.zeros((len(batch), src_len), dtype=torch.long)
    labels = torch.full((len(batch), tgt_len), -100, dtype=torch.long)
    for i, (src, tgt) in enumerate(zip(sources, targets)):
        input_ids[i, : len(src)] = torch.tensor(src)
        attention[i, : len(src)] = 1
        labels[i, : len(tgt)] = torch.tensor(tgt)
    return input_ids, attention, labels


def train(
    model,
    tokenizer: WordTokenizer,
    pairs: list[TrainingPair],
    config: TrainConfig,
    output_dir: str | Path | None = None,
    max_input_tokens: int = 512,
    max_target_tokens: int = 128,
    seed: int = 42,
) -> TrainResult:
    """Run the fine-tune; the logged LR trace equals the schedule exactly.

    A checkpoint is saved after every epoch when ``output_dir`` is given.
    """
    if not pairs:
        raise ValueError("no training pairs")
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=0.0)
    result = TrainResult(epoch_losses=[])
    global_step = 0
    model.train()
    for epoch in range(config.epochs):
        total_loss = 0.0
        n_batches = 0
        for batch in _batches(pairs, config.batch_size):
            global_step += 1
            lr = lr_at(config, global_step, epoch)
            for group in optimizer.param_groups:
                group["lr"] = lr
            input_ids, attention, labels = _encode_batch(
                batch, tokenizer, max_input_tokens, max_target_tokens
            )
            loss = model(input_ids=input_ids, attention_mask=attention, labels=labels).loss
            loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            result.lr_trace.append((global_step, epoch, optimizer.param_groups[0]["lr"]))
            total_loss += float(loss.item())
            n_batches += 1
        epoch_loss = total_loss / n_batches
        result.epoch_losses.append(epoch_loss)
        logger.info("epoch %d: mean loss %.4f", epoch + 1, epoch_loss)
        if output_dir is not None:
            ckpt = Path(output_dir) / f"epoch{epoch + 1:02d}"
            save_checkpoint(model, tokenizer, ckpt)
            result.checkpoint_dirs.append(str(ckpt))
    if output_dir is not None:
        trace_path = Path(output_dir) / "train_trace.json"
        with open(trace_path, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "epoch_losses": result.epoch_losses,
                    "lr_trace": result.lr_trace,
                    "config": config.__dict__,
                },
                fh,
            )
    return result
