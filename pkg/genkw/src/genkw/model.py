"""Model construction and checkpoint IO.

Any compatible local encoder-decoder checkpoint works as the starting
point; ``tiny_model`` builds a small randomly-initialized one so the
pipeline (and its tests) run without downloads.
"""

from __future__ import annotations

from pathlib import Path

import torch
from transformers import T5Config, T5ForConditionalGeneration

from .tokenizer import EOS_ID, PAD_ID, WordTokenizer


def tiny_model(vocab_size: int, seed: int = 0, d_model: int = 32, num_layers: int = 2) -> T5ForConditionalGeneration:
    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=vocab_size,
        d_model=d_model,
        d_kv=d_model // 4,
        d_ff=d_model * 4,
        num_layers=num_layers,
        num_heads=4,
        relative_attention_num_buckets=8,
        dropout_rate=0.0,
        pad_token_id=PAD_ID,
        eos_token_id=EOS_ID,
        decoder_start_token_id=PAD_ID,
    )
    return T5ForConditionalGeneration(config)


def save_checkpoint(model: T5ForConditionalGeneration, tokenizer: WordTokenizer, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(directory)
    tokenizer.save(directory)


def load_checkpoint(directory: str | Path) -> tuple[T5ForConditionalGeneration, WordTokenizer]:
    directory = Path(directory)
    model = T5ForConditionalGeneration.from_pretrained(directory)
    tokenizer = WordTokenizer.load(directory)
    return model, tokenizer
