"""Beam-search generation over corpus documents, emitting the evaluation
toolkit's predictions JSONL."""

from __future__ import annotations

import logging
from pathlib import Path

import torch

from .data import CorpusRecord, parse_model_output, write_predictions_jsonl
from .schedule import GenerationConfig
from .tokenizer import PAD_ID, WordTokenizer

logger = logging.getLogger(__name__)


def generate_keywords(
    model,
    tokenizer: WordTokenizer,
    records: list[CorpusRecord],
    config: GenerationConfig,
    batch_size: int = 8,
) -> list[tuple[str, list[str]]]:
    """Ordered (doc_id, keywords) rows; failures yield empty predictions."""
    model.eval()
    rows: list[tuple[str, list[str]]] = []
    for start in range(0, len(records), batch_size):
        batch = records[start : start + batch_size]
        encoded = [tokenizer.encode(r.text, config.max_input_tokens) for r in batch]
        width = max(len(e) for e in encoded)
        input_ids = torch.full((len(batch), width), PAD_ID, dtype=torch.long)
        attention = torch.zeros((len(batch), width), dtype=torch.long)
        for i, ids in enumerate(encoded):
            input_ids[i, : len(ids)] = torch.tensor(ids)
            attention[i, : len(ids)] = 1
        try:
            with torch.no_grad():
                outputs = model.generate(
                    input_ids=input_ids,
                    attention_mask=attention,
                    num_beams=config.num_beams,
                    no_repeat_ngram_size=config.no_repeat_ngram_size,
                    max_length=config.max_target_tokens,
                    do_sample=False,
                )
            for rec, out in zip(batch, outputs):
                rows.append((rec.doc_id, parse_model_output(tokenizer.decode(out))))
        except Exception:
            # Retry one document at a time so a single bad input costs only
            # its own prediction.
            for i, rec in enumerate(batch):
                try:
                    with torch.no_grad():
                        out = model.generate(
                            input_ids=input_ids[i : i + 1],
                            attention_mask=attention[i : i + 1],
                            num_beams=config.num_beams,
                            no_repeat_ngram_size=config.no_repeat_ngram_size,
                            max_length=config.max_target_tokens,
                            do_sample=False,
                        )[0]
                    rows.append((rec.doc_id, parse_model_output(tokenizer.decode(out))))
                except Exception:
                    logger.warning("generation failed for %s; empty prediction", rec.doc_id, exc_info=True)
                    rows.append((rec.doc_id, []))
    return rows


def generate_to_file(
    model,
    tokenizer: WordTokenizer,
    records: list[CorpusRecord],
    config: GenerationConfig,
    path: str | Path,
    method: str = "genkw",
    batch_size: int = 8,
) -> None:
    write_predictions_jsonl(generate_keywords(model, tokenizer, records, config, batch_size), path, method)
