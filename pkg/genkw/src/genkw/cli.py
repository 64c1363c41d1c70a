"""Command line: build pairs, fine-tune, generate predictions.

Configuration comes from flags or a YAML file with the TrainConfig /
GenerationConfig field names; flags win over the file.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import yaml

from .data import build_training_pairs, read_corpus, read_pairs_jsonl, read_split_fold, write_pairs_jsonl
from .generate import generate_to_file
from .model import load_checkpoint, save_checkpoint, tiny_model
from .schedule import GenerationConfig, TrainConfig
from .tokenizer import WordTokenizer
from .train import train as run_train


def _load_yaml(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return yaml.safe_load(fh) or {}


def _config_from(cls, overrides: dict, yaml_cfg: dict):
    values = {}
    for name in cls.__dataclass_fields__:
        if overrides.get(name) is not None:
            values[name] = overrides[name]
        elif name in yaml_cfg:
            values[name] = yaml_cfg[name]
    return cls(**values)


@click.group()
def cli() -> None:
    """Text-to-text keyword generation adapter."""


@cli.command("make-pairs")
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--split", "split_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--fold", default="train", show_default=True)
@click.option("--output", required=True, type=click.Path(dir_okay=False))
def make_pairs(corpus, split_path, fold, output) -> None:
    """Build seq2seq training pairs from a corpus and split."""
    pairs, skipped = build_training_pairs(corpus, split_path, fold)
    write_pairs_jsonl(pairs, output)
    click.echo(f"{len(pairs)} pairs written; {skipped} zero-keyword document(s) skipped")


@cli.command("train")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output-dir", required=True, type=click.Path(file_okay=False))
@click.option("--checkpoint", type=click.Path(file_okay=False), default=None,
              help="Starting checkpoint directory; a fresh tiny model is built when omitted.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--peak-lr", type=float, default=None)
@click.option("--warmup-steps", type=int, default=None)
@click.option("--lr-decay-factor-per-epoch", type=float, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--seed", type=int, default=42, show_default=True)
def train_cmd(pairs_path, output_dir, checkpoint, config_path, peak_lr, warmup_steps,
              lr_decay_factor_per_epoch, epochs, batch_size, seed) -> None:
    """Fine-tune on training pairs, checkpointing every epoch."""
    yaml_cfg = _load_yaml(config_path)
    config = _config_from(
        TrainConfig,
        {
            "peak_lr": peak_lr,
            "warmup_steps": warmup_steps,
            "lr_decay_factor_per_epoch": lr_decay_factor_per_epoch,
            "epochs": epochs,
            "batch_size": batch_size,
        },
        yaml_cfg,
    )
    pairs = read_pairs_jsonl(pairs_path)
    if checkpoint:
        model, tokenizer = load_checkpoint(checkpoint)
    else:
        tokenizer = WordTokenizer.build([p.source for p in pairs] + [p.target for p in pairs])
        model = tiny_model(tokenizer.vocab_size, seed=seed)
    result = run_train(model, tokenizer, pairs, config, output_dir=output_dir, seed=seed)
    save_checkpoint(model, tokenizer, Path(output_dir) / "final")
    losses = ", ".join(f"{x:.4f}" for x in result.epoch_losses)
    click.echo(f"trained {config.epochs} epoch(s); mean losses: {losses}")


@cli.command("generate")
@click.option("--checkpoint", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--split", "split_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--fold", default="test", show_default=True)
@click.option("--output", required=True, type=click.Path(dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--num-beams", type=int, default=None)
@click.option("--no-repeat-ngram-size", type=int, default=None)
@click.option("--max-input-tokens", type=int, default=None)
@click.option("--max-target-tokens", type=int, default=None)
@click.option("--method", default="genkw", show_default=True, help="Method name stamped on predictions.")
def generate_cmd(checkpoint, corpus, split_path, fold, output, config_path, num_beams,
                 no_repeat_ngram_size, max_input_tokens, max_target_tokens, method) -> None:
    """Generate keyword predictions for a corpus (or one fold)."""
    yaml_cfg = _load_yaml(config_path)
    config = _config_from(
        GenerationConfig,
        {
            "num_beams": num_beams,
            "no_repeat_ngram_size": no_repeat_ngram_size,
            "max_input_tokens": max_input_tokens,
            "max_target_tokens": max_target_tokens,
        },
        yaml_cfg,
    )
    model, tokenizer = load_checkpoint(checkpoint)
    records = read_corpus(corpus)
    if split_path:
        wanted = set(read_split_fold(split_path, fold))
        records = [r for r in records if r.doc_id in wanted]
    generate_to_file(model, tokenizer, records, config, output, method=method)
    click.echo(f"{len(records)} prediction(s) written to {output}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
