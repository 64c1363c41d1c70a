"""Toy fine-tunes: loss trend, exact logged LR trace, checkpoint IO."""

from pathlib import Path

import pytest

from genkw.data import TrainingPair
from genkw.model import load_checkpoint, tiny_model
from genkw.schedule import TrainConfig
from genkw.tokenizer import WordTokenizer
from genkw.train import train
from test_schedule import closed_form


def toy_pairs(n: int) -> list[TrainingPair]:
    return [
        TrainingPair(
            f"d{i}",
            f"dokument o temacie t{i % 5} oraz obszarze o{i % 3}",
            f"temat t{i % 5}, obszar o{i % 3}",
        )
        for i in range(n)
    ]


def build(pairs, seed=1):
    tokenizer = WordTokenizer.build([p.source for p in pairs] + [p.target for p in pairs])
    return tiny_model(tokenizer.vocab_size, seed=seed), tokenizer


class TestToyFineTune:
    def test_epoch_loss_strictly_decreases(self, tmp_path):
        pairs = toy_pairs(100)
        model, tokenizer = build(pairs)
        config = TrainConfig(peak_lr=1e-3, warmup_steps=10, epochs=2, batch_size=8)
        result = train(model, tokenizer, pairs, config, output_dir=tmp_path)
        assert len(result.epoch_losses) == 2
        assert result.epoch_losses[1] < result.epoch_losses[0]

    def test_logged_lr_trace_equals_closed_form(self, tmp_path):
        pairs = toy_pairs(100)
        model, tokenizer = build(pairs)
        config = TrainConfig(peak_lr=1e-3, warmup_steps=10, epochs=2, batch_size=8)
        result = train(model, tokenizer, pairs, config)
        steps_per_epoch = -(-len(pairs) // config.batch_size)
        assert len(result.lr_trace) == config.epochs * steps_per_epoch
        for step, epoch, lr in result.lr_trace:
            assert lr == closed_form(config, step, epoch)

    def test_logged_trace_at_pinned_steps_ten_epochs(self):
        # 800 pairs / batch 8 = 100 steps per epoch: the pinned checkpoints
        # (warmup steps 1/50/100, first step of epochs 2..10) come from a
        # real optimizer run, not just the schedule function.
        pairs = toy_pairs(800)
        model, tokenizer = build(pairs, seed=2)
        config = TrainConfig(epochs=10, batch_size=8)
        result = train(model, tokenizer, pairs, config)
        trace = {step: (epoch, lr) for step, epoch, lr in result.lr_trace}
        assert trace[1][1] == closed_form(config, 1, 0)
        assert trace[50][1] == 1.5e-5
        assert trace[100][1] == 3e-5
        for epoch in range(1, 10):
            step = 100 * epoch + 1
            assert trace[step] == (epoch, 3e-5 * 0.7**epoch)

    def test_checkpoints_written_and_loadable(self, tmp_path):
        pairs = toy_pairs(24)
        model, tokenizer = build(pairs)
        config = TrainConfig(peak_lr=1e-3, warmup_steps=5, epochs=2, batch_size=8)
        result = train(model, tokenizer, pairs, config, output_dir=tmp_path)
        assert [Path(p).name for p in result.checkpoint_dirs] == ["epoch01", "epoch02"]
        reloaded, tok2 = load_checkpoint(result.checkpoint_dirs[-1])
        assert tok2.tokens == tokenizer.tokens
        assert (tmp_path / "train_trace.json").exists()

    def test_empty_pairs_rejected(self):
        model, tokenizer = build(toy_pairs(4))
        with pytest.raises(ValueError):
            train(model, tokenizer, [], TrainConfig())
