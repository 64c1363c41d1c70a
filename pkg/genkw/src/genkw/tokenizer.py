"""Word-level tokenizer for the self-contained test/debug models.

Real runs can start from any compatible pretrained checkpoint with its
own subword tokenizer; this one exists so that training and beam-search
decoding work offline.  Commas are their own token so the model can emit
comma-separated keyword lists.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

PAD_ID = 0
EOS_ID = 1
UNK_ID = 2
_SPECIALS = ["<pad>", "</s>", "<unk>"]

# Words and commas are separate tokens, in order of appearance.
_TOKEN = re.compile(r"[^\s,]+|,")


class WordTokenizer:
    def __init__(self, vocab: list[str]):
        if vocab[: len(_SPECIALS)] != _SPECIALS:
            raise ValueError("vocab must start with the special tokens")
        self.tokens = vocab
        self.index = {tok: i for i, tok in enumerate(vocab)}

    @classmethod
    def build(cls, texts: list[str]) -> "WordTokenizer":
        seen: set[str] = set()
        for text in texts:
            seen.update(cls._pieces(text))
        return cls(_SPECIALS + sorted(seen))

    @staticmethod
    def _pieces(text: str) -> list[str]:
        return _TOKEN.findall(text)

    def encode(self, text: str, max_len: int) -> list[int]:
        ids = [self.index.get(p, UNK_ID) for p in self._pieces(text)]
        ids = ids[: max_len - 1]
        return ids + [EOS_ID]

    def decode(self, ids) -> str:
        words = []
        for i in ids:
            i = int(i)
            if i in (PAD_ID, EOS_ID):
                continue
            words.append(self.tokens[i] if 0 <= i < len(self.tokens) else "<unk>")
        text = " ".join(words)
        return text.replace(" ,", ",")

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    def save(self, directory: str | Path) -> None:
        path = Path(directory) / "word_vocab.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.tokens, fh, ensure_ascii=False)

    @classmethod
    def load(cls, directory: str | Path) -> "WordTokenizer":
        path = Path(directory) / "word_vocab.json"
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))
