"""Tokenization and candidate-phrase generation shared by all extractors.

Noun phrases are approximated as maximal stopword-free, punctuation-free
token runs; no POS tagger or lemmatizer is involved.  Candidates never
cross sentence punctuation (``. ! ? ;`` or newline).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import normalize_keyword

__all__ = [
    "Token",
    "Candidate",
    "load_stopwords",
    "bundled_stopwords",
    "tokenize",
    "generate_ngram_candidates",
    "chunk_noun_phrases",
]

DEFAULT_MAX_PHRASE_LEN = 5

_SENTENCE_SPLIT = re.compile(r"[.!?;\n]")
_TOKEN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class Token:
    text: str
    position: int
    is_stopword: bool
    sentence: int = 0


@dataclass
class Candidate:
    """A contiguous token span, deduplicated on its normalized form.

    ``positions`` lists the start position of every occurrence;
    ``frequency == len(positions)`` and ``first_position == positions[0]``.
    """

    tokens: tuple[str, ...]
    normalized_form: str
    first_position: int
    frequency: int
    positions: tuple[int, ...]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one token per line, '#' comments.

    Entries are normalized with the same pipeline as keywords, so a list
    with diacritics matches folded tokens.
    """
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = line.split("#", 1)[0].strip()
            if entry:
                norm = normalize_keyword(entry)
                if norm:
                    words.add(norm)
    return frozenset(words)


def bundled_stopwords(language: str) -> frozenset[str]:
    """Bundled default stopword list, ``"pl"`` or ``"en"``."""
    name = {"pl": "stopwords_pl.txt", "en": "stopwords_en.txt"}.get(language)
    if name is None:
        raise ValueError(f"no bundled stopword list for {language!r}")
    ref = resources.files("kwex.data").joinpath(name)
    with resources.as_file(ref) as path:
        return load_stopwords(path)


def tokenize(text: str, stopwords: frozenset[str] = frozenset()) -> list[Token]:
    """Normalize text and split into tokens on whitespace and punctuation.

    Digit-only tokens are kept.  Sentence indices are assigned from the
    raw text before normalization collapses newlines.
    """
    tokens: list[Token] = []
    position = 0
    for sent_idx, sentence in enumerate(_SENTENCE_SPLIT.split(text)):
        normalized = normalize_keyword(sentence)
        for match in _TOKEN.finditer(normalized):
            tok = match.group()
            tokens.append(
                Token(
                    text=tok,
                    position=position,
                    is_stopword=tok in stopwords,
                    sentence=sent_idx,
                )
            )
            position += 1
    return tokens


def _collect(spans: list[tuple[int, tuple[str, ...]]]) -> list[Candidate]:
    """Deduplicate (start, tokens) spans on normalized form."""
    by_form: dict[str, list[int]] = {}
    span_tokens: dict[str, tuple[str, ...]] = {}
    for start, toks in spans:
        form = " ".join(toks)
        if form not in by_form:
            by_form[form] = []
            span_tokens[form] = toks
        by_form[form].append(start)
    out: list[Candidate] = []
    for form, starts in by_form.items():
        starts.sort()
        out.append(
            Candidate(
                tokens=span_tokens[form],
                normalized_form=form,
                first_position=starts[0],
                frequency=len(starts),
                positions=tuple(starts),
            )
        )
    out.sort(key=lambda c: c.first_position)
    return out


def _sentence_groups(tokens: list[Token]) -> list[list[Token]]:
    groups: list[list[Token]] = []
    current_sentence: int | None = None
    for tok in tokens:
        if tok.sentence != current_sentence:
            groups.append([])
            current_sentence = tok.sentence
        groups[-1].append(tok)
    return groups


def generate_ngram_candidates(
    tokens: list[Token], n_min: int = 1, n_max: int = DEFAULT_MAX_PHRASE_LEN
) -> list[Candidate]:
    """All stopword-free contiguous spans of n_min..n_max tokens.

    Spans never contain a stopword or cross a sentence boundary.
    """
    if not 1 <= n_min <= n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    spans: list[tuple[int, tuple[str, ...]]] = []
    for group in _sentence_groups(tokens):
        for i in range(len(group)):
            if group[i].is_stopword:
                continue
            texts: list[str] = []
            for j in range(i, min(i + n_max, len(group))):
                if group[j].is_stopword:
                    break
                texts.append(group[j].text)
                if j - i + 1 >= n_min:
                    spans.append((group[i].position, tuple(texts)))
    return _collect(spans)


def _stopword_free_runs(tokens: list[Token]) -> list[list[Token]]:
    runs: list[list[Token]] = []
    for group in _sentence_groups(tokens):
        run: list[Token] = []
        for tok in group:
            if tok.is_stopword:
                if run:
                    runs.append(run)
                    run = []
            else:
                run.append(tok)
        if run:
            runs.append(run)
    return runs


def chunk_noun_phrases(
    tokens: list[Token], max_len: int = DEFAULT_MAX_PHRASE_LEN
) -> list[Candidate]:
    """Noun-phrase approximation: maximal stopword-free runs plus all their
    sub-spans of up to ``max_len`` tokens.

    Runs longer than ``max_len`` are still emitted whole, so the pool is a
    superset of the same-length n-gram candidates; this pool's unlimited-rank
    recall is the extractive upper bound.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    spans: list[tuple[int, tuple[str, ...]]] = []
    for run in _stopword_free_runs(tokens):
        texts = [t.text for t in run]
        if len(run) > max_len:
            spans.append((run[0].position, tuple(texts)))
        for i in range(len(run)):
            for j in range(i, min(i + max_len, len(run))):
                spans.append((run[i].position, tuple(texts[i : j + 1])))
    return _collect(spans)
