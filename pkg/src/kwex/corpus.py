"""Corpus ingestion, keyword normalization and vocabulary statistics.

A corpus is a JSONL file with one record per line:

    {"id": str, "title": str, "abstract": str, "keywords": [str],
     "domains": [str]?, "lemma_text": str?}

All keyword matching in the toolkit happens on *normalized* forms:
lowercased, Polish diacritics folded to ASCII, other non-ASCII
transliterated via NFKD (or dropped), whitespace collapsed.
"""

from __future__ import annotations

import json
import logging
import math
import statistics
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "CorpusError",
    "Document",
    "KeywordForm",
    "VocabStats",
    "normalize_keyword",
    "parse_corpus",
    "load_corpus",
    "compute_vocab_stats",
    "filter_by_min_label_freq",
]

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    """Raised for malformed or inconsistent corpus data."""


# Fixed, exhaustive folding table for Polish letters.  NFKD does not
# decompose "ł", hence the explicit table; everything else non-ASCII goes
# through NFKD + combining-mark stripping and is dropped if still non-ASCII.
_POLISH_FOLD = str.maketrans(
    {
        "ą": "a",
        "ć": "c",
        "ę": "e",
        "ł": "l",
        "ń": "n",
        "ó": "o",
        "ś": "s",
        "ź": "z",
        "ż": "z",
    }
)

_TERMINAL_PUNCT = ".!?;:"


def normalize_keyword(raw: str, underscores_as_spaces: bool = False) -> str:
    """Normalize a keyword (or any short string) to its canonical form.

    Pipeline: optional underscore-to-space mapping (for classifier-label
    ingestion), lowercasing, Polish diacritic folding, NFKD transliteration
    with combining marks stripped, removal of remaining non-ASCII and
    control characters, whitespace trim/collapse.  Idempotent.
    """
    s = raw
    if underscores_as_spaces:
        s = s.replace("_", " ")
    s = s.lower()
    s = s.translate(_POLISH_FOLD)
    s = unicodedata.normalize("NFKD", s)
    s = "".join(ch for ch in s if not unicodedata.combining(ch))
    # NFKD can surface cased letters (math symbols, roman numerals), so
    # lowercase once more before stripping to printable ASCII.
    s = s.lower()
    s = "".join(
        ch if 0x20 <= ord(ch) <= 0x7E else (" " if ch.isspace() else "")
        for ch in s
    )
    return " ".join(s.split())


@dataclass(frozen=True)
class KeywordForm:
    """A keyword surface string together with its normalized form."""

    surface: str
    normalized: str

    @classmethod
    def from_surface(cls, surface: str, underscores_as_spaces: bool = False) -> "KeywordForm":
        return cls(surface=surface, normalized=normalize_keyword(surface, underscores_as_spaces))


@dataclass
class Document:
    """One corpus record.

    ``keywords`` holds the authored surface strings, deduplicated on
    normalized form at load time (first-seen surface wins);
    ``keywords_normalized`` is the parallel list of canonical forms.
    """

    id: str
    title: str
    abstract: str
    keywords: list[str] = field(default_factory=list)
    domains: list[str] | None = None
    lemma_text: str | None = None
    keywords_normalized: list[str] = field(default_factory=list)

    @classmethod
    def create(
        cls,
        id: str,
        title: str = "",
        abstract: str = "",
        keywords: list[str] | None = None,
        domains: list[str] | None = None,
        lemma_text: str | None = None,
        underscores_as_spaces: bool = False,
    ) -> "Document":
        """Construct a document, normalizing and deduplicating keywords."""
        surfaces: list[str] = []
        normalized: list[str] = []
        seen: set[str] = set()
        for kw in keywords or []:
            norm = normalize_keyword(kw, underscores_as_spaces)
            if norm and norm not in seen:
                seen.add(norm)
                surfaces.append(kw)
                normalized.append(norm)
        return cls(
            id=id,
            title=title,
            abstract=abstract,
            keywords=surfaces,
            domains=domains,
            lemma_text=lemma_text,
            keywords_normalized=normalized,
        )

    @property
    def text(self) -> str:
        """Title and abstract concatenated for extraction and generation.

        A ``". "`` separator is inserted when the title lacks terminal
        punctuation, so the title reads as its own sentence.
        """
        if not self.title:
            return self.abstract
        if not self.abstract:
            return self.title
        sep = " " if self.title.rstrip()[-1] in _TERMINAL_PUNCT else ". "
        return self.title.rstrip() + sep + self.abstract

    def extraction_text(self, use_lemmas: bool = False) -> str:
        """Text fed to extractors; the pre-lemmatized field when requested."""
        if use_lemmas and self.lemma_text:
            return self.lemma_text
        return self.text

    @property
    def gold_set(self) -> frozenset[str]:
        return frozenset(self.keywords_normalized)

    def keyword_forms(self) -> list[KeywordForm]:
        return [
            KeywordForm(surface=s, normalized=n)
            for s, n in zip(self.keywords, self.keywords_normalized)
        ]


def _parse_record(obj: object, underscores_as_spaces: bool) -> Document:
    if not isinstance(obj, dict):
        raise CorpusError("record is not a JSON object")
    doc_id = obj.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError('missing or empty "id"')
    title = obj.get("title", "")
    abstract = obj.get("abstract", "")
    if not isinstance(title, str) or not isinstance(abstract, str):
        raise CorpusError('"title" and "abstract" must be strings')
    if not title and not abstract:
        raise CorpusError('both "title" and "abstract" are empty')
    keywords = obj.get("keywords", [])
    if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
        raise CorpusError('"keywords" must be a list of strings')
    domains = obj.get("domains")
    if domains is not None and (
        not isinstance(domains, list) or not all(isinstance(d, str) for d in domains)
    ):
        raise CorpusError('"domains" must be a list of strings')
    lemma_text = obj.get("lemma_text")
    if lemma_text is not None and not isinstance(lemma_text, str):
        raise CorpusError('"lemma_text" must be a string')
    return Document.create(
        id=doc_id,
        title=title,
        abstract=abstract,
        keywords=keywords,
        domains=domains,
        lemma_text=lemma_text,
        underscores_as_spaces=underscores_as_spaces,
    )


def load_corpus(
    path: str | Path,
    strictness: str = "strict",
    underscores_as_spaces: bool = False,
) -> tuple[list[Document], list[tuple[int, str]]]:
    """Parse a JSONL corpus, returning documents plus a skip report.

    Returns ``(documents, skipped)`` where ``skipped`` is a list of
    ``(line_number, reason)`` pairs (always empty in strict mode, which
    raises instead).  Duplicate ids abort in either mode.
    """
    if strictness not in ("strict", "skip_invalid"):
        raise ValueError(f"unknown strictness: {strictness!r}")
    docs: list[Document] = []
    skipped: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc = _parse_record(obj, underscores_as_spaces)
            except (json.JSONDecodeError, CorpusError) as exc:
                if strictness == "strict":
                    raise CorpusError(f"line {lineno}: {exc}") from exc
                skipped.append((lineno, str(exc)))
                continue
            if doc.id in seen_ids:
                raise CorpusError(f"line {lineno}: duplicate id {doc.id!r}")
            seen_ids.add(doc.id)
            docs.append(doc)
    return docs, skipped


def parse_corpus(
    path: str | Path,
    strictness: str = "strict",
    underscores_as_spaces: bool = False,
) -> list[Document]:
    """Parse a JSONL corpus into documents, in file order.

    In ``skip_invalid`` mode malformed lines are counted and logged; in
    ``strict`` mode the first malformed line aborts with its line number.
    """
    docs, skipped = load_corpus(path, strictness, underscores_as_spaces)
    if skipped:
        logger.warning("parse_corpus: %d malformed line(s) skipped in %s", len(skipped), path)
    return docs


def _doc_frequency(docs: list[Document]) -> Counter[str]:
    """Document frequency of each normalized keyword (distinct documents)."""
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(doc.gold_set)
    return df


@dataclass
class VocabStats:
    """Vocabulary-level and per-document keyword statistics.

    Length statistics are over the distinct normalized vocabulary; the
    per-document statistics are over documents with at least one keyword.
    Means are ``None`` on an empty vocabulary.
    """

    distinct_count: int
    count_used_more_than_once: int
    mean_keyword_length_words: float | None
    sd_keyword_length_words: float | None
    mean_keywords_per_doc: float | None
    median_keywords_per_doc: float | None
    docs_total: int
    docs_with_keywords: int
    doc_frequency: Counter[str] = field(repr=False, default_factory=Counter)

    def count_with_min_docs(self, n: int) -> int:
        """Number of distinct keywords assigned to at least ``n`` documents."""
        return sum(1 for c in self.doc_frequency.values() if c >= n)

    def to_json_dict(self, min_docs_queries: tuple[int, ...] = (10,)) -> dict:
        out: dict = {
            "distinct_count": self.distinct_count,
            "count_used_more_than_once": self.count_used_more_than_once,
            "count_with_min_docs": {
                str(n): self.count_with_min_docs(n) for n in min_docs_queries
            },
            "docs_total": self.docs_total,
            "docs_with_keywords": self.docs_with_keywords,
        }
        for name in (
            "mean_keyword_length_words",
            "sd_keyword_length_words",
            "mean_keywords_per_doc",
            "median_keywords_per_doc",
        ):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def compute_vocab_stats(docs: list[Document]) -> VocabStats:
    """Compute vocabulary statistics over normalized keyword forms.

    Keyword length in words is the number of space-separated tokens of the
    normalized form; document frequency counts distinct documents.
    """
    df = _doc_frequency(docs)
    distinct = len(df)
    more_than_once = sum(1 for c in df.values() if c >= 2)
    per_doc = [len(d.keywords_normalized) for d in docs if d.keywords_normalized]

    if distinct:
        lengths = [len(kw.split(" ")) for kw in df]
        mean_len = sum(lengths) / distinct
        sd_len = math.sqrt(sum((x - mean_len) ** 2 for x in lengths) / distinct)
    else:
        mean_len = sd_len = None

    if per_doc:
        mean_per_doc = sum(per_doc) / len(per_doc)
        median_per_doc = float(statistics.median(per_doc))
    else:
        mean_per_doc = median_per_doc = None

    return VocabStats(
        distinct_count=distinct,
        count_used_more_than_once=more_than_once,
        mean_keyword_length_words=mean_len,
        sd_keyword_length_words=sd_len,
        mean_keywords_per_doc=mean_per_doc,
        median_keywords_per_doc=median_per_doc,
        docs_total=len(docs),
        docs_with_keywords=len(per_doc),
        doc_frequency=df,
    )


def filter_by_min_label_freq(docs: list[Document], min_docs: int) -> list[Document]:
    """Restrict every document's keywords to labels occurring in >= ``min_docs``
    documents of the input.

    The document set itself is unchanged; documents may end up with empty
    keyword lists.
    """
    if min_docs < 1:
        raise ValueError("min_docs must be >= 1")
    df = _doc_frequency(docs)
    keep = {kw for kw, c in df.items() if c >= min_docs}
    out: list[Document] = []
    for doc in docs:
        surfaces = [s for s, n in zip(doc.keywords, doc.keywords_normalized) if n in keep]
        normalized = [n for n in doc.keywords_normalized if n in keep]
        out.append(
            Document(
                id=doc.id,
                title=doc.title,
                abstract=doc.abstract,
                keywords=surfaces,
                domains=doc.domains,
                lemma_text=doc.lemma_text,
                keywords_normalized=normalized,
            )
        )
    return out
