"""Keyword normalization, mirroring the evaluation toolkit's rules.

This adapter talks to the toolkit only through files, so the
normalization contract is restated here: lowercase, fold Polish
diacritics, NFKD-transliterate the rest, drop what stays non-ASCII,
collapse whitespace.  Only used for deduplication; emitted keywords keep
their surface form.
"""

import unicodedata

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


def normalize_keyword(raw: str) -> str:
    s = raw.lower().translate(_POLISH_FOLD)
    s = unicodedata.normalize("NFKD", s)
    s = "".join(ch for ch in s if not unicodedata.combining(ch))
    s = s.lower()
    s = "".join(
        ch if 0x20 <= ord(ch) <= 0x7E else (" " if ch.isspace() else "") for ch in s
    )
    return " ".join(s.split())
