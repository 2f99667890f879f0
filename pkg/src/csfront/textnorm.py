"""Text normalization and tokenization.

Raw input is normalized (NFC, whitespace collapse, ASCII quotes/dashes) with
letter case preserved, then split into word / punctuation / numeric tokens
that carry character spans into the normalized string.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum

from .errors import InputError

# Curly quotes and dash variants mapped to plain ASCII.
_ASCII_MAP = {
    "‘": "'", "’": "'", "‚": "'", "‛": "'",
    "“": '"', "”": '"', "„": '"', "‟": '"',
    "‐": "-", "‑": "-", "‒": "-", "–": "-",
    "—": "-", "―": "-", "−": "-",
}

_WS_RE = re.compile(r"\s+")
_CHUNK_RE = re.compile(r"\S+")


class TokenKind(Enum):
    WORD = "word"
    PUNCT = "punct"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Token:
    """One surface unit of a normalized sentence.

    span is a half-open (start, end) character-index pair into the
    normalized text; kind is punct iff the surface has no letter or digit,
    numeric iff it contains a digit.
    """

    surface: str
    span: tuple[int, int]
    kind: TokenKind


def normalize(raw: str | bytes) -> str:
    """Normalize raw text: NFC, single spaces, ASCII quotes/dashes, case kept."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise InputError(f"input is not valid UTF-8: {e}") from e
    text = unicodedata.normalize("NFC", raw)
    text = "".join(_ASCII_MAP.get(ch, ch) for ch in text)
    text = _WS_RE.sub(" ", text).strip()
    return text


def _kind_of(surface: str) -> TokenKind:
    if any(ch.isdigit() for ch in surface):
        return TokenKind.NUMERIC
    if any(ch.isalpha() for ch in surface):
        return TokenKind.WORD
    return TokenKind.PUNCT


def _is_punct_char(ch: str) -> bool:
    return not (ch.isalpha() or ch.isdigit())


def tokenize(text: str) -> list[Token]:
    """Split normalized text into tokens.

    Words are space-delimited; leading/trailing punctuation runs are
    detached as punct tokens; word-internal hyphens and apostrophes stay
    inside the word. The concatenation of surfaces with the original
    separators reconstructs the text exactly.
    """
    tokens: list[Token] = []
    for m in _CHUNK_RE.finditer(text):
        chunk = m.group()
        start = m.start()
        lead = 0
        while lead < len(chunk) and _is_punct_char(chunk[lead]):
            lead += 1
        if lead == len(chunk):
            # all-punctuation chunk
            tokens.append(Token(chunk, (start, start + len(chunk)), TokenKind.PUNCT))
            continue
        trail = len(chunk)
        while trail > lead and _is_punct_char(chunk[trail - 1]):
            trail -= 1
        if lead:
            tokens.append(Token(chunk[:lead], (start, start + lead), TokenKind.PUNCT))
        core = chunk[lead:trail]
        tokens.append(Token(core, (start + lead, start + trail), _kind_of(core)))
        if trail < len(chunk):
            tokens.append(
                Token(chunk[trail:], (start + trail, start + len(chunk)), TokenKind.PUNCT)
            )
    return tokens


def word_surfaces(tokens: list[Token]) -> list[str]:
    """Surfaces of word-kind tokens, in order."""
    return [t.surface for t in tokens if t.kind is TokenKind.WORD]
