"""Sentence-level frontend: normalize, tokenize, tag languages, phonemize.

The serialized product is one JSON object per line with the fixed key order
(version, text, words, phones_flat). Language tags are per-word annotation
only; nothing in the output conditions a downstream model on language, so
the phone stream can be consumed directly without language embeddings.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import FormatError
from .g2p import BOUNDARY, PAUSE, G2pResources, PhoneSeq, phonemize_word, spell_id_letters
from .lid import LanguageTag, TaggedWord, classify_tokens
from .textnorm import TokenKind, normalize, tokenize

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class WordEntry:
    surface: str
    lang: LanguageTag
    phones: tuple[str, ...]
    confidence: float
    fallback: bool


@dataclass
class FrontendOutput:
    text: str
    words: list[WordEntry] = field(default_factory=list)
    phones_flat: list[str] = field(default_factory=list)
    version: str = FORMAT_VERSION


def _word_phones(tagged: TaggedWord, resources: G2pResources) -> PhoneSeq:
    if tagged.token.kind is TokenKind.NUMERIC:
        # placeholder: numerals are spelled letter-by-letter through the
        # Indonesian single-letter rules (digits contribute nothing)
        return PhoneSeq(tuple(spell_id_letters(tagged.token.surface)), fallback=True)
    return phonemize_word(tagged.token.surface, tagged.lang, resources)


def phonemize_sentence(raw: str, resources: G2pResources, backend) -> FrontendOutput:
    """Run the whole frontend over one raw sentence."""
    text = normalize(raw)
    tokens = tokenize(text)
    if not tokens:
        return FrontendOutput(text=text)
    tagged = classify_tokens(backend, tokens)
    words: list[WordEntry] = []
    phones_flat: list[str] = []
    prev_was_word = False
    for tw in tagged:
        if tw.token.kind is TokenKind.PUNCT:
            phones_flat.append(PAUSE)
            prev_was_word = False
            continue
        seq = _word_phones(tw, resources)
        words.append(
            WordEntry(
                surface=tw.token.surface,
                lang=tw.lang,
                phones=seq.phones,
                confidence=tw.confidence,
                fallback=seq.fallback,
            )
        )
        if prev_was_word:
            phones_flat.append(BOUNDARY)
        phones_flat.extend(seq.phones)
        prev_was_word = True
    return FrontendOutput(text=text, words=words, phones_flat=phones_flat)


def serialize(out: FrontendOutput) -> str:
    """One-line JSON with fixed key order; inverse of deserialize."""
    payload = {
        "version": out.version,
        "text": out.text,
        "words": [
            {
                "surface": w.surface,
                "lang": w.lang.value,
                "phones": list(w.phones),
                "confidence": w.confidence,
                "fallback": w.fallback,
            }
            for w in out.words
        ],
        "phones_flat": out.phones_flat,
    }
    return json.dumps(payload, ensure_ascii=False)


_WORD_KEYS = {"surface", "lang", "phones", "confidence", "fallback"}
_TOP_KEYS = {"version", "text", "words", "phones_flat"}


def _check_flat_structure(out: FrontendOutput) -> None:
    """phones_flat must be the word phone groups in order, separated by one
    boundary (adjacent words) or pauses (intervening punctuation), with
    pauses also allowed at the edges."""
    flat = out.phones_flat
    i = 0
    for wi, w in enumerate(out.words):
        if wi == 0:
            while i < len(flat) and flat[i] == PAUSE:
                i += 1
        elif i < len(flat) and flat[i] == BOUNDARY:
            i += 1
        else:
            pauses = 0
            while i < len(flat) and flat[i] == PAUSE:
                i += 1
                pauses += 1
            if pauses == 0:
                raise FormatError("phones_flat misses a separator between words")
        for p in w.phones:
            if i >= len(flat) or flat[i] != p:
                raise FormatError("phones_flat does not reconstruct the word phone groups")
            i += 1
    while i < len(flat) and flat[i] == PAUSE:
        i += 1
    if i != len(flat):
        raise FormatError("phones_flat has trailing symbols beyond the word groups")


def deserialize(line: str, inventory=None) -> FrontendOutput:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as e:
        raise FormatError(f"malformed frontend line: {e}") from e
    if not isinstance(payload, dict) or set(payload) != _TOP_KEYS:
        raise FormatError(f"frontend line must have exactly the keys {sorted(_TOP_KEYS)}")
    if payload["version"] != FORMAT_VERSION:
        raise FormatError(f"unknown format version {payload['version']!r}")
    words = []
    for w in payload["words"]:
        if set(w) != _WORD_KEYS:
            raise FormatError(f"word entry must have exactly the keys {sorted(_WORD_KEYS)}")
        if w["lang"] not in (LanguageTag.ID.value, LanguageTag.EN.value):
            raise FormatError(f"unknown language tag {w['lang']!r}")
        words.append(
            WordEntry(
                surface=w["surface"],
                lang=LanguageTag(w["lang"]),
                phones=tuple(w["phones"]),
                confidence=w["confidence"],
                fallback=w["fallback"],
            )
        )
    out = FrontendOutput(
        text=payload["text"], words=words, phones_flat=list(payload["phones_flat"])
    )
    if inventory is not None:
        for sym in out.phones_flat:
            if sym not in (BOUNDARY, PAUSE) and sym not in inventory:
                raise FormatError(f"phone {sym!r} outside the inventory")
        for w in out.words:
            for sym in w.phones:
                if sym not in inventory:
                    raise FormatError(f"phone {sym!r} outside the inventory")
    _check_flat_structure(out)
    return out


def phonemize_batch(
    lines,
    resources: G2pResources,
    make_backend,
    jobs: int = 1,
):
    """Phonemize many sentences, preserving input order.

    make_backend is a zero-argument factory; each worker owns one backend,
    so external sessions are never shared across threads.
    """
    sentences = list(lines)
    if jobs <= 1:
        backend = make_backend()
        try:
            for s in sentences:
                yield serialize(phonemize_sentence(s, resources, backend))
        finally:
            _close_quietly(backend)
        return

    results: list[str | None] = [None] * len(sentences)

    def run_worker(worker_id: int) -> None:
        backend = make_backend()
        try:
            for i in range(worker_id, len(sentences), jobs):
                results[i] = serialize(phonemize_sentence(sentences[i], resources, backend))
        finally:
            _close_quietly(backend)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for f in [pool.submit(run_worker, w) for w in range(jobs)]:
            f.result()
    yield from results  # type: ignore[misc]


def _close_quietly(backend) -> None:
    close = getattr(backend, "close", None)
    if close is not None:
        close()
