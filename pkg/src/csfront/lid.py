"""Per-word language identification for Indonesian-English mixed text.

Two interchangeable backends label word tokens as ID or EN:

* a built-in statistical classifier (per-class lexicons plus add-alpha
  smoothed character n-grams) trained from monolingual and word-labeled
  corpora, and
* an external process speaking the line-oriented LID wire protocol v1
  (handshake "LIDPROTO 1", one space-joined request line of words, one
  response line of as many labels).

Punctuation and numeric tokens never reach a backend; they take the
sentence-majority language afterwards (ties resolve to ID).
"""
from __future__ import annotations

import json
import math
import select
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    ConfigError,
    DataError,
    FormatError,
    HandshakeError,
    InputError,
    ProtocolError,
    TransportError,
)
from .textnorm import Token, TokenKind, normalize, tokenize

PROTOCOL_HANDSHAKE = "LIDPROTO 1"

# Posterior floor: keeps n-gram confidences strictly inside (0, 1) even when
# the log-likelihood gap underflows exp().
_CONF_FLOOR = 1e-12


class LanguageTag(str, Enum):
    ID = "ID"
    EN = "EN"

    def __str__(self) -> str:  # serialized form
        return self.value


def parse_tag(s: str) -> LanguageTag:
    try:
        return LanguageTag(s)
    except ValueError:
        raise FormatError(f"unknown language label {s!r} (expected ID or EN)") from None


class TagSource(str, Enum):
    LEXICON = "lexicon"
    NGRAM = "ngram"
    TIEBREAK = "tiebreak"
    EXTERNAL = "external"


@dataclass(frozen=True)
class TaggedWord:
    token: Token
    lang: LanguageTag
    confidence: float
    source: TagSource


@dataclass
class LidConfig:
    n: int = 3
    alpha: float = 0.1
    min_lex_count: int = 2


def _char_ngrams(word: str, n: int) -> list[str]:
    # (n-1) boundary pads on each side; n=1 degenerates to plain characters
    s = "^" * (n - 1) + word + "$" * (n - 1)
    return [s[i : i + n] for i in range(len(s) - n + 1)]


@dataclass
class LidModel:
    """Immutable statistical LID backend: lexicons + char n-gram scores.

    ngram_logprob maps each padded n-gram of the shared vocabulary to its
    add-alpha smoothed log-probability per class; unseen_logprob holds the
    reserved mass for grams outside the vocabulary, so each class's
    distribution sums to one.
    """

    n: int = 3
    alpha: float = 0.1
    min_lex_count: int = 2
    lexicon_id: dict[str, int] = field(default_factory=dict)
    lexicon_en: dict[str, int] = field(default_factory=dict)
    ngram_logprob: dict[str, dict[str, float]] = field(default_factory=dict)
    unseen_logprob: dict[str, float] = field(default_factory=dict)

    def loglik(self, word: str, tag: LanguageTag) -> float:
        table = self.ngram_logprob[tag.value]
        unseen = self.unseen_logprob[tag.value]
        return sum(table.get(g, unseen) for g in _char_ngrams(word.lower(), self.n))

    def posterior_id(self, word: str) -> float:
        """P(ID | word) under a uniform class prior."""
        d = self.loglik(word, LanguageTag.EN) - self.loglik(word, LanguageTag.ID)
        try:
            p = 1.0 / (1.0 + math.exp(d))
        except OverflowError:
            p = 0.0
        return min(max(p, _CONF_FLOOR), 1.0 - _CONF_FLOOR)

    def save(self, path: str) -> None:
        payload = {
            "n": self.n,
            "alpha": self.alpha,
            "min_lex_count": self.min_lex_count,
            "lexicon_id": self.lexicon_id,
            "lexicon_en": self.lexicon_en,
            "ngram_logprob": self.ngram_logprob,
            "unseen_logprob": self.unseen_logprob,
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, ensure_ascii=False, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path: str) -> "LidModel":
        with open(path, encoding="utf-8") as f:
            try:
                payload = json.load(f)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}: not a valid model file: {e}") from e
        try:
            return cls(**payload)
        except TypeError as e:
            raise FormatError(f"{path}: not a valid model file: {e}") from e


def _corpus_words(sentences: Iterable[str]) -> list[str]:
    words = []
    for sent in sentences:
        for tok in tokenize(normalize(sent)):
            if tok.kind is TokenKind.WORD:
                words.append(tok.surface.lower())
    return words


def train_builtin(
    id_sentences: Iterable[str],
    en_sentences: Iterable[str],
    cs_sentences: Sequence | None = None,
    config: LidConfig | None = None,
) -> LidModel:
    """Train the built-in classifier from two monolingual text corpora and an
    optional word-labeled code-switched corpus (rows with .tokens/.labels)."""
    cfg = config or LidConfig()
    if cfg.n < 1:
        raise ConfigError(f"n-gram order must be >= 1, got {cfg.n}")
    if cfg.alpha <= 0:
        raise ConfigError(f"smoothing alpha must be > 0, got {cfg.alpha}")
    if cfg.min_lex_count < 1:
        raise ConfigError(f"min_lex_count must be >= 1, got {cfg.min_lex_count}")

    words = {
        LanguageTag.ID: _corpus_words(id_sentences),
        LanguageTag.EN: _corpus_words(en_sentences),
    }
    for row in cs_sentences or []:
        for word, label in zip(row.tokens, row.labels):
            words[LanguageTag(label)].append(word.lower())
    for tag, ws in words.items():
        if not ws:
            raise DataError(f"no training words for class {tag.value}")

    word_counts = {tag: Counter(ws) for tag, ws in words.items()}
    lexicons = {
        tag: {w: c for w, c in sorted(counts.items()) if c >= cfg.min_lex_count}
        for tag, counts in word_counts.items()
    }

    gram_counts = {tag: Counter() for tag in words}
    for tag, ws in words.items():
        for w in ws:
            gram_counts[tag].update(_char_ngrams(w, cfg.n))
    vocab = sorted(set(gram_counts[LanguageTag.ID]) | set(gram_counts[LanguageTag.EN]))

    ngram_logprob: dict[str, dict[str, float]] = {}
    unseen_logprob: dict[str, float] = {}
    for tag in (LanguageTag.ID, LanguageTag.EN):
        total = sum(gram_counts[tag].values())
        # +1 reserves one smoothed slot for any unseen gram
        denom = total + cfg.alpha * (len(vocab) + 1)
        ngram_logprob[tag.value] = {
            g: math.log((gram_counts[tag][g] + cfg.alpha) / denom) for g in vocab
        }
        unseen_logprob[tag.value] = math.log(cfg.alpha / denom)

    return LidModel(
        n=cfg.n,
        alpha=cfg.alpha,
        min_lex_count=cfg.min_lex_count,
        lexicon_id=lexicons[LanguageTag.ID],
        lexicon_en=lexicons[LanguageTag.EN],
        ngram_logprob=ngram_logprob,
        unseen_logprob=unseen_logprob,
    )


def _majority(labels: list[LanguageTag]) -> tuple[LanguageTag, float]:
    """Majority label with agreement fraction; ties and empty input go to ID."""
    if not labels:
        return LanguageTag.ID, 0.5
    n_id = sum(1 for l in labels if l is LanguageTag.ID)
    n_en = len(labels) - n_id
    if n_id >= n_en:
        return LanguageTag.ID, n_id / len(labels)
    return LanguageTag.EN, n_en / len(labels)


def classify_tokens(backend, tokens: list[Token]) -> list[TaggedWord]:
    """Label every token of one sentence; output matches input length/order."""
    if isinstance(backend, LidModel):
        return _classify_builtin(backend, tokens)
    if isinstance(backend, ExternalLidSession):
        return _classify_external(backend, tokens)
    raise ConfigError(f"unsupported LID backend: {type(backend).__name__}")


def _classify_builtin(model: LidModel, tokens: list[Token]) -> list[TaggedWord]:
    tagged: list[TaggedWord | None] = [None] * len(tokens)
    pass1: list[LanguageTag] = []
    deferred: list[int] = []

    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.WORD:
            deferred.append(i)
            continue
        w = tok.surface.lower()
        in_id = w in model.lexicon_id
        in_en = w in model.lexicon_en
        if in_id and not in_en:
            tagged[i] = TaggedWord(tok, LanguageTag.ID, 1.0, TagSource.LEXICON)
            pass1.append(LanguageTag.ID)
        elif in_en and not in_id:
            tagged[i] = TaggedWord(tok, LanguageTag.EN, 1.0, TagSource.LEXICON)
            pass1.append(LanguageTag.EN)
        elif not in_id and not in_en:
            p_id = model.posterior_id(w)
            lang = LanguageTag.ID if p_id >= 0.5 else LanguageTag.EN
            conf = p_id if lang is LanguageTag.ID else 1.0 - p_id
            tagged[i] = TaggedWord(tok, lang, conf, TagSource.NGRAM)
            pass1.append(lang)
        else:
            deferred.append(i)  # in both lexicons: sentence-majority tie-break

    maj, frac = _majority(pass1)
    for i in deferred:
        tagged[i] = TaggedWord(tokens[i], maj, frac, TagSource.TIEBREAK)
    return tagged  # type: ignore[return-value]


def _classify_external(session: "ExternalLidSession", tokens: list[Token]) -> list[TaggedWord]:
    labels = extern_roundtrip(session, tokens)
    tagged: list[TaggedWord | None] = [None] * len(tokens)
    it = iter(labels)
    for i, tok in enumerate(tokens):
        if tok.kind is TokenKind.WORD:
            tagged[i] = TaggedWord(tok, next(it), 1.0, TagSource.EXTERNAL)
    maj, frac = _majority(list(labels))
    for i, tok in enumerate(tokens):
        if tagged[i] is None:
            tagged[i] = TaggedWord(tok, maj, frac, TagSource.TIEBREAK)
    return tagged  # type: ignore[return-value]


def aggregate_sublabels(
    sub_units: Sequence[tuple[str, LanguageTag]], word_map: Sequence[int]
) -> list[LanguageTag]:
    """Lift subword labels to word labels: each word takes its first subword's label."""
    if sum(word_map) != len(sub_units):
        raise FormatError(
            f"word_map covers {sum(word_map)} subwords but got {len(sub_units)}"
        )
    out: list[LanguageTag] = []
    pos = 0
    for count in word_map:
        if count < 1:
            raise FormatError("every word needs at least one subword")
        out.append(sub_units[pos][1])
        pos += count
    return out


def lid_eval(pred: Sequence[LanguageTag], gold: Sequence[LanguageTag]) -> dict:
    """Accuracy, per-class precision/recall/F1 and a gold-by-pred confusion matrix."""
    if len(pred) != len(gold):
        raise InputError(f"pred has {len(pred)} labels, gold has {len(gold)}")
    if not gold:
        raise InputError("cannot evaluate empty label lists")
    confusion = {g.value: {p.value: 0 for p in LanguageTag} for g in LanguageTag}
    for p, g in zip(pred, gold):
        confusion[g.value][p.value] += 1
    correct = sum(confusion[t.value][t.value] for t in LanguageTag)
    per_class = {}
    for t in LanguageTag:
        tp = confusion[t.value][t.value]
        fp = sum(confusion[o.value][t.value] for o in LanguageTag if o is not t)
        fn = sum(confusion[t.value][o.value] for o in LanguageTag if o is not t)
        # vacuously perfect when the class never occurs in pred nor gold
        precision = tp / (tp + fp) if tp + fp else 1.0
        recall = tp / (tp + fn) if tp + fn else 1.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[t.value] = {"precision": precision, "recall": recall, "f1": f1}
    return {
        "accuracy": correct / len(gold),
        "per_class": per_class,
        "confusion": confusion,
    }


class ExternalLidSession:
    """Single-owner handle on an external LID backend process.

    The backend must print the handshake line at startup and answer each
    space-joined word line with exactly one label line. Requests on one
    session are serialized by the caller; spawn one session per worker.
    """

    def __init__(self, command: str | Sequence[str], handshake_timeout: float = 30.0):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise TransportError(f"cannot start LID backend {argv!r}: {e}") from e
        ready, _, _ = select.select([self._proc.stdout], [], [], handshake_timeout)
        if not ready:
            self.close()
            raise HandshakeError(
                f"backend sent no handshake within {handshake_timeout:g}s"
            )
        greeting = self._proc.stdout.readline()
        if greeting.rstrip("\n") != PROTOCOL_HANDSHAKE:
            self.close()
            raise HandshakeError(
                f"expected handshake {PROTOCOL_HANDSHAKE!r}, got {greeting!r}"
            )

    def label_words(self, words: Sequence[str]) -> list[LanguageTag]:
        request = " ".join(words)
        try:
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, ValueError, OSError) as e:
            raise TransportError(f"LID backend closed its request stream: {e}") from e
        response = self._proc.stdout.readline()
        if response == "":
            raise TransportError("LID backend exited before answering")
        fields = response.rstrip("\n").split()
        if len(fields) != len(words):
            raise ProtocolError(
                f"sent {len(words)} words but backend answered {len(fields)} labels"
            )
        labels = []
        for s in fields:
            if s not in (LanguageTag.ID.value, LanguageTag.EN.value):
                raise ProtocolError(f"backend answered unknown label {s!r}")
            labels.append(LanguageTag(s))
        return labels

    def close(self) -> None:
        for stream in (self._proc.stdin, self._proc.stdout):
            try:
                stream.close()
            except OSError:
                pass
        try:
            self._proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()

    def __enter__(self) -> "ExternalLidSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def extern_roundtrip(session: ExternalLidSession, tokens: list[Token]) -> list[LanguageTag]:
    """Send the sentence's word surfaces to the backend, return its labels.

    Punct and numeric tokens are excluded from the request; the caller
    re-inserts them via the sentence-majority tie-break.
    """
    words = [t.surface for t in tokens if t.kind is TokenKind.WORD]
    return session.label_words(words)
