"""Corpus ingestion and balanced training-set construction.

Monolingual corpora are plain text (one sentence per line); word-labeled
corpora are JSON lines {"tokens": [...], "labels": [...]}. The combined
LID training set undersamples the two monolingual sets to a fixed row
ratio anchored on the code-switched set.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .errors import FormatError, SizeError
from .lid import LanguageTag
from .textnorm import TokenKind, normalize, tokenize


@dataclass(frozen=True)
class LabeledSentence:
    tokens: tuple[str, ...]
    labels: tuple[LanguageTag, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.labels) or not self.tokens:
            raise FormatError(
                f"labeled sentence needs equal non-empty tokens/labels, "
                f"got {len(self.tokens)}/{len(self.labels)}"
            )


def load_monolingual(path, lang: LanguageTag) -> list[LabeledSentence]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            words = [
                t.surface for t in tokenize(normalize(line)) if t.kind is TokenKind.WORD
            ]
            if words:
                rows.append(LabeledSentence(tuple(words), tuple([lang] * len(words))))
    return rows


def load_labeled(path) -> list[LabeledSentence]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                tokens = payload["tokens"]
                labels = payload["labels"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise FormatError(f"{path}:{lineno}: bad labeled row: {e}") from e
            if len(tokens) != len(labels) or not tokens:
                raise FormatError(
                    f"{path}:{lineno}: {len(tokens)} tokens vs {len(labels)} labels"
                )
            try:
                tags = tuple(LanguageTag(l) for l in labels)
            except ValueError as e:
                raise FormatError(f"{path}:{lineno}: {e}") from e
            rows.append(LabeledSentence(tuple(tokens), tags))
    return rows


def save_labeled(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(labeled_to_json(row) + "\n")


def labeled_to_json(row: LabeledSentence) -> str:
    return json.dumps(
        {"tokens": list(row.tokens), "labels": [l.value for l in row.labels]},
        ensure_ascii=False,
    )


def undersample(
    id_rows: list[LabeledSentence],
    en_rows: list[LabeledSentence],
    cs_rows: list[LabeledSentence],
    ratio: tuple[int, int, int] = (5, 5, 1),
    seed: int = 0,
) -> list[LabeledSentence]:
    """All cs rows plus seeded uniform samples (without replacement) of the
    monolingual sets, sized so row counts follow ratio. Output order:
    id block, en block, cs block; within a block the original order."""
    r_id, r_en, r_cs = ratio
    if min(r_id, r_en, r_cs) < 1:
        raise SizeError(f"ratio parts must be positive, got {ratio}")
    if not cs_rows:
        raise SizeError("cs set is empty; the ratio is anchored on it")
    if len(cs_rows) % r_cs:
        raise SizeError(f"cs set size {len(cs_rows)} is not a multiple of {r_cs}")
    unit = len(cs_rows) // r_cs
    need = {"id": r_id * unit, "en": r_en * unit}
    pools = {"id": id_rows, "en": en_rows}
    for name in ("id", "en"):
        if len(pools[name]) < need[name]:
            raise SizeError(
                f"{name} set has {len(pools[name])} rows, needs {need[name]} "
                f"for ratio {ratio}"
            )
    rng = random.Random(seed)
    picked = []
    for name in ("id", "en"):
        idx = sorted(rng.sample(range(len(pools[name])), need[name]))
        picked.extend(pools[name][i] for i in idx)
    return picked + list(cs_rows)
