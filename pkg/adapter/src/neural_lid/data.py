"""Training-file ingestion.

The training format is JSON lines, one sentence per line:
``{"tokens": ["saya", "happy"], "labels": ["ID", "EN"]}``.
"""
from __future__ import annotations

import json

from .config import LABELS


class TrainingFormatError(ValueError):
    """A training row does not match the labeled JSON-lines format."""


class TrainingDataError(ValueError):
    """The training file is structurally fine but unusable (e.g. empty)."""


def load_labeled_rows(path) -> list[tuple[list[str], list[str]]]:
    rows: list[tuple[list[str], list[str]]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                tokens = payload["tokens"]
                labels = payload["labels"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise TrainingFormatError(f"{path}:{lineno}: bad row: {e}") from e
            if not tokens or len(tokens) != len(labels):
                raise TrainingFormatError(
                    f"{path}:{lineno}: {len(tokens)} tokens vs {len(labels)} labels"
                )
            for label in labels:
                if label not in LABELS:
                    raise TrainingFormatError(
                        f"{path}:{lineno}: unknown label {label!r} (expected one of {LABELS})"
                    )
            rows.append(([str(t) for t in tokens], list(labels)))
    if not rows:
        raise TrainingDataError(f"{path}: no training rows")
    return rows
