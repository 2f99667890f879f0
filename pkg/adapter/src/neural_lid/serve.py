"""Serve a fine-tuned checkpoint over the LID wire protocol v1.

Startup prints the handshake line; every request line of space-joined
words is answered with one line of as many labels. Each word takes the
predicted class of its first subword. Inference is deterministic for a
fixed checkpoint.
"""
from __future__ import annotations

import os
import sys

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")

import torch
from transformers import AutoModelForTokenClassification, AutoTokenizer

from .config import HANDSHAKE, LABELS, AdapterConfig


class _Classifier:
    def __init__(self, config: AdapterConfig):
        self.tokenizer = AutoTokenizer.from_pretrained(config.checkpoint)
        self.model = AutoModelForTokenClassification.from_pretrained(config.checkpoint)
        id2label = self.model.config.id2label
        if sorted(id2label.values()) != sorted(LABELS):
            raise ValueError(
                f"checkpoint labels {sorted(id2label.values())} are not {sorted(LABELS)}"
            )
        self.model.to(config.device)
        self.model.eval()
        self.max_len = config.max_seq_len
        self.device = config.device

    def _label_chunk(self, words: list[str]) -> list[str]:
        encoding = self.tokenizer(
            [words],
            is_split_into_words=True,
            truncation=True,
            max_length=self.max_len,
            return_tensors="pt",
        )
        with torch.no_grad():
            logits = self.model(
                **{k: v.to(self.device) for k, v in encoding.items()}
            ).logits[0]
        predicted = logits.argmax(dim=-1).tolist()
        first_subword: dict[int, int] = {}
        for pos, word_id in enumerate(encoding.word_ids(0)):
            if word_id is not None and word_id not in first_subword:
                first_subword[word_id] = predicted[pos]
        # any word the tokenizer dropped entirely still needs a label
        return [
            self.model.config.id2label[first_subword[i]] if i in first_subword else LABELS[0]
            for i in range(len(words))
        ]

    def label_words(self, words: list[str]) -> list[str]:
        if not words:
            return []
        if len(self.tokenizer(words, is_split_into_words=True)["input_ids"]) <= self.max_len:
            return self._label_chunk(words)
        if len(words) == 1:
            return self._label_chunk(words)  # truncated single giant word
        mid = len(words) // 2
        return self.label_words(words[:mid]) + self.label_words(words[mid:])


def serve_loop(classifier, stdin, stdout) -> int:
    print(HANDSHAKE, file=stdout, flush=True)
    for line in stdin:
        words = line.rstrip("\n").split()
        try:
            labels = classifier.label_words(words)
        except Exception as e:  # inference failure: error line, then exit
            print(f"ERROR {type(e).__name__}", file=stdout, flush=True)
            print(f"inference failed: {e}", file=sys.stderr, flush=True)
            return 1
        print(" ".join(labels), file=stdout, flush=True)
    return 0


def serve(config: AdapterConfig, stdin=None, stdout=None) -> int:
    classifier = _Classifier(config)  # any load failure exits before the handshake
    return serve_loop(classifier, stdin or sys.stdin, stdout or sys.stdout)
