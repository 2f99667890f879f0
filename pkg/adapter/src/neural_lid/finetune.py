"""Fine-tune a token classifier that labels every word ID or EN.

With ``base`` pointing at a local multilingual encoder checkpoint (the
intended production setup), its weights and tokenizer are reused and a
fresh two-class head is attached. Without one, a small BERT-architecture
model is initialized from scratch together with a WordPiece tokenizer
trained on the training file, which is enough for protocol smoke tests.

Word labels are propagated to every subword during training; serving
reads only the first subword of each word back.
"""
from __future__ import annotations

import logging
import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")

import torch
from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors, trainers
from transformers import (
    AutoModelForTokenClassification,
    AutoTokenizer,
    BertConfig,
    BertForTokenClassification,
    PreTrainedTokenizerFast,
)

from .config import LABELS
from .data import TrainingDataError, load_labeled_rows

log = logging.getLogger("neural_lid")

LABEL2ID = {label: i for i, label in enumerate(LABELS)}
ID2LABEL = {i: label for i, label in enumerate(LABELS)}
_SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def build_fresh_tokenizer(rows, vocab_size: int = 4000) -> PreTrainedTokenizerFast:
    """Case-preserving WordPiece trained on the training sentences."""
    tok = Tokenizer(models.WordPiece(unk_token="[UNK]"))
    tok.normalizer = normalizers.NFC()
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordPieceTrainer(vocab_size=vocab_size, special_tokens=_SPECIALS)
    tok.train_from_iterator((" ".join(tokens) for tokens, _ in rows), trainer)
    tok.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[
            ("[CLS]", tok.token_to_id("[CLS]")),
            ("[SEP]", tok.token_to_id("[SEP]")),
        ],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )


def _fresh_model(vocab_size: int, max_len: int) -> BertForTokenClassification:
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=128,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=256,
        max_position_embeddings=max_len,
        num_labels=len(LABELS),
        id2label=ID2LABEL,
        label2id=LABEL2ID,
    )
    return BertForTokenClassification(config)


def _encode_batch(tokenizer, batch, max_len):
    tokens = [t for t, _ in batch]
    encoding = tokenizer(
        tokens,
        is_split_into_words=True,
        truncation=True,
        max_length=max_len,
        padding=True,
        return_tensors="pt",
    )
    labels = torch.full(encoding["input_ids"].shape, -100, dtype=torch.long)
    for row, (_, word_labels) in enumerate(batch):
        for pos, word_id in enumerate(encoding.word_ids(row)):
            if word_id is not None:
                labels[row, pos] = LABEL2ID[word_labels[word_id]]
    return encoding, labels


def finetune(
    train_path,
    out_dir,
    epochs: int = 10,
    base: str | None = None,
    lr: float = 5e-5,
    batch_size: int = 16,
    max_len: int = 128,
    seed: int = 0,
    device: str = "cpu",
) -> str:
    """Train for the given number of epochs and save a servable checkpoint."""
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    rows = load_labeled_rows(train_path)

    torch.manual_seed(seed)
    if base:
        tokenizer = AutoTokenizer.from_pretrained(base)
        model = AutoModelForTokenClassification.from_pretrained(
            base, num_labels=len(LABELS), id2label=ID2LABEL, label2id=LABEL2ID
        )
    else:
        tokenizer = build_fresh_tokenizer(rows)
        model = _fresh_model(tokenizer.vocab_size, max_len)
    model.to(device)
    model.train()

    optimizer = torch.optim.AdamW(model.parameters(), lr=lr)
    for epoch in range(epochs):
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(rows), batch_size):
            batch = rows[start : start + batch_size]
            encoding, labels = _encode_batch(tokenizer, batch, max_len)
            encoding = {k: v.to(device) for k, v in encoding.items()}
            out = model(**encoding, labels=labels.to(device))
            optimizer.zero_grad()
            out.loss.backward()
            optimizer.step()
            epoch_loss += out.loss.detach().item()
            batches += 1
        log.info("epoch %d/%d: mean loss %.4f", epoch + 1, epochs, epoch_loss / batches)

    os.makedirs(out_dir, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return str(out_dir)
