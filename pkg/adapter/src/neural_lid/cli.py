"""Command-line entry: ``neural-lid serve`` and ``neural-lid finetune``.

Training hyperparameter defaults (documented here because the upstream
protocol fixes only the interface): 10 epochs, AdamW at lr 5e-5, batch
size 16, max sequence length 128, CPU device.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import AdapterConfig
from .data import TrainingDataError, TrainingFormatError


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="neural-lid",
        description="Neural ID/EN word-level LID backend (wire protocol v1).",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="answer protocol requests on stdin/stdout")
    p.add_argument("--checkpoint", required=True, help="fine-tuned checkpoint directory")
    p.add_argument("--device", default="cpu", help="torch device (default: cpu)")
    p.add_argument("--max-len", type=int, default=128,
                   help="max subword sequence length; longer requests are chunked (default: 128)")

    p = sub.add_parser("finetune", help="train a checkpoint from labeled JSON lines")
    p.add_argument("--train", required=True, help='JSONL rows {"tokens": [...], "labels": [...]}')
    p.add_argument("--out", required=True, help="checkpoint output directory")
    p.add_argument("--epochs", type=int, default=10, help="training epochs (default: 10)")
    p.add_argument("--base", default=None,
                   help="local multilingual encoder checkpoint to fine-tune; "
                        "omit to train a small fresh model")
    p.add_argument("--lr", type=float, default=5e-5, help="AdamW learning rate (default: 5e-5)")
    p.add_argument("--batch-size", type=int, default=16, help="default: 16")
    p.add_argument("--max-len", type=int, default=128, help="default: 128")
    p.add_argument("--seed", type=int, default=0, help="default: 0")
    p.add_argument("--device", default="cpu", help="default: cpu")
    return top


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            from .serve import serve

            return serve(AdapterConfig(args.checkpoint, args.max_len, args.device))
        from .finetune import finetune

        finetune(
            args.train,
            args.out,
            epochs=args.epochs,
            base=args.base,
            lr=args.lr,
            batch_size=args.batch_size,
            max_len=args.max_len,
            seed=args.seed,
            device=args.device,
        )
        return 0
    except (TrainingFormatError, TrainingDataError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
