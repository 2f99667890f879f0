"""Scriptable mock LID backend speaking the wire protocol v1.

Run as ``python -m csfront.mocklid``. Modes:

* ``rule`` (default): deterministic per-word labels from a hash parity, so
  identical words always get identical labels in any process.
* ``--labels "ID ID EN"``: answer every request with exactly this string.
* ``--mode short``: answer one label fewer than requested.
* ``--mode badlabel``: answer with an unknown first label.
* ``--mode nohandshake``: skip the handshake line.
* ``--mode exit``: exit right after the handshake.
"""
from __future__ import annotations

import argparse
import hashlib
import sys

HANDSHAKE = "LIDPROTO 1"


def rule_label(word: str) -> str:
    digest = hashlib.sha256(word.lower().encode("utf-8")).digest()
    return "EN" if digest[0] & 1 else "ID"


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="csfront-mocklid", add_help=True)
    ap.add_argument("--mode", default="rule",
                    choices=["rule", "short", "badlabel", "nohandshake", "exit"])
    ap.add_argument("--labels", default=None,
                    help="constant response line sent for every request")
    args = ap.parse_args(argv)

    if args.mode != "nohandshake":
        print(HANDSHAKE, flush=True)
    if args.mode == "exit":
        return 0

    for line in sys.stdin:
        words = line.rstrip("\n").split()
        if args.labels is not None:
            print(args.labels, flush=True)
            continue
        labels = [rule_label(w) for w in words]
        if args.mode == "short" and labels:
            labels = labels[:-1]
        if args.mode == "badlabel" and labels:
            labels[0] = "FR"
        print(" ".join(labels), flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
