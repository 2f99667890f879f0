import json
import random
import subprocess
import sys

import pytest

from neural_lid.finetune import finetune

ID_WORDS = ["saya", "suka", "makan", "nasi", "kopi", "pergi", "rumah", "besok",
            "teman", "kantor", "jalan", "minum"]
EN_WORDS = ["coding", "meeting", "deadline", "weekend", "update", "laptop",
            "happy", "project", "speech", "online"]


def synthetic_rows(n=20, seed=7):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        tokens, labels = [], []
        for _ in range(rng.randint(3, 8)):
            if rng.random() < 0.5:
                tokens.append(rng.choice(ID_WORDS))
                labels.append("ID")
            else:
                tokens.append(rng.choice(EN_WORDS))
                labels.append("EN")
        rows.append({"tokens": tokens, "labels": labels})
    return rows


def write_rows(rows, path):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """One-epoch smoke fine-tune on a 20-sentence synthetic set."""
    root = tmp_path_factory.mktemp("adapter")
    train = root / "train.jsonl"
    write_rows(synthetic_rows(20), train)
    out = root / "checkpoint"
    finetune(train, out, epochs=1, seed=0)
    return out


class ProtocolSession:
    """Minimal test-side client for the wire protocol."""

    def __init__(self, checkpoint, max_len=128):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "neural_lid", "serve",
             "--checkpoint", str(checkpoint), "--max-len", str(max_len)],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self.greeting = self.proc.stdout.readline().rstrip("\n")

    def request(self, line):
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()
        return self.proc.stdout.readline().rstrip("\n")

    def close(self):
        self.proc.stdin.close()
        self.proc.wait(timeout=30)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


@pytest.fixture(scope="session")
def session(checkpoint):
    with ProtocolSession(checkpoint) as sess:
        yield sess
