#!/usr/bin/env python3
"""Phonemize a few mixed-language sentences and show the frontend output.

Trains a throwaway built-in LID model on a handful of sentences, then runs
the full normalize/tokenize/tag/phonemize pipeline.
"""
import argparse

from csfront.g2p import default_resources
from csfront.lid import train_builtin
from csfront.pipeline import phonemize_sentence, serialize

ID_SENTS = [
    "saya suka makan nasi goreng di kantor",
    "besok kita pergi ke pantai bersama teman",
    "dia sedang belajar bernyanyi dan menari",
    "kopi ini enak sekali dan tidak mahal",
    "saya harus pergi ke pasar besok pagi",
]
EN_SENTS = [
    "i like to eat fried rice at the office",
    "tomorrow we go to the beach with friends",
    "she is learning to sing and dance",
    "this coffee is very good and not expensive",
    "i have to go to the market tomorrow morning",
]
DEMO = [
    "Saya suka coding banget.",
    "Besok ada meeting dengan teman kantor.",
    "Deadline project itu besok!",
    "Kopi ini enak, tapi laptop saya lambat.",
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sentences", nargs="*", default=DEMO)
    args = ap.parse_args()

    resources = default_resources()
    model = train_builtin(ID_SENTS, EN_SENTS)
    for raw in args.sentences:
        out = phonemize_sentence(raw, resources, model)
        print(serialize(out))
        rendered = " ".join(
            f"{w.surface}/{w.lang.value}[{' '.join(w.phones)}]" for w in out.words
        )
        print(f"# {rendered}")


if __name__ == "__main__":
    main()
