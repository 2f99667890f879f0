#!/usr/bin/env python3
"""End-to-end LID experiment on synthetic bilingual data.

Generates two phonotactically distinct synthetic vocabularies plus a small
code-switched set, balances them 5:5:1 by undersampling, trains the
built-in lexicon+n-gram classifier, and reports held-out word accuracy.
"""
import argparse
import random

from csfront.corpus import LabeledSentence, undersample
from csfront.lid import LanguageTag, LidConfig, classify_tokens, lid_eval, train_builtin
from csfront.textnorm import normalize, tokenize

ID, EN = LanguageTag.ID, LanguageTag.EN


def word_open_syllables(rng):
    return "".join(rng.choice("ktsmngbdjl") + rng.choice("aiueo")
                   for _ in range(rng.randint(2, 4)))


def word_clustered(rng):
    onsets = ["str", "bl", "thr", "sp", "fr", "gr", "sk", "tw", "ch", "wh"]
    nuclei = ["ee", "ea", "ai", "oo", "ou", "oa", "igh"]
    codas = ["ck", "ght", "sh", "th", "rst", "mp", "nd", "lt", "x"]
    return rng.choice(onsets) + rng.choice(nuclei) + rng.choice(codas)


def make_vocab(make, rng, count, taken):
    out = []
    while len(out) < count:
        w = make(rng)
        if w not in taken:
            taken.add(w)
            out.append(w)
    return out


def to_sentences(words, rng, width=6):
    doubled = words * 2
    rng.shuffle(doubled)
    return [" ".join(doubled[i:i + width]) for i in range(0, len(doubled), width)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vocab-size", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-n", type=int, default=3, help="character n-gram order")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    taken = set()
    vocab_id = make_vocab(word_open_syllables, rng, args.vocab_size, taken)
    vocab_en = make_vocab(word_clustered, rng, args.vocab_size, taken)
    cut = int(args.vocab_size * 0.8)
    train_id, held_id = vocab_id[:cut], vocab_id[cut:]
    train_en, held_en = vocab_en[:cut], vocab_en[cut:]

    id_rows = [LabeledSentence(tuple(s.split()), tuple([ID] * len(s.split())))
               for s in to_sentences(train_id, rng)]
    en_rows = [LabeledSentence(tuple(s.split()), tuple([EN] * len(s.split())))
               for s in to_sentences(train_en, rng)]
    cs_count = max(1, min(len(id_rows), len(en_rows)) // 5)
    cs_rows = []
    for _ in range(cs_count):
        toks, labs = [], []
        for _ in range(6):
            if rng.random() < 0.5:
                toks.append(rng.choice(train_id)); labs.append(ID)
            else:
                toks.append(rng.choice(train_en)); labs.append(EN)
        cs_rows.append(LabeledSentence(tuple(toks), tuple(labs)))

    balanced = undersample(id_rows, en_rows, cs_rows, seed=args.seed)
    print(f"training rows: {len(balanced)} "
          f"(id {5 * len(cs_rows)}, en {5 * len(cs_rows)}, cs {len(cs_rows)})")

    id_sents = [" ".join(r.tokens) for r in balanced if set(r.labels) == {ID}]
    en_sents = [" ".join(r.tokens) for r in balanced if set(r.labels) == {EN}]
    cs_train = [r for r in balanced if len(set(r.labels)) == 2]
    model = train_builtin(id_sents, en_sents, cs_train, LidConfig(n=args.n))
    print(f"lexicons: {len(model.lexicon_id)} ID words, {len(model.lexicon_en)} EN words")

    held = [(w, ID) for w in held_id] + [(w, EN) for w in held_en]
    rng.shuffle(held)
    gold, pred = [], []
    for i in range(0, len(held), 5):
        chunk = held[i:i + 5]
        tagged = classify_tokens(model, tokenize(normalize(" ".join(w for w, _ in chunk))))
        gold.extend(l for _, l in chunk)
        pred.extend(t.lang for t in tagged)
    metrics = lid_eval(pred, gold)
    print(f"held-out word accuracy: {metrics['accuracy']:.4f}")
    for cls in ("ID", "EN"):
        pc = metrics["per_class"][cls]
        print(f"  {cls}: precision {pc['precision']:.4f} "
              f"recall {pc['recall']:.4f} f1 {pc['f1']:.4f}")
    print(f"confusion: {metrics['confusion']}")


if __name__ == "__main__":
    main()
