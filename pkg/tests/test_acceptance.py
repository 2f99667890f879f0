"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with `pytest tests/test_acceptance.py -v -s`).

Criteria marked with a runtime budget enforce it with a wall-clock check.
"""
import itertools
import json
import random
import shlex
import string
import subprocess
import sys
import time
from contextlib import contextmanager
from functools import lru_cache

import pytest

from conftest import MOS_EXPECTED_TOTALS, mocklid_cmd, mos_responses_with_cell_means
from csfront.errors import HandshakeError, ProtocolError, TransportError
from csfront.evaluation import align_wer, mos_aggregate, plan_allocation
from csfront.g2p import default_resources, g2p_en, g2p_id
from csfront.lid import (
    ExternalLidSession,
    LanguageTag,
    TagSource,
    classify_tokens,
    train_builtin,
)
from csfront.testset import BilingualDict, CsCase, ParallelPair, build_testset, skip_report
from csfront.textnorm import TokenKind, normalize, tokenize
from test_g2p import EN_LTS_ORACLE, EN_ORACLE, ID_EXCEPTION_ORACLE, ID_ORACLE

ID, EN = LanguageTag.ID, LanguageTag.EN


@contextmanager
def criterion(name, budget=None):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[FAIL] {name}", flush=True)
        raise
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed >= budget:
        print(f"[FAIL] {name}: {elapsed:.2f}s exceeds the {budget:g}s budget", flush=True)
        pytest.fail(f"{name} exceeded its runtime budget")
    print(f"[PASS] {name} ({elapsed:.2f}s)", flush=True)


# ---------------------------------------------------------------------------

def test_mos_table_consistency():
    with criterion("MOS aggregation reproduces the reference Total row", budget=1.0):
        result = mos_aggregate(mos_responses_with_cell_means())
        for model, expected in MOS_EXPECTED_TOTALS.items():
            assert abs(result["totals"][model] - expected) <= 1e-3, model


# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _oracle_distance(ref, hyp):
    if not ref:
        return len(hyp)
    if not hyp:
        return len(ref)
    return min(
        _oracle_distance(ref[1:], hyp[1:]) + (ref[0] != hyp[0]),
        _oracle_distance(ref[1:], hyp) + 1,
        _oracle_distance(ref, hyp[1:]) + 1,
    )


def test_wer_oracle_equivalence():
    with criterion("WER alignment matches the brute-force oracle (~132k pairs)", budget=30.0):
        vocab = ("a", "b", "c")
        refs = [t for n in range(1, 6) for t in itertools.product(vocab, repeat=n)]
        hyps = [t for n in range(0, 6) for t in itertools.product(vocab, repeat=n)]
        assert len(refs) * len(hyps) > 100_000
        for ref in refs:
            ref_list = list(ref)
            for hyp in hyps:
                counts = align_wer(ref_list, list(hyp))
                assert counts.errors == _oracle_distance(ref, hyp)
                assert counts.substitutions + counts.deletions <= counts.ref_len


# ---------------------------------------------------------------------------

def _synth_word_a(rng):
    # open-syllable words: strictly alternating consonant-vowel
    return "".join(
        rng.choice("ktsmngbdjl") + rng.choice("aiueo") for _ in range(rng.randint(2, 4))
    )


def _synth_word_b(rng):
    # cluster-heavy words with vowel teams and consonant codas
    onsets = ["str", "bl", "thr", "sp", "fr", "gr", "sk", "tw", "ch", "wh"]
    nuclei = ["ee", "ea", "ai", "oo", "ou", "oa", "igh"]
    codas = ["ck", "ght", "sh", "th", "rst", "mp", "nd", "lt", "x"]
    suffix = ["", "", "ing", "ed", "tion", "ly"]
    return (
        rng.choice(onsets) + rng.choice(nuclei) + rng.choice(codas) + rng.choice(suffix)
    )


def _distinct_words(make, rng, count, taken):
    words = []
    while len(words) < count:
        w = make(rng)
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def test_lid_lexicon_guarantee_and_heldout_accuracy():
    with criterion("LID lexicon certainty + held-out n-gram accuracy >= 90%", budget=10.0):
        rng = random.Random(20240703)
        taken = set()
        class_a = _distinct_words(_synth_word_a, rng, 500, taken)
        class_b = _distinct_words(_synth_word_b, rng, 500, taken)

        def split(words):
            shuffled = list(words)
            rng.shuffle(shuffled)
            cut = int(len(shuffled) * 0.8)
            return shuffled[:cut], shuffled[cut:]

        train_a, held_a = split(class_a)
        train_b, held_b = split(class_b)

        def sentences(words):
            # every training word appears twice, so it clears min_lex_count
            doubled = words * 2
            rng.shuffle(doubled)
            return [" ".join(doubled[i : i + 6]) for i in range(0, len(doubled), 6)]

        model = train_builtin(sentences(train_a), sentences(train_b))

        only_id = set(model.lexicon_id) - set(model.lexicon_en)
        only_en = set(model.lexicon_en) - set(model.lexicon_id)
        assert set(train_a) <= only_id and set(train_b) <= only_en
        for words, expect in ((only_id, ID), (only_en, EN)):
            for batch_start in range(0, len(words), 50):
                batch = sorted(words)[batch_start : batch_start + 50]
                if not batch:
                    continue
                tagged = classify_tokens(model, tokenize(normalize(" ".join(batch))))
                for tw in tagged:
                    assert tw.lang is expect
                    assert tw.confidence == 1.0
                    assert tw.source is TagSource.LEXICON

        # held-out words are out-of-lexicon by construction: n-gram path only
        gold, predicted = [], []
        held = [(w, ID) for w in held_a] + [(w, EN) for w in held_b]
        rng.shuffle(held)
        for i in range(0, len(held), 5):
            chunk = held[i : i + 5]
            tagged = classify_tokens(
                model, tokenize(normalize(" ".join(w for w, _ in chunk)))
            )
            assert all(tw.source is TagSource.NGRAM for tw in tagged)
            gold.extend(lang for _, lang in chunk)
            predicted.extend(tw.lang for tw in tagged)
        accuracy = sum(p is g for p, g in zip(predicted, gold)) / len(gold)
        assert accuracy >= 0.90, f"held-out word accuracy {accuracy:.3f}"


# ---------------------------------------------------------------------------

def test_g2p_oracle_table_and_closure():
    with criterion("G2P oracle table exact + inventory closure on 10k-word samples"):
        res = default_resources()
        assert len(ID_ORACLE) + len(ID_EXCEPTION_ORACLE) >= 20
        assert len(EN_ORACLE) >= 20
        for word, expected in {**ID_ORACLE, **ID_EXCEPTION_ORACLE}.items():
            assert " ".join(g2p_id(word, res.id_exceptions).phones) == expected, word
        for word, expected in {**EN_ORACLE, **EN_LTS_ORACLE}.items():
            assert " ".join(g2p_en(word, res.en_lexicon, res.inventory).phones) == expected, word

        rng = random.Random(7)
        alphabet = string.ascii_lowercase
        for _ in range(10_000):
            word = "".join(rng.choice(alphabet + "'-") for _ in range(rng.randint(1, 12)))
            if not any(c.isalpha() for c in word):
                continue
            for p in g2p_id(word, res.id_exceptions).phones:
                assert p in res.inventory, (word, p)
        en_sample = list(res.en_lexicon)  # whole shipped dictionary first
        for _ in range(10_000 - len(en_sample)):
            en_sample.append("".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12))))
        for word in en_sample:
            for p in g2p_en(word, res.en_lexicon, res.inventory).phones:
                assert p in res.inventory, (word, p)


# ---------------------------------------------------------------------------

def test_testset_constraints_at_scale():
    with criterion("seven-case constraints hold over 100 synthetic pairs", budget=5.0):
        rng = random.Random(99)
        id_vocab = ["kucing", "makan", "kopi", "besar", "cepat", "gunung",
                    "rumah", "buku", "sekolah", "minum"]
        en_vocab = ["cat", "eat", "coffee", "big", "fast", "mountain",
                    "house", "book", "school", "drink"]
        bilingual = BilingualDict.from_pairs(list(zip(id_vocab, en_vocab)))
        pairs = []
        for i in range(100):
            take = rng.randint(1, 8)  # includes degenerate short pairs
            picks = [rng.randrange(len(id_vocab)) for _ in range(take)]
            pairs.append(
                ParallelPair(
                    " ".join(id_vocab[p] for p in picks),
                    " ".join(en_vocab[p] for p in picks),
                )
            )
        items, skips = build_testset(pairs, bilingual, seed=17)
        assert len(items) == 7 * 100 - len(skips)
        assert skips, "expected some degenerate pairs to be skipped"
        for item in items:
            en_count = sum(1 for l in item.labels if l is EN)
            id_count = sum(1 for l in item.labels if l is ID)
            total = len(item.tokens)
            assert total > 0
            expected = {
                CsCase.EN: lambda: id_count == 0,
                CsCase.ID: lambda: en_count == 0,
                CsCase.ID_CS_1_EN: lambda: en_count == 1 and id_count >= 1,
                CsCase.ID_CS_2_EN: lambda: en_count == 2 and id_count >= 1,
                CsCase.EN_CS_1_ID: lambda: id_count == 1 and en_count >= 1,
                CsCase.EN_CS_2_ID: lambda: id_count == 2 and en_count >= 1,
                CsCase.HALF_HALF: lambda: en_count == total // 2,
            }[item.case]
            assert expected(), (item.case, item.tokens, item.labels)
        report = skip_report(100, items, skips)
        parsed = json.loads(json.dumps(report))  # machine readable
        assert parsed["attempted"] == 700
        assert parsed["emitted"] + len(parsed["skips"]) == 700
        for entry in parsed["skips"]:
            assert set(entry) == {"pair_index", "case", "reason"}


# ---------------------------------------------------------------------------

def test_allocation_plan_combinatorics():
    with criterion("allocation plans: 196 MOS / 56 SUS segments, balanced, each once"):
        models = ["base-en", "base-id", "mixed", "mixed-topline"]
        mos = plan_allocation(
            "MOS", {"texts_per_case": 7, "models": models, "questionnaires": 7}
        )
        seen = set()
        for q in mos["questionnaires"]:
            assert len(q["segments"]) == 28
            for seg in q["segments"]:
                seen.add((seg["case"], seg["text"], seg["model"]))
        assert len(seen) == 196 and mos["total_segments"] == 196

        sus = plan_allocation(
            "SUS", {"sentences": 14, "models": models, "questionnaires": 7}
        )
        seen = set()
        for q in sus["questionnaires"]:
            assert len(q["segments"]) == 8
            per_model = {m: 0 for m in models}
            for seg in q["segments"]:
                seen.add((seg["sentence"], seg["model"]))
                per_model[seg["model"]] += 1
            assert all(v == 2 for v in per_model.values())
        assert len(seen) == 56


# ---------------------------------------------------------------------------

def _mixed_corpus(n=1000):
    rng = random.Random(4242)
    id_words = ["saya", "suka", "makan", "nasi", "kopi", "enak", "banget",
                "nyanyi", "pantai", "besok", "dan", "di", "kantor"]
    en_words = ["coding", "meeting", "deadline", "weekend", "online", "update",
                "speech", "laptop", "happy", "project"]
    puncts = ["", ".", ",", "!", "?", "…"]
    lines = []
    for i in range(n):
        length = rng.randint(1, 10)
        words = []
        for _ in range(length):
            pool = id_words if rng.random() < 0.6 else en_words
            words.append(rng.choice(pool) + rng.choice(puncts))
        if rng.random() < 0.2:
            words.insert(rng.randrange(len(words)), str(rng.randint(0, 2024)))
        if rng.random() < 0.1:
            words[0] = "“" + words[0]
            words[-1] = words[-1] + "”"
        sep = " " if rng.random() < 0.05 else " "
        lines.append(sep.join(words))
    return "\n".join(lines) + "\n"


def test_end_to_end_determinism():
    with criterion("phonemize over 1k sentences: byte-identical across runs and jobs"):
        corpus = _mixed_corpus(1000)
        base_cmd = [sys.executable, "-m", "csfront.cli", "phonemize",
                    "--backend", "extern", "--extern-cmd", shlex.join(mocklid_cmd())]

        def run(jobs):
            proc = subprocess.run(
                base_cmd + ["--jobs", str(jobs)],
                input=corpus.encode("utf-8"),
                capture_output=True,
            )
            assert proc.returncode == 0, proc.stderr.decode()
            return proc.stdout

        first = run(1)
        assert first == run(1), "repeat run differs"
        assert first == run(4), "--jobs 4 differs from --jobs 1"
        assert len(first.splitlines()) == 1000


# ---------------------------------------------------------------------------

def test_protocol_negative_paths():
    with criterion("misbehaving backends raise the distinct error classes"):
        words = ["saya", "suka", "coding"]

        with ExternalLidSession(mocklid_cmd("--mode", "short")) as sess:
            with pytest.raises(ProtocolError):
                sess.label_words(words)

        with ExternalLidSession(mocklid_cmd("--mode", "badlabel")) as sess:
            with pytest.raises(ProtocolError, match="unknown label"):
                sess.label_words(words)

        with pytest.raises(HandshakeError):
            ExternalLidSession(mocklid_cmd("--mode", "nohandshake"), handshake_timeout=2.0)

        sess = ExternalLidSession(mocklid_cmd("--mode", "exit"))
        try:
            with pytest.raises(TransportError):
                sess.label_words(words)
        finally:
            sess.close()

        assert len({ProtocolError, HandshakeError, TransportError}) == 3
        for pair in itertools.permutations([ProtocolError, HandshakeError, TransportError], 2):
            assert not issubclass(*pair)
