import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csfront.corpus import (
    LabeledSentence,
    load_labeled,
    load_monolingual,
    undersample,
)
from csfront.errors import FormatError, SizeError
from csfront.lid import LanguageTag

ID, EN = LanguageTag.ID, LanguageTag.EN


def rows(n, lang):
    return [LabeledSentence((f"w{i}a", f"w{i}b"), (lang, lang)) for i in range(n)]


def test_load_monolingual(tmp_path):
    path = tmp_path / "id.txt"
    path.write_text("makan nasi\n\nsaya suka, coding!\n", encoding="utf-8")
    out = load_monolingual(path, ID)
    assert out == [
        LabeledSentence(("makan", "nasi"), (ID, ID)),
        LabeledSentence(("saya", "suka", "coding"), (ID, ID, ID)),
    ]


def test_load_monolingual_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("", encoding="utf-8")
    assert load_monolingual(path, EN) == []


def test_load_labeled(tmp_path):
    path = tmp_path / "cs.jsonl"
    path.write_text(
        '{"tokens":["saya","happy"],"labels":["ID","EN"]}\n', encoding="utf-8"
    )
    assert load_labeled(path) == [LabeledSentence(("saya", "happy"), (ID, EN))]


def test_load_labeled_length_mismatch(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"tokens":["a"],"labels":["ID","EN"]}\n', encoding="utf-8")
    with pytest.raises(FormatError, match="1"):
        load_labeled(path)


def test_load_labeled_unknown_label(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"tokens":["a"],"labels":["JV"]}\n', encoding="utf-8")
    with pytest.raises(FormatError):
        load_labeled(path)


def test_undersample_counts():
    out = undersample(rows(100, ID), rows(80, EN), rows(10, ID), seed=7)
    assert len(out) == 110
    assert out[-10:] == rows(10, ID)


def test_undersample_insufficient_rows():
    with pytest.raises(SizeError, match="id"):
        undersample(rows(40, ID), rows(80, EN), rows(10, ID))
    with pytest.raises(SizeError, match="en"):
        undersample(rows(100, ID), rows(30, EN), rows(10, ID))


def test_undersample_deterministic():
    a = undersample(rows(100, ID), rows(80, EN), rows(10, ID), seed=42)
    b = undersample(rows(100, ID), rows(80, EN), rows(10, ID), seed=42)
    assert a == b
    c = undersample(rows(100, ID), rows(80, EN), rows(10, ID), seed=43)
    assert a != c  # astronomically unlikely to coincide


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=0, max_value=80),
    st.integers(min_value=0, max_value=80),
    st.integers(min_value=0, max_value=2**32),
)
def test_undersample_ratio_exact(cs_n, id_extra, en_extra, seed):
    id_rows = rows(5 * cs_n + id_extra, ID)
    en_rows = rows(5 * cs_n + en_extra, EN)
    out = undersample(id_rows, en_rows, rows(cs_n, ID), seed=seed)
    assert len(out) == 11 * cs_n
    id_block = out[: 5 * cs_n]
    en_block = out[5 * cs_n : 10 * cs_n]
    assert len(set(id_block)) == len(id_block)  # without replacement
    assert all(r in id_rows for r in id_block)
    assert all(r in en_rows for r in en_block)


def test_generalized_ratio():
    out = undersample(rows(30, ID), rows(20, EN), rows(4, ID), ratio=(3, 2, 1), seed=0)
    assert len(out) == 12 + 8 + 4
