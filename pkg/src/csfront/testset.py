"""Seven-case code-switching test sets and SUS sentence generation.

Each parallel ID/EN sentence pair yields up to seven items: the two
monolingual copies, four unbalanced variants with one or two words swapped
into the other language, and a half-and-half variant. Swap candidates must
be content-like words (length >= 3, not stopwords) with a counterpart from
the pair's word alignment or a bilingual dictionary; pairs without enough
candidates yield skip records instead of items.
"""
from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import FormatError, GenerationError, TemplateError
from .lid import LanguageTag
from .textnorm import TokenKind, normalize, tokenize


class CsCase(Enum):
    EN = "EN"
    ID = "ID"
    ID_CS_1_EN = "ID_CS_1_EN"
    ID_CS_2_EN = "ID_CS_2_EN"
    EN_CS_1_ID = "EN_CS_1_ID"
    EN_CS_2_ID = "EN_CS_2_ID"
    HALF_HALF = "HALF_HALF"


# SUS items carry this in place of a case value when serialized.
SUS_CASE = "SUS"


@dataclass(frozen=True)
class ParallelPair:
    id_sentence: str
    en_sentence: str
    alignment: tuple[tuple[int, int], ...] | None = None


@dataclass(frozen=True)
class TestItem:
    __test__ = False  # keep pytest from collecting this dataclass

    case: CsCase | None  # None marks SUS items
    tokens: tuple[str, ...]
    labels: tuple[LanguageTag, ...]
    pair_index: int


@dataclass(frozen=True)
class Skip:
    pair_index: int
    case: CsCase
    reason: str


@dataclass
class BilingualDict:
    id_to_en: dict[str, str]
    en_to_id: dict[str, str]

    @classmethod
    def from_pairs(cls, pairs) -> "BilingualDict":
        id_to_en: dict[str, str] = {}
        en_to_id: dict[str, str] = {}
        for id_word, en_word in pairs:
            id_to_en.setdefault(id_word.lower(), en_word)
            en_to_id.setdefault(en_word.lower(), id_word)
        return cls(id_to_en, en_to_id)

    @classmethod
    def load(cls, path) -> "BilingualDict":
        rows = []
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 2:
                    raise FormatError(f"{path}:{lineno}: expected ID<TAB>EN")
                rows.append((fields[0].strip(), fields[1].strip()))
        return cls.from_pairs(rows)


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as f:
        return frozenset(w.strip().lower() for w in f if w.strip())


def _words(sentence: str) -> list[str]:
    return [t.surface for t in tokenize(normalize(sentence)) if t.kind is TokenKind.WORD]


def _child_rng(seed: int, pair_index: int, tag: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{pair_index}:{tag}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _validate_alignment(pair: ParallelPair, n_id: int, n_en: int) -> dict[int, int]:
    if pair.alignment is None:
        return {}
    seen_id: set[int] = set()
    seen_en: set[int] = set()
    mapping: dict[int, int] = {}
    for i, j in pair.alignment:
        if not (0 <= i < n_id and 0 <= j < n_en):
            raise FormatError(f"alignment ({i},{j}) out of range for {n_id}x{n_en} words")
        if i in seen_id or j in seen_en:
            raise FormatError(f"alignment ({i},{j}) reuses an already-aligned word")
        seen_id.add(i)
        seen_en.add(j)
        mapping[i] = j
    return mapping


def _eligible(
    tokens: list[str],
    counterparts: dict[int, str],
    stopwords: frozenset[str],
) -> list[int]:
    return [
        i
        for i, w in enumerate(tokens)
        if len(w) >= 3 and w.lower() not in stopwords and i in counterparts
    ]


def _counterparts(
    src_tokens: list[str],
    dst_tokens: list[str],
    align: dict[int, int],
    word_map: dict[str, str],
) -> dict[int, str]:
    """Replacement word per source index: alignment first, dictionary second."""
    out: dict[int, str] = {}
    for i, w in enumerate(src_tokens):
        if i in align:
            out[i] = dst_tokens[align[i]]
        elif w.lower() in word_map:
            out[i] = word_map[w.lower()]
    return out


def _swap_item(
    case: CsCase,
    pair_index: int,
    tokens: list[str],
    base_lang: LanguageTag,
    swap_lang: LanguageTag,
    counterparts: dict[int, str],
    stopwords: frozenset[str],
    n_swaps: int,
    rng: random.Random,
) -> TestItem | Skip:
    candidates = _eligible(tokens, counterparts, stopwords)
    if len(candidates) < n_swaps:
        return Skip(pair_index, case, "insufficient eligible words")
    if n_swaps >= len(tokens) and case is not CsCase.HALF_HALF:
        return Skip(pair_index, case, "no base-language word would remain")
    chosen = sorted(rng.sample(candidates, n_swaps))
    out_tokens = list(tokens)
    labels = [base_lang] * len(tokens)
    for i in chosen:
        out_tokens[i] = counterparts[i]
        labels[i] = swap_lang
    return TestItem(case, tuple(out_tokens), tuple(labels), pair_index)


def build_case(
    pair: ParallelPair,
    case: CsCase,
    bilingual: BilingualDict | None = None,
    seed: int = 0,
    pair_index: int = 0,
    stopwords_id: frozenset[str] = frozenset(),
    stopwords_en: frozenset[str] = frozenset(),
) -> TestItem | Skip:
    id_tokens = _words(pair.id_sentence)
    en_tokens = _words(pair.en_sentence)
    if not id_tokens or not en_tokens:
        raise FormatError(f"pair {pair_index}: both sentences need at least one word")
    align_id_en = _validate_alignment(pair, len(id_tokens), len(en_tokens))

    if case is CsCase.EN:
        return TestItem(case, tuple(en_tokens),
                        tuple([LanguageTag.EN] * len(en_tokens)), pair_index)
    if case is CsCase.ID:
        return TestItem(case, tuple(id_tokens),
                        tuple([LanguageTag.ID] * len(id_tokens)), pair_index)

    rng = _child_rng(seed, pair_index, case.value)
    id_map = bilingual.id_to_en if bilingual else {}
    en_map = bilingual.en_to_id if bilingual else {}
    align_en_id = {j: i for i, j in align_id_en.items()}

    if case in (CsCase.ID_CS_1_EN, CsCase.ID_CS_2_EN, CsCase.HALF_HALF):
        counterparts = _counterparts(id_tokens, en_tokens, align_id_en, id_map)
        n = {CsCase.ID_CS_1_EN: 1, CsCase.ID_CS_2_EN: 2}.get(case, len(id_tokens) // 2)
        return _swap_item(case, pair_index, id_tokens, LanguageTag.ID, LanguageTag.EN,
                          counterparts, stopwords_id, n, rng)

    counterparts = _counterparts(en_tokens, id_tokens, align_en_id, en_map)
    n = 1 if case is CsCase.EN_CS_1_ID else 2
    return _swap_item(case, pair_index, en_tokens, LanguageTag.EN, LanguageTag.ID,
                      counterparts, stopwords_en, n, rng)


def build_testset(
    pairs: list[ParallelPair],
    bilingual: BilingualDict | None = None,
    seed: int = 0,
    stopwords_id: frozenset[str] = frozenset(),
    stopwords_en: frozenset[str] = frozenset(),
) -> tuple[list[TestItem], list[Skip]]:
    """All seven cases for every pair, in case-enum order per pair."""
    items: list[TestItem] = []
    skips: list[Skip] = []
    for idx, pair in enumerate(pairs):
        for case in CsCase:
            result = build_case(pair, case, bilingual, seed, idx,
                                stopwords_id, stopwords_en)
            if isinstance(result, Skip):
                skips.append(result)
            else:
                items.append(result)
    return items, skips


# ---------------------------------------------------------------------------
# SUS: syntactically plausible, semantically nonsensical fillers.

_SLOT_RE = re.compile(r"^\{(ID|EN):([a-z]+)\}$")


def gen_sus(
    templates: list[str],
    lexicons: dict[tuple[str, str], list[str]],
    n: int,
    seed: int = 0,
    max_attempts_per_sentence: int = 200,
) -> list[TestItem]:
    """n distinct sentences by seeded template + slot filling.

    Slots look like {EN:verb}; fixed template words are Indonesian and
    labeled ID. Duplicates are resampled up to the attempt bound.
    """
    if not templates:
        raise TemplateError("no templates given")
    parsed = []
    for tpl in templates:
        fields = tpl.split()
        if not fields:
            raise TemplateError("empty template")
        slots = []
        for w in fields:
            m = _SLOT_RE.match(w)
            if m:
                key = (m.group(1), m.group(2))
                if not lexicons.get(key):
                    raise TemplateError(f"slot {w} has no words")
                slots.append(key)
            else:
                slots.append(None)
        parsed.append((fields, slots))

    rng = random.Random(seed)
    out: list[TestItem] = []
    seen: set[tuple[str, ...]] = set()
    budget = max_attempts_per_sentence * n
    while len(out) < n:
        if budget <= 0:
            raise GenerationError(
                f"could not produce {n} distinct sentences within the retry budget"
            )
        budget -= 1
        fields, slots = parsed[rng.randrange(len(parsed))]
        tokens: list[str] = []
        labels: list[LanguageTag] = []
        for word, slot in zip(fields, slots):
            if slot is None:
                tokens.append(word)
                labels.append(LanguageTag.ID)
            else:
                tokens.append(rng.choice(lexicons[slot]))
                labels.append(LanguageTag(slot[0]))
        key = tuple(tokens)
        if key in seen:
            continue
        seen.add(key)
        out.append(TestItem(None, key, tuple(labels), len(out)))
    return out


def load_sus_lexicon(path) -> dict[tuple[str, str], list[str]]:
    table: dict[tuple[str, str], list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise FormatError(f"{path}:{lineno}: expected LANG<TAB>SLOT<TAB>WORD")
            lang, slot, word = (x.strip() for x in fields)
            table.setdefault((lang, slot), []).append(word)
    return table


def load_templates(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


# ---------------------------------------------------------------------------
# File formats.

def load_pairs(path) -> list[ParallelPair]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                pair = ParallelPair(
                    id_sentence=payload["id"],
                    en_sentence=payload["en"],
                    alignment=tuple(tuple(x) for x in payload["alignment"])
                    if payload.get("alignment") is not None
                    else None,
                )
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise FormatError(f"{path}:{lineno}: bad pair: {e}") from e
            pairs.append(pair)
    return pairs


def item_to_json(item: TestItem) -> str:
    return json.dumps(
        {
            "case": item.case.value if item.case else SUS_CASE,
            "tokens": list(item.tokens),
            "labels": [l.value for l in item.labels],
            "pair_index": item.pair_index,
        },
        ensure_ascii=False,
    )


def load_items(path) -> list[TestItem]:
    items = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                case = None if payload["case"] == SUS_CASE else CsCase(payload["case"])
                items.append(
                    TestItem(
                        case,
                        tuple(payload["tokens"]),
                        tuple(LanguageTag(l) for l in payload["labels"]),
                        payload["pair_index"],
                    )
                )
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
                raise FormatError(f"{path}:{lineno}: bad test item: {e}") from e
    return items


def skip_report(pairs_count: int, items: list[TestItem], skips: list[Skip]) -> dict:
    return {
        "pairs": pairs_count,
        "attempted": pairs_count * len(CsCase),
        "emitted": len(items),
        "skips": [
            {"pair_index": s.pair_index, "case": s.case.value, "reason": s.reason}
            for s in skips
        ],
    }
