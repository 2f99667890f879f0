"""Word-to-phoneme conversion over one unified IPA inventory.

Indonesian words go through an exception lexicon and then deterministic
longest-match-first spelling rules; English words go through a pronouncing
dictionary (ARPABET mapped to IPA, stress digits stripped) with a
letter-to-sound cascade for out-of-vocabulary words.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

from .errors import FormatError, InputError, InventoryError
from .lid import LanguageTag

BOUNDARY = "#"  # between adjacent words in a flat phone stream
PAUSE = "_"  # one per punctuation token

# The 39 stress-stripped ARPABET symbols used by standard pronouncing dictionaries.
ARPABET_SYMBOLS = frozenset(
    "AA AE AH AO AW AY B CH D DH EH ER EY F G HH IH IY JH K L M N NG "
    "OW OY P R S SH T TH UH UW V W Y Z ZH".split()
)


@dataclass(frozen=True)
class PhoneSeq:
    phones: tuple[str, ...]
    fallback: bool = False


@dataclass
class PhoneInventory:
    """Ordered unified phone set plus the ARPABET-to-IPA bridge."""

    symbols: list[str]
    arpabet_map: dict[str, list[str]]
    boundary: str = BOUNDARY
    pause: str = PAUSE
    _symbol_set: frozenset[str] = field(init=False, repr=False)

    def __post_init__(self):
        self._symbol_set = frozenset(self.symbols)
        if self.boundary in self._symbol_set or self.pause in self._symbol_set:
            raise InventoryError("boundary and pause symbols are reserved")
        missing = ARPABET_SYMBOLS - set(self.arpabet_map)
        if missing:
            raise InventoryError(f"arpabet map misses symbols: {sorted(missing)}")
        for sym, phones in self.arpabet_map.items():
            for p in phones:
                if p not in self._symbol_set:
                    raise InventoryError(f"arpabet map emits {p!r} for {sym}, not in inventory")

    def __contains__(self, phone: str) -> bool:
        return phone in self._symbol_set


# ---------------------------------------------------------------------------
# Indonesian rules: longest match first over the lowercased letters.

_ID_DIGRAPHS = {"ng": ["ŋ"], "ny": ["ɲ"], "sy": ["ʃ"], "kh": ["x"]}
_ID_FINAL_DIPHTHONGS = {"ai": ["ai̯"], "au": ["au̯"], "oi": ["oi̯"]}
_ID_SINGLES = {
    "a": ["a"], "b": ["b"], "c": ["tʃ"], "d": ["d"], "e": ["ə"],
    "f": ["f"], "g": ["g"], "h": ["h"], "i": ["i"], "j": ["dʒ"],
    "k": ["k"], "l": ["l"], "m": ["m"], "n": ["n"], "o": ["o"],
    "p": ["p"], "q": ["k"], "r": ["r"], "s": ["s"], "t": ["t"],
    "u": ["u"], "v": ["f"], "w": ["w"], "x": ["k", "s"], "y": ["j"],
    "z": ["z"],
}


def _fold_letters(word: str) -> str:
    """Lowercase a-z letters of the word; diacritics stripped, the rest dropped."""
    decomposed = unicodedata.normalize("NFD", word.lower())
    return "".join(ch for ch in decomposed if "a" <= ch <= "z")


def g2p_id(word: str, exceptions: dict[str, list[str]] | None = None) -> PhoneSeq:
    """Indonesian rules; orthographic "e" defaults to schwa, the shipped
    exception lexicon carries the front-vowel words."""
    key = _fold_letters(word)
    if exceptions:
        hit = exceptions.get(key) or exceptions.get(word.lower())
        if hit is not None:
            return PhoneSeq(tuple(hit), fallback=False)
    if not key:
        raise InputError(f"no convertible letters in {word!r}")
    phones: list[str] = []
    i = 0
    while i < len(key):
        if i == len(key) - 2 and key[i:] in _ID_FINAL_DIPHTHONGS:
            phones.extend(_ID_FINAL_DIPHTHONGS[key[i:]])
            break
        pair = key[i : i + 2]
        if pair in _ID_DIGRAPHS:
            phones.extend(_ID_DIGRAPHS[pair])
            i += 2
            continue
        phones.extend(_ID_SINGLES[key[i]])
        i += 1
    return PhoneSeq(tuple(phones), fallback=False)


def spell_id_letters(text: str) -> list[str]:
    """Letter-by-letter Indonesian spelling (no digraphs); placeholder path
    for numeric tokens. Non-letters contribute nothing."""
    out: list[str] = []
    for ch in _fold_letters(text):
        out.extend(_ID_SINGLES[ch])
    return out


# ---------------------------------------------------------------------------
# English letter-to-sound cascade for out-of-vocabulary words.
#
# Ordered longest-match-first table; two pre-steps: a final "-le" after a
# consonant becomes [ə l], and a final silent "e" after a consonant is
# dropped. "c"/"g" soften before e/i/y; runs of one consonant letter
# collapse to a single match.

_EN_MULTI = [
    ("tion", ["ʃ", "ə", "n"]),
    ("augh", ["ɔː"]),
    ("eigh", ["eɪ"]),
    ("ough", ["oʊ"]),
    ("tch", ["tʃ"]),
    ("igh", ["aɪ"]),
    ("dge", ["dʒ"]),
    ("ai", ["eɪ"]), ("ar", ["ɑː", "ɹ"]), ("au", ["ɔː"]), ("aw", ["ɔː"]),
    ("ay", ["eɪ"]), ("ch", ["tʃ"]), ("ck", ["k"]), ("dg", ["dʒ"]),
    ("ea", ["iː"]), ("ee", ["iː"]), ("er", ["ɜː"]), ("ew", ["uː"]),
    ("ey", ["eɪ"]), ("gh", ["g"]), ("ie", ["iː"]), ("ir", ["ɜː"]),
    ("ng", ["ŋ"]), ("oa", ["oʊ"]), ("oi", ["ɔɪ"]), ("oo", ["uː"]),
    ("or", ["ɔː", "ɹ"]), ("ou", ["aʊ"]), ("ow", ["oʊ"]), ("oy", ["ɔɪ"]),
    ("ph", ["f"]), ("qu", ["k", "w"]), ("sh", ["ʃ"]), ("th", ["θ"]),
    ("ue", ["uː"]), ("ur", ["ɜː"]), ("wh", ["w"]),
]
_EN_SINGLES = {
    "a": ["æ"], "b": ["b"], "d": ["d"], "e": ["ɛ"], "f": ["f"],
    "h": ["h"], "i": ["ɪ"], "j": ["dʒ"], "k": ["k"], "l": ["l"],
    "m": ["m"], "n": ["n"], "o": ["ɑː"], "p": ["p"], "q": ["k"],
    "r": ["ɹ"], "s": ["s"], "t": ["t"], "u": ["ʌ"], "v": ["v"],
    "w": ["w"], "x": ["k", "s"], "z": ["z"],
}
_VOWELS = set("aeiou")


def _lts_en(letters: str) -> list[str]:
    phones: list[str] = []
    tail: list[str] = []
    if len(letters) >= 3 and letters.endswith("le") and letters[-3] not in _VOWELS:
        letters = letters[:-2]
        tail = ["ə", "l"]
    elif len(letters) >= 3 and letters.endswith("e") and letters[-2] not in _VOWELS:
        letters = letters[:-1]
    i = 0
    while i < len(letters):
        for graph, out in _EN_MULTI:
            if letters.startswith(graph, i):
                phones.extend(out)
                i += len(graph)
                break
        else:
            ch = letters[i]
            nxt = letters[i + 1] if i + 1 < len(letters) else ""
            if ch == "c":
                phones.append("s" if nxt in "eiy" else "k")
            elif ch == "g":
                phones.extend(["dʒ"] if nxt in "eiy" else ["g"])
            elif ch == "y":
                if i == 0:
                    phones.append("j")
                elif i == len(letters) - 1:
                    phones.append("iː")
                else:
                    phones.append("ɪ")
            else:
                phones.extend(_EN_SINGLES[ch])
            i += 1
            if ch not in _VOWELS:
                while i < len(letters) and letters[i] == ch:
                    i += 1  # collapse doubled consonant letters
    return phones + tail


def g2p_en(
    word: str,
    lexicon: dict[str, list[str]],
    inv: PhoneInventory,
) -> PhoneSeq:
    """Pronouncing-dictionary lookup with letter-to-sound fallback."""
    entry = lexicon.get(word.lower())
    if entry is not None:
        phones: list[str] = []
        for sym in entry:
            base = sym.rstrip("012")
            mapped = inv.arpabet_map.get(base)
            if mapped is None:
                raise InventoryError(f"dictionary entry for {word!r} uses unmapped symbol {sym!r}")
            phones.extend(mapped)
        return PhoneSeq(tuple(phones), fallback=False)
    letters = _fold_letters(word)
    if not letters:
        raise InputError(f"no convertible letters in {word!r}")
    return PhoneSeq(tuple(_lts_en(letters)), fallback=True)


@dataclass
class G2pResources:
    inventory: PhoneInventory
    en_lexicon: dict[str, list[str]]
    id_exceptions: dict[str, list[str]]


def phonemize_word(word: str, lang: LanguageTag, resources: G2pResources) -> PhoneSeq:
    if lang is LanguageTag.ID:
        return g2p_id(word, resources.id_exceptions)
    if lang is LanguageTag.EN:
        return g2p_en(word, resources.en_lexicon, resources.inventory)
    raise InputError(f"unsupported language {lang!r}")


# ---------------------------------------------------------------------------
# Resource file parsers.

def load_inventory_symbols(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        symbols = [line.strip() for line in f if line.strip()]
    if len(set(symbols)) != len(symbols):
        raise FormatError(f"{path}: duplicate phones in inventory")
    return symbols


def load_arpabet_map(path) -> dict[str, list[str]]:
    mapping: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                sym, phones = line.split("\t")
            except ValueError:
                raise FormatError(f"{path}:{lineno}: expected SYMBOL<TAB>PHONES") from None
            mapping[sym] = phones.split()
    return mapping


def load_exceptions(path) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                word, phones = line.split("\t")
            except ValueError:
                raise FormatError(f"{path}:{lineno}: expected WORD<TAB>PHONES") from None
            table[word.lower()] = phones.split()
    return table


def load_pronouncing_dict(path) -> dict[str, list[str]]:
    """CMU-style dictionary: "WORD  SYM1 SYM2 ...", ";;;" comments, variant
    entries like WORD(2) skipped in favor of the first pronunciation."""
    lexicon: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith(";;;"):
                continue
            fields = line.split()
            word, syms = fields[0], fields[1:]
            if not syms:
                raise FormatError(f"{path}: entry {word!r} has no phones")
            if word.endswith(")") and "(" in word:
                continue
            lexicon.setdefault(word.lower(), syms)
    return lexicon


def data_path(name: str):
    return importlib_resources.files("csfront.data").joinpath(name)


def default_inventory() -> PhoneInventory:
    return PhoneInventory(
        symbols=load_inventory_symbols(data_path("phones.txt")),
        arpabet_map=load_arpabet_map(data_path("arpabet_ipa.tsv")),
    )


def default_resources() -> G2pResources:
    inv = default_inventory()
    return G2pResources(
        inventory=inv,
        en_lexicon=load_pronouncing_dict(data_path("en_dict.txt")),
        id_exceptions=load_exceptions(data_path("id_exceptions.tsv")),
    )
