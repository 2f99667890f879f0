"""Indonesian-English code-switching text frontend for speech synthesis.

Tags each word of a mixed-language sentence with its language, converts
words to phonemes under the identified language's rules, and ships the
dataset-construction and listening-study metric tools used to evaluate
the approach.
"""

from .g2p import G2pResources, PhoneInventory, PhoneSeq, default_resources, g2p_en, g2p_id, phonemize_word
from .lid import (
    ExternalLidSession,
    LanguageTag,
    LidConfig,
    LidModel,
    TaggedWord,
    aggregate_sublabels,
    classify_tokens,
    extern_roundtrip,
    lid_eval,
    train_builtin,
)
from .pipeline import FrontendOutput, WordEntry, deserialize, phonemize_sentence, serialize
from .textnorm import Token, TokenKind, normalize, tokenize

__version__ = "0.1.0"
