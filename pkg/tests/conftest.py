import sys

import pytest

from csfront.g2p import default_resources
from csfront.lid import LidConfig, train_builtin


@pytest.fixture(scope="session")
def resources():
    return default_resources()


@pytest.fixture(scope="session")
def toy_bigram_model():
    # two one-sentence corpora, order 2: small enough to score by hand
    return train_builtin(
        ["makan nasi"], ["eat rice"], None, LidConfig(n=2, alpha=0.1, min_lex_count=1)
    )


@pytest.fixture(scope="session")
def small_model():
    id_sents = [
        "saya suka makan nasi goreng",
        "air itu dingin sekali",
        "dan dia pergi ke pasar",
        "saya makan sate dan nasi",
        "air dan teh itu dingin",
        "dia suka pergi ke pantai",
    ]
    en_sents = [
        "i like to eat fried rice",
        "the air is cold here",
        "and she went to the market",
        "i eat noodles and rice",
        "the air and tea are cold",
        "she likes going to the beach",
    ]
    return train_builtin(id_sents, en_sents)


def mocklid_cmd(*extra: str) -> list[str]:
    return [sys.executable, "-m", "csfront.mocklid", *extra]


# Shared aggregation fixture: per-case cell means per model (rows in CsCase
# order) and the Total column they must reproduce.
MOS_CELL_MEANS = {
    "base-en": [3.571, 1.286, 1.257, 1.286, 3.086, 2.571, 2.086],
    "base-id": [1.114, 3.114, 2.400, 2.229, 1.114, 1.343, 1.571],
    "mixed": [3.171, 2.971, 3.714, 3.429, 3.429, 3.429, 3.514],
    "mixed-topline": [3.114, 3.371, 3.600, 3.800, 3.514, 3.686, 3.714],
}
MOS_EXPECTED_TOTALS = {
    "base-en": 2.163,
    "base-id": 1.841,
    "mixed": 3.379,
    "mixed-topline": 3.543,
}


def mos_responses_with_cell_means(per_cell: int = 1000):
    """Integer 1-5 responses whose per-cell means equal MOS_CELL_MEANS exactly."""
    from csfront.evaluation import MosResponse
    from csfront.testset import CsCase

    responses = []
    for model, means in MOS_CELL_MEANS.items():
        for case, mean in zip(CsCase, means):
            total = round(mean * per_cell)
            base = total // per_cell
            extra = total - base * per_cell
            scores = [base] * (per_cell - extra) + [base + 1] * extra
            responses.extend(
                MosResponse(f"r{i:04d}", case, model, s) for i, s in enumerate(scores)
            )
    return responses
