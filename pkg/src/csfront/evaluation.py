"""Listening-study metrics: WER over transcripts, MOS aggregation,
preference-rank tallies, and balanced questionnaire allocation."""
from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import ConfigError, CoverageError, FormatError, InputError
from .testset import CsCase
from .textnorm import TokenKind, normalize, tokenize


@dataclass(frozen=True)
class AlignmentCounts:
    substitutions: int
    deletions: int
    insertions: int
    ref_len: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        if self.ref_len == 0:
            raise InputError("WER undefined for empty reference")
        return self.errors / self.ref_len


def prep_words(text: str) -> list[str]:
    """Transcript preparation for scoring: normalize, drop punctuation."""
    return [
        t.surface for t in tokenize(normalize(text)) if t.kind is not TokenKind.PUNCT
    ]


def align_wer(ref: list[str], hyp: list[str]) -> AlignmentCounts:
    """Minimal-edit alignment with unit costs, case-insensitive.

    Ties during backtracking resolve substitution > deletion > insertion,
    so the S/D/I split is deterministic (the total never depends on it).
    """
    if not ref:
        raise InputError("reference must contain at least one word")
    r = [w.casefold() for w in ref]
    h = [w.casefold() for w in hyp]
    n, m = len(r), len(h)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            same = r[i - 1] == h[j - 1]
            dist[i][j] = min(
                dist[i - 1][j - 1] + (0 if same else 1),
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
            )
    subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + (
            0 if r[i - 1] == h[j - 1] else 1
        ):
            if r[i - 1] != h[j - 1]:
                subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return AlignmentCounts(subs, dels, ins, n)


def corpus_wer(items: list[tuple[list[str], list[str]]]) -> float:
    """Pooled WER: total errors over total reference length, not a mean of rates."""
    if not items:
        raise InputError("need at least one (ref, hyp) item")
    total_err = 0
    total_len = 0
    for ref, hyp in items:
        counts = align_wer(ref, hyp)
        total_err += counts.errors
        total_len += counts.ref_len
    return total_err / total_len


# ---------------------------------------------------------------------------
# MOS aggregation.

@dataclass(frozen=True)
class MosResponse:
    respondent: str
    case: CsCase
    model: str
    score: int

    def __post_init__(self):
        if not isinstance(self.score, int) or not 1 <= self.score <= 5:
            raise FormatError(f"MOS score must be an integer in [1,5], got {self.score!r}")


def mos_aggregate(responses: list[MosResponse]) -> dict:
    """Per-model per-case mean scores plus a Total row (mean of case means)."""
    if not responses:
        raise InputError("no MOS responses")
    models: list[str] = []
    cells: dict[tuple[str, CsCase], list[int]] = {}
    for r in responses:
        if r.model not in models:
            models.append(r.model)
        cells.setdefault((r.model, r.case), []).append(r.score)
    missing = [
        f"{m}/{c.value}" for m in models for c in CsCase if (m, c) not in cells
    ]
    if missing:
        raise CoverageError(f"missing MOS cells: {', '.join(missing)}")
    means = {
        m: {c.value: sum(cells[(m, c)]) / len(cells[(m, c)]) for c in CsCase}
        for m in models
    }
    totals = {m: sum(means[m].values()) / len(CsCase) for m in models}
    return {
        "models": models,
        "cases": [c.value for c in CsCase],
        "means": means,
        "totals": totals,
    }


def format_mos_table(result: dict, digits: int = 3) -> str:
    """Aligned text table: one row per case plus the Total row."""
    models = result["models"]
    rows = [["Case"] + models]
    for case in result["cases"]:
        rows.append([case] + [f"{result['means'][m][case]:.{digits}f}" for m in models])
    rows.append(["Total"] + [f"{result['totals'][m]:.{digits}f}" for m in models])
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    )


# ---------------------------------------------------------------------------
# Preference rankings.

@dataclass(frozen=True)
class RankResponse:
    respondent: str
    case: CsCase
    ranking: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.ranking)) != len(self.ranking) or not self.ranking:
            raise FormatError(f"ranking {self.ranking!r} is not a permutation")


def rank_tally(responses: list[RankResponse]) -> dict:
    """Counts of each model at each rank position, plus mean rank per model."""
    if not responses:
        raise InputError("no rank responses")
    model_set = frozenset(responses[0].ranking)
    m = len(model_set)
    counts: dict[str, list[int]] = {name: [0] * m for name in responses[0].ranking}
    for r in responses:
        if frozenset(r.ranking) != model_set:
            raise FormatError(
                f"ranking {r.ranking!r} does not cover the model set {sorted(model_set)}"
            )
        for pos, name in enumerate(r.ranking):
            counts[name][pos] += 1
    mean_rank = {
        name: sum((pos + 1) * c for pos, c in enumerate(row)) / len(responses)
        for name, row in counts.items()
    }
    return {"models": list(responses[0].ranking), "counts": counts, "mean_rank": mean_rank}


def format_rank_table(result: dict) -> str:
    models = result["models"]
    m = len(models)
    rows = [["Model"] + [f"rank{p+1}" for p in range(m)] + ["mean"]]
    for name in models:
        rows.append(
            [name]
            + [str(c) for c in result["counts"][name]]
            + [f"{result['mean_rank'][name]:.3f}"]
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    )


# ---------------------------------------------------------------------------
# Questionnaire allocation.

def plan_allocation(mode: str, params: dict) -> dict:
    """Deterministic balanced assignment of audio segments to questionnaires.

    MOS mode: text i of every case, under every model, goes to questionnaire
    i; requires texts_per_case == questionnaires. SUS mode: sentence i under
    model j goes to questionnaire (i + j) mod q, a Latin-style round robin;
    requires the per-questionnaire load to split evenly across models.
    """
    if mode == "MOS":
        cases = [c.value for c in CsCase]
        texts = int(params["texts_per_case"])
        models = list(params["models"])
        q = int(params["questionnaires"])
        if texts != q:
            raise ConfigError(
                f"MOS plan needs texts_per_case == questionnaires, got {texts} != {q}"
            )
        if not models:
            raise ConfigError("MOS plan needs at least one model")
        questionnaires = [
            {
                "index": i,
                "segments": [
                    {"case": c, "text": i, "model": m} for c in cases for m in models
                ],
            }
            for i in range(q)
        ]
        return {
            "mode": "MOS",
            "cases": cases,
            "models": models,
            "total_segments": len(cases) * texts * len(models),
            "questionnaires": questionnaires,
        }
    if mode == "SUS":
        s = int(params["sentences"])
        models = list(params["models"])
        q = int(params["questionnaires"])
        m = len(models)
        if s < 1 or m < 1 or q < 1:
            raise ConfigError("SUS plan needs positive sentences/models/questionnaires")
        if (s * m) % q != 0:
            raise ConfigError(f"{s} sentences x {m} models not divisible by {q} questionnaires")
        per_q = (s * m) // q
        if per_q % m != 0:
            raise ConfigError(
                f"per-questionnaire load {per_q} does not split evenly over {m} models"
            )
        questionnaires = [{"index": i, "segments": []} for i in range(q)]
        for j in range(m):
            for i in range(s):
                questionnaires[(i + j) % q]["segments"].append(
                    {"sentence": i, "model": models[j]}
                )
        for entry in questionnaires:
            entry["segments"].sort(key=lambda seg: (seg["sentence"], seg["model"]))
        return {
            "mode": "SUS",
            "models": models,
            "total_segments": s * m,
            "per_questionnaire": per_q,
            "per_model_per_questionnaire": per_q // m,
            "questionnaires": questionnaires,
        }
    raise ConfigError(f"unknown plan mode {mode!r} (expected MOS or SUS)")


# ---------------------------------------------------------------------------
# CSV ingestion.

def _read_csv(path, expected_header: list[str]) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty CSV") from None
        if [h.strip() for h in header] != expected_header:
            raise FormatError(
                f"{path}: expected header {','.join(expected_header)!r}, "
                f"got {','.join(header)!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise FormatError(f"{path}:{lineno}: expected {len(expected_header)} fields")
            rows.append(dict(zip(expected_header, row)))
    return rows


def _parse_case(value: str, where: str) -> CsCase:
    try:
        return CsCase(value)
    except ValueError:
        raise FormatError(f"{where}: unknown case {value!r}") from None


def load_mos_csv(path) -> list[MosResponse]:
    out = []
    for i, row in enumerate(_read_csv(path, ["respondent", "case", "model", "score"]), 2):
        try:
            score = int(row["score"])
        except ValueError:
            raise FormatError(f"{path}:{i}: score {row['score']!r} is not an integer") from None
        out.append(
            MosResponse(row["respondent"], _parse_case(row["case"], f"{path}:{i}"),
                        row["model"], score)
        )
    return out


def load_rank_csv(path) -> list[RankResponse]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty CSV") from None
        header = [h.strip() for h in header]
        if header[:2] != ["respondent", "case"] or len(header) < 3 or any(
            h != f"rank{k+1}" for k, h in enumerate(header[2:])
        ):
            raise FormatError(f"{path}: expected header respondent,case,rank1,...,rankK")
        out = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: expected {len(header)} fields")
            out.append(
                RankResponse(row[0], _parse_case(row[1], f"{path}:{lineno}"),
                             tuple(row[2:]))
            )
    return out


def load_sus_csv(path) -> list[dict]:
    return _read_csv(path, ["item_id", "model", "reference", "transcript"])


def wer_report(rows: list[dict]) -> dict:
    """Per-model pooled WER over SUS transcript rows, plus the overall pool."""
    by_model: dict[str, list[tuple[list[str], list[str]]]] = {}
    for row in rows:
        ref = prep_words(row["reference"])
        hyp = prep_words(row["transcript"])
        if not ref:
            raise InputError(f"item {row['item_id']!r}: empty reference after normalization")
        by_model.setdefault(row["model"], []).append((ref, hyp))
    models = {}
    for model, items in by_model.items():
        s = d = i_ = n = 0
        for ref, hyp in items:
            c = align_wer(ref, hyp)
            s, d, i_, n = s + c.substitutions, d + c.deletions, i_ + c.insertions, n + c.ref_len
        models[model] = {
            "substitutions": s, "deletions": d, "insertions": i_,
            "ref_len": n, "wer": (s + d + i_) / n,
        }
    all_items = [it for items in by_model.values() for it in items]
    return {"models": models, "overall_wer": corpus_wer(all_items)}


def format_wer_table(report: dict, digits: int = 4) -> str:
    rows = [["Model", "WER", "S", "D", "I", "N"]]
    for model, stats in report["models"].items():
        rows.append([
            model, f"{stats['wer']:.{digits}f}", str(stats["substitutions"]),
            str(stats["deletions"]), str(stats["insertions"]), str(stats["ref_len"]),
        ])
    rows.append(["overall", f"{report['overall_wer']:.{digits}f}", "", "", "", ""])
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows
    )
