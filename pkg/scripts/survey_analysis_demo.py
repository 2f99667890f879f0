#!/usr/bin/env python3
"""Simulate a small listening study and run the full analysis stack.

Builds the MOS and SUS questionnaire allocation plans, fabricates seeded
respondent data (scores, rankings, noisy transcripts), and prints the
aggregated MOS table, rank tallies, and per-model pooled WER.
"""
import argparse
import random

from csfront.evaluation import (
    MosResponse,
    RankResponse,
    format_mos_table,
    format_rank_table,
    format_wer_table,
    mos_aggregate,
    plan_allocation,
    rank_tally,
    wer_report,
)
from csfront.testset import CsCase, gen_sus, load_sus_lexicon, load_templates
from csfront.g2p import data_path

MODELS = ["base-en", "base-id", "mixed", "mixed-topline"]
# higher is better; drives both simulated scores and simulated rankings
QUALITY = {"base-en": 2.2, "base-id": 1.9, "mixed": 3.4, "mixed-topline": 3.6}


def simulate_mos(plan, respondents_per_questionnaire, rng):
    responses = []
    for q in plan["questionnaires"]:
        for r in range(respondents_per_questionnaire):
            who = f"q{q['index']}r{r}"
            for seg in q["segments"]:
                mean = QUALITY[seg["model"]]
                score = min(5, max(1, round(rng.gauss(mean, 0.8))))
                responses.append(
                    MosResponse(who, CsCase(seg["case"]), seg["model"], score)
                )
    return responses


def simulate_ranks(n, rng):
    responses = []
    for i in range(n):
        noisy = sorted(MODELS, key=lambda m: -(QUALITY[m] + rng.gauss(0, 0.7)))
        responses.append(RankResponse(f"r{i}", CsCase.HALF_HALF, tuple(noisy)))
    return responses


def simulate_transcripts(sentences, rng):
    rows = []
    for i, item in enumerate(sentences):
        for model in MODELS:
            words = list(item.tokens)
            # worse models lose or corrupt more words
            p_err = max(0.02, 0.45 - 0.1 * QUALITY[model])
            hyp = []
            for w in words:
                roll = rng.random()
                if roll < p_err / 2:
                    continue  # dropped word
                if roll < p_err:
                    hyp.append(w[::-1])  # garbled word
                else:
                    hyp.append(w)
            rows.append(
                {
                    "item_id": f"sus{i}",
                    "model": model,
                    "reference": " ".join(words),
                    "transcript": " ".join(hyp),
                }
            )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--respondents", type=int, default=5, help="per questionnaire")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    mos_plan = plan_allocation(
        "MOS", {"texts_per_case": 7, "models": MODELS, "questionnaires": 7}
    )
    sus_plan = plan_allocation(
        "SUS", {"sentences": 14, "models": MODELS, "questionnaires": 7}
    )
    print(f"MOS plan: {mos_plan['total_segments']} segments over 7 questionnaires of 28")
    print(f"SUS plan: {sus_plan['total_segments']} segments over 7 questionnaires of "
          f"{sus_plan['per_questionnaire']} ({sus_plan['per_model_per_questionnaire']} per model)")
    print()

    print("== simulated MOS table ==")
    print(format_mos_table(mos_aggregate(simulate_mos(mos_plan, args.respondents, rng))))
    print()

    print("== simulated preference ranks ==")
    print(format_rank_table(rank_tally(simulate_ranks(35, rng))))
    print()

    sentences = gen_sus(
        load_templates(data_path("sus_templates.txt")),
        load_sus_lexicon(data_path("sus_lexicon.tsv")),
        14,
        seed=args.seed,
    )
    print("== simulated SUS transcripts: pooled WER ==")
    print(format_wer_table(wer_report(simulate_transcripts(sentences, rng))))


if __name__ == "__main__":
    main()
