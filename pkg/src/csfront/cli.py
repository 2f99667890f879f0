"""Command-line entry point.

One executable, one subcommand per pipeline stage or evaluation. Data goes
to stdout, diagnostics to stderr; exit status 0 on success, 1 on
input/format errors, 2 on configuration errors. A flat key=value config
file (default named by the CSFRONT_CONFIG environment variable) supplies
defaults; flags override it.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys

from . import corpus as corpus_mod
from . import evaluation, g2p, pipeline, testset
from .errors import ConfigError, CsfrontError
from .lid import (
    ExternalLidSession,
    LanguageTag,
    LidConfig,
    LidModel,
    classify_tokens,
    lid_eval,
    train_builtin,
)
from .textnorm import normalize, tokenize

log = logging.getLogger("csfront")

CONFIG_ENV = "CSFRONT_CONFIG"

_PATH_KEYS = {
    "en_dict", "inventory", "arpabet_map", "id_exceptions",
    "stopwords_id", "stopwords_en", "bilingual_dict",
    "sus_templates", "sus_lexicon", "lid_model",
}
_VALUE_KEYS = {"backend", "extern_cmd", "n", "alpha", "min_lex_count", "seed"}


def load_config(path: str | None) -> dict[str, str]:
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    if not os.path.exists(path):
        raise ConfigError(f"config file {path!r} does not exist")
    cfg: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in _PATH_KEYS | _VALUE_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            cfg[key] = value
    for key in _PATH_KEYS & cfg.keys():
        if not os.path.exists(cfg[key]):
            raise ConfigError(f"config key {key} points at missing path {cfg[key]!r}")
    return cfg


def _seed_from(args, cfg) -> int:
    raw = args.seed if args.seed is not None else cfg.get("seed", "0")
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"seed {raw!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed {seed} outside the unsigned 64-bit range")
    return seed


def _resources(cfg) -> g2p.G2pResources:
    inv_path = cfg.get("inventory")
    map_path = cfg.get("arpabet_map")
    if inv_path or map_path:
        inv = g2p.PhoneInventory(
            symbols=g2p.load_inventory_symbols(inv_path or g2p.data_path("phones.txt")),
            arpabet_map=g2p.load_arpabet_map(map_path or g2p.data_path("arpabet_ipa.tsv")),
        )
    else:
        inv = g2p.default_inventory()
    return g2p.G2pResources(
        inventory=inv,
        en_lexicon=g2p.load_pronouncing_dict(
            cfg.get("en_dict") or g2p.data_path("en_dict.txt")
        ),
        id_exceptions=g2p.load_exceptions(
            cfg.get("id_exceptions") or g2p.data_path("id_exceptions.tsv")
        ),
    )


def _backend_factory(args, cfg):
    backend = args.backend or cfg.get("backend", "builtin")
    if backend == "builtin":
        model_path = getattr(args, "model", None) or cfg.get("lid_model")
        if not model_path:
            raise ConfigError("builtin backend needs --model (or lid_model in the config)")
        if not os.path.exists(model_path):
            raise ConfigError(f"LID model {model_path!r} does not exist")
        model = LidModel.load(model_path)
        return lambda: model
    if backend == "extern":
        cmd = getattr(args, "extern_cmd", None) or cfg.get("extern_cmd")
        if not cmd:
            raise ConfigError("extern backend needs --extern-cmd (or extern_cmd in the config)")
        argv = shlex.split(cmd)
        return lambda: ExternalLidSession(argv)
    raise ConfigError(f"unknown backend {backend!r} (expected builtin or extern)")


def _emit(line: str) -> None:
    sys.stdout.write(line + "\n")
    sys.stdout.flush()


# ---------------------------------------------------------------------------
# Subcommand implementations.

def cmd_lid_train(args, cfg) -> int:
    lid_cfg = LidConfig(
        n=args.n if args.n is not None else int(cfg.get("n", 3)),
        alpha=args.alpha if args.alpha is not None else float(cfg.get("alpha", 0.1)),
        min_lex_count=args.min_lex_count
        if args.min_lex_count is not None
        else int(cfg.get("min_lex_count", 2)),
    )
    with open(args.id_corpus, encoding="utf-8") as f:
        id_sents = [line for line in f if line.strip()]
    with open(args.en_corpus, encoding="utf-8") as f:
        en_sents = [line for line in f if line.strip()]
    cs_rows = corpus_mod.load_labeled(args.cs_corpus) if args.cs_corpus else None
    model = train_builtin(id_sents, en_sents, cs_rows, lid_cfg)
    model.save(args.out)
    log.info("model saved to %s (lexicons: %d ID, %d EN)",
             args.out, len(model.lexicon_id), len(model.lexicon_en))
    return 0


def cmd_lid_tag(args, cfg) -> int:
    make_backend = _backend_factory(args, cfg)
    backend = make_backend()
    try:
        for line in sys.stdin:
            tokens = tokenize(normalize(line))
            tagged = classify_tokens(backend, tokens)
            _emit(json.dumps(
                {
                    "tokens": [t.token.surface for t in tagged],
                    "labels": [t.lang.value for t in tagged],
                    "confidence": [round(t.confidence, 6) for t in tagged],
                    "source": [t.source.value for t in tagged],
                },
                ensure_ascii=False,
            ))
    finally:
        pipeline._close_quietly(backend)
    return 0


def cmd_lid_eval(args, cfg) -> int:
    pred = [l for row in corpus_mod.load_labeled(args.pred) for l in row.labels]
    gold = [l for row in corpus_mod.load_labeled(args.gold) for l in row.labels]
    _emit(json.dumps(lid_eval(pred, gold), ensure_ascii=False))
    return 0


def cmd_phonemize(args, cfg) -> int:
    resources = _resources(cfg)
    make_backend = _backend_factory(args, cfg)
    lines = (line.rstrip("\n") for line in sys.stdin)
    for out_line in pipeline.phonemize_batch(lines, resources, make_backend, jobs=args.jobs):
        _emit(out_line)
    return 0


def cmd_corpus_undersample(args, cfg) -> int:
    ratio = tuple(int(x) for x in args.ratio.split(","))
    if len(ratio) != 3:
        raise ConfigError(f"ratio must be three comma-separated integers, got {args.ratio!r}")
    id_rows = corpus_mod.load_monolingual(args.id_corpus, LanguageTag.ID)
    en_rows = corpus_mod.load_monolingual(args.en_corpus, LanguageTag.EN)
    cs_rows = corpus_mod.load_labeled(args.cs_corpus)
    combined = corpus_mod.undersample(id_rows, en_rows, cs_rows, ratio, _seed_from(args, cfg))
    for row in combined:
        _emit(corpus_mod.labeled_to_json(row))
    return 0


def cmd_testset_build(args, cfg) -> int:
    pairs = testset.load_pairs(args.pairs)
    dict_path = args.dict or cfg.get("bilingual_dict")
    bilingual = testset.BilingualDict.load(dict_path) if dict_path else None
    sw_id = testset.load_stopwords(
        args.stopwords_id or cfg.get("stopwords_id") or g2p.data_path("stopwords_id.txt")
    )
    sw_en = testset.load_stopwords(
        args.stopwords_en or cfg.get("stopwords_en") or g2p.data_path("stopwords_en.txt")
    )
    items, skips = testset.build_testset(
        pairs, bilingual, _seed_from(args, cfg), sw_id, sw_en
    )
    for item in items:
        _emit(testset.item_to_json(item))
    report = json.dumps(testset.skip_report(len(pairs), items, skips), ensure_ascii=False)
    if args.skips:
        with open(args.skips, "w", encoding="utf-8") as f:
            f.write(report + "\n")
    else:
        sys.stderr.write(report + "\n")
    return 0


def cmd_sus_gen(args, cfg) -> int:
    templates = testset.load_templates(
        args.templates or cfg.get("sus_templates") or g2p.data_path("sus_templates.txt")
    )
    lexicons = testset.load_sus_lexicon(
        args.lexicon or cfg.get("sus_lexicon") or g2p.data_path("sus_lexicon.tsv")
    )
    for item in testset.gen_sus(templates, lexicons, args.n, _seed_from(args, cfg)):
        _emit(testset.item_to_json(item))
    return 0


def cmd_eval_wer(args, cfg) -> int:
    report = evaluation.wer_report(evaluation.load_sus_csv(args.csv))
    if args.format == "json":
        _emit(json.dumps(report, ensure_ascii=False))
    else:
        _emit(evaluation.format_wer_table(report))
    return 0


def cmd_eval_mos(args, cfg) -> int:
    result = evaluation.mos_aggregate(evaluation.load_mos_csv(args.csv))
    if args.format == "json":
        _emit(json.dumps(result, ensure_ascii=False))
    else:
        _emit(evaluation.format_mos_table(result))
    return 0


def cmd_eval_rank(args, cfg) -> int:
    result = evaluation.rank_tally(evaluation.load_rank_csv(args.csv))
    if args.format == "json":
        _emit(json.dumps(result, ensure_ascii=False))
    else:
        _emit(evaluation.format_rank_table(result))
    return 0


def cmd_plan(args, cfg) -> int:
    models = [m for m in args.models.split(",") if m]
    if args.mode == "MOS":
        if args.texts_per_case is None:
            raise ConfigError("MOS plan needs --texts-per-case")
        params = {
            "texts_per_case": args.texts_per_case,
            "models": models,
            "questionnaires": args.questionnaires,
        }
    else:
        if args.sentences is None:
            raise ConfigError("SUS plan needs --sentences")
        params = {
            "sentences": args.sentences,
            "models": models,
            "questionnaires": args.questionnaires,
        }
    _emit(json.dumps(evaluation.plan_allocation(args.mode, params), ensure_ascii=False))
    return 0


# ---------------------------------------------------------------------------
# Argument wiring.

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="csfront",
        description="Indonesian-English code-switching text frontend and evaluation tools.",
    )
    top.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    top.add_argument("--seed", type=int, default=None, help="seed for all sampled behavior")
    sub = top.add_subparsers(dest="command", required=True)

    lid = sub.add_parser("lid", help="language identification").add_subparsers(
        dest="subcommand", required=True
    )
    p = lid.add_parser("train", help="train the built-in classifier")
    p.add_argument("--id", dest="id_corpus", required=True, help="ID sentences, one per line")
    p.add_argument("--en", dest="en_corpus", required=True, help="EN sentences, one per line")
    p.add_argument("--cs", dest="cs_corpus", help="word-labeled JSONL corpus")
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("-n", type=int, default=None, help="character n-gram order")
    p.add_argument("--alpha", type=float, default=None, help="add-alpha smoothing")
    p.add_argument("--min-lex-count", type=int, default=None)
    p.set_defaults(func=cmd_lid_train)

    p = lid.add_parser("tag", help="tag sentences from stdin")
    _backend_flags(p)
    p.set_defaults(func=cmd_lid_tag)

    p = lid.add_parser("eval", help="score predicted labels against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_lid_eval)

    p = sub.add_parser("phonemize", help="stdin sentences to frontend JSON lines")
    _backend_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (order preserved)")
    p.set_defaults(func=cmd_phonemize)

    corpus_p = sub.add_parser("corpus", help="corpus tools").add_subparsers(
        dest="subcommand", required=True
    )
    p = corpus_p.add_parser("undersample", help="balance ID/EN/CS row counts")
    p.add_argument("--id", dest="id_corpus", required=True)
    p.add_argument("--en", dest="en_corpus", required=True)
    p.add_argument("--cs", dest="cs_corpus", required=True)
    p.add_argument("--ratio", default="5,5,1")
    p.set_defaults(func=cmd_corpus_undersample)

    ts = sub.add_parser("testset", help="evaluation datasets").add_subparsers(
        dest="subcommand", required=True
    )
    p = ts.add_parser("build", help="seven-case items from parallel pairs")
    p.add_argument("--pairs", required=True, help="JSONL with id/en/alignment")
    p.add_argument("--dict", help="bilingual TSV for substitutions")
    p.add_argument("--stopwords-id")
    p.add_argument("--stopwords-en")
    p.add_argument("--skips", help="write the skip report here instead of stderr")
    p.set_defaults(func=cmd_testset_build)

    sus = sub.add_parser("sus", help="intelligibility sentences").add_subparsers(
        dest="subcommand", required=True
    )
    p = sus.add_parser("gen", help="generate slot-filled nonsense sentences")
    p.add_argument("--templates")
    p.add_argument("--lexicon")
    p.add_argument("--n", type=int, default=14)
    p.set_defaults(func=cmd_sus_gen)

    ev = sub.add_parser("eval", help="listening-study metrics").add_subparsers(
        dest="subcommand", required=True
    )
    p = ev.add_parser("wer", help="pooled word error rate from transcripts CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_eval_wer)
    p = ev.add_parser("mos", help="per-model per-case MOS table")
    p.add_argument("--csv", required=True)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_eval_mos)
    p = ev.add_parser("rank", help="preference-rank tallies")
    p.add_argument("--csv", required=True)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_eval_rank)

    p = sub.add_parser("plan", help="questionnaire allocation")
    p.add_argument("--mode", choices=["MOS", "SUS"], required=True)
    p.add_argument("--models", required=True, help="comma-separated model names")
    p.add_argument("--questionnaires", type=int, required=True)
    p.add_argument("--texts-per-case", type=int, help="MOS mode")
    p.add_argument("--sentences", type=int, help="SUS mode")
    p.set_defaults(func=cmd_plan)

    return top


def _backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=["builtin", "extern"], default=None)
    p.add_argument("--model", help="built-in LID model path")
    p.add_argument("--extern-cmd", dest="extern_cmd",
                   help="command line of an external LID backend")


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as e:
        sys.stderr.write(f"config error: {e}\n")
        return 2
    except CsfrontError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
