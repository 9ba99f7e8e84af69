"""Command-line interface tying the extraction pipeline together.

Subcommands: build-pivot, ingest-table, combine, build-matrix, extract,
evaluate and pipeline. Exit codes: 0 on success, 1 when the data cannot
support the request (empty corpus, no candidates), 2 for usage and
configuration problems including unreadable or malformed input files.

extract and pipeline read an optional flat ``key=value`` config file;
any key can be overridden by the matching command-line flag.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .cooccurrence import (apply_loglikelihood, build_ordered,
                           build_unordered, normalize_rows, prune_zero_rows,
                           save_matrix, LLR, RAW)
from .corpus import load_corpus, load_stopwords, build_vocabulary
from .dictionaries import (build_pivot_dictionary, combine_independent,
                           combine_simple, ingest_translation_table,
                           load_dictionary, load_pivot_side, save_combined,
                           save_dictionary, unit_weights, weights_by_accuracy,
                           weights_by_accuracy_and_size, WeightSet)
from .errors import ConfigError, DataError
from .estimator import LexiconExtractor
from .evaluation import evaluate, load_gold
from .extraction import read_lexicon, write_lexicon

PIPELINE_DEFAULTS = {
    "combination": "none",
    "mode": "unordered",
    "window": 5,
    "measure": LLR,
    "normalize": True,
    "metric": "dicemin",
    "weight_source": "unit",
    "top_k": 10,
    "min_frequency": 1,
    "min_target_frequency": 1,
    "threads": 0,  # 0 = machine parallelism
    "ks": "1,10",
}

_INT_KEYS = {"window", "top_k", "min_frequency", "min_target_frequency",
             "threads"}
_BOOL_KEYS = {"normalize"}


def read_config(path) -> dict:
    """Parse a flat key=value config file; '#' starts a comment line."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = stripped.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_pairs(items, what: str, cast=str) -> list:
    """ID=value strings (or one comma-joined string) -> [(id, value)]."""
    if isinstance(items, str):
        items = items.split(",")
    out = []
    for item in items:
        if "=" not in item:
            raise ConfigError(f"expected ID=... for {what}, got {item!r}")
        key, value = item.split("=", 1)
        try:
            out.append((key.strip(), cast(value.strip())))
        except ValueError:
            raise ConfigError(f"bad value for {what} {key!r}: {value!r}")
    return out


def resolve_options(args, keys) -> dict:
    """Layer option values: command line > config file > defaults."""
    resolved = dict(PIPELINE_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        for key, raw in read_config(config_path).items():
            if key not in keys:
                raise ConfigError(f"unknown config key {key!r}")
            if key in _INT_KEYS:
                try:
                    resolved[key] = int(raw)
                except ValueError:
                    raise ConfigError(f"config key {key} must be an "
                                      f"integer, got {raw!r}")
            elif key in _BOOL_KEYS:
                resolved[key] = _parse_bool(raw)
            else:
                resolved[key] = raw
    for key in keys:
        value = getattr(args, key, None)
        if value is not None and value != []:
            resolved[key] = value
    return resolved


def _parse_ks(text) -> list:
    try:
        ks = [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--ks expects comma-separated integers, got {text!r}")
    if not ks:
        raise ConfigError("--ks needs at least one value")
    return ks


def _load_member_dictionaries(specs) -> list:
    pairs = _parse_pairs(specs, "--dict")
    return [load_dictionary(path, dict_id) for dict_id, path in pairs]


def _combine(dicts, combination: str):
    if combination == "none":
        if len(dicts) != 1:
            raise ConfigError("combination=none expects exactly one --dict")
        return dicts[0]
    if combination == "simple":
        return combine_simple(dicts)
    if combination == "independent":
        return combine_independent(dicts)
    raise ConfigError(f"unknown combination {combination!r}")


def _resolve_weights(opts, dicts, metric: str):
    """Build the weight set for newdicemin, or warn-and-ignore otherwise."""
    source = opts["weight_source"]
    if metric != "newdicemin":
        if source != "unit" or opts.get("weights"):
            print("warning: weights are ignored unless --metric newdicemin",
                  file=sys.stderr)
        return None
    member_ids = [d.dict_id for d in dicts]
    if source == "unit":
        return unit_weights(member_ids)
    if source == "accuracy":
        accuracies = dict(_parse_pairs(opts.get("accuracies") or [],
                                       "--accuracy", float))
        _require_all(accuracies, member_ids, "--accuracy")
        return weights_by_accuracy(accuracies)
    if source == "accuracy_size":
        accuracies = dict(_parse_pairs(opts.get("accuracies") or [],
                                       "--accuracy", float))
        _require_all(accuracies, member_ids, "--accuracy")
        sizes = {d.dict_id: d.size for d in dicts}
        return weights_by_accuracy_and_size(accuracies, sizes)
    if source == "explicit":
        weights = dict(_parse_pairs(opts.get("weights") or [],
                                    "--weight", float))
        _require_all(weights, member_ids, "--weight")
        return WeightSet(weights)
    raise ConfigError(f"unknown weight source {source!r}")


def _require_all(mapping, member_ids, flag: str) -> None:
    missing = [m for m in member_ids if m not in mapping]
    if missing:
        raise ConfigError(f"{flag} value missing for {', '.join(missing)}")
    extra = [m for m in mapping if m not in member_ids]
    if extra:
        raise ConfigError(f"{flag} given for unknown dictionary "
                          f"{', '.join(extra)}")


PIPELINE_KEYS = ("source_corpus", "target_corpus", "source_stopwords",
                 "target_stopwords", "dicts", "combination", "mode",
                 "window", "measure", "normalize", "metric", "weight_source",
                 "accuracies", "weights", "top_k", "min_frequency",
                 "min_target_frequency", "threads", "out", "gold", "ks",
                 "report")


def _run_extraction(opts):
    for required in ("source_corpus", "target_corpus", "dicts", "out"):
        if not opts.get(required):
            raise ConfigError(f"missing required option "
                              f"--{required.replace('_', '-')}")
    src_stop = (load_stopwords(opts["source_stopwords"])
                if opts.get("source_stopwords") else frozenset())
    tgt_stop = (load_stopwords(opts["target_stopwords"])
                if opts.get("target_stopwords") else frozenset())
    source = load_corpus(opts["source_corpus"], src_stop, "source")
    target = load_corpus(opts["target_corpus"], tgt_stop, "target")
    dicts = _load_member_dictionaries(opts["dicts"])
    if opts["mode"] not in ("unordered", "ordered"):
        raise ConfigError(f"--mode must be unordered or ordered, "
                          f"got {opts['mode']!r}")
    metric = str(opts["metric"]).lower()
    if metric == "newdicemin" and opts["combination"] != "independent":
        raise ConfigError("--metric newdicemin requires "
                          "--combination independent")
    dictionary = _combine(dicts, opts["combination"])
    weights = _resolve_weights(opts, dicts, metric)
    threads = int(opts["threads"]) or (os.cpu_count() or 1)
    extractor = LexiconExtractor(
        dictionary=dictionary,
        window=int(opts["window"]),
        ordered=(opts["mode"] == "ordered"),
        measure=opts["measure"],
        normalize=bool(opts["normalize"]),
        metric=metric,
        weights=weights,
        top_k=int(opts["top_k"]),
        min_frequency=int(opts["min_frequency"]),
        min_target_frequency=int(opts["min_target_frequency"]),
        threads=threads,
    )
    extractor.fit(source, target)
    lexicon = extractor.predict()
    write_lexicon(lexicon, opts["out"])
    return lexicon


def cmd_extract(args) -> int:
    opts = resolve_options(args, PIPELINE_KEYS)
    _run_extraction(opts)
    return 0


def cmd_pipeline(args) -> int:
    opts = resolve_options(args, PIPELINE_KEYS)
    lexicon = _run_extraction(opts)
    if opts.get("gold"):
        gold = load_gold(opts["gold"])
        report = evaluate(lexicon, gold, _parse_ks(opts["ks"]))
        if opts.get("report"):
            with open(opts["report"], "w", encoding="utf-8") as fh:
                fh.write(report.to_tsv())
        print(report.summary())
    return 0


def cmd_build_pivot(args) -> int:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    src_side = load_pivot_side(args.src_pivot, stopwords)
    tgt_side = load_pivot_side(args.pivot_tgt, stopwords, invert=True)
    dictionary = build_pivot_dictionary(src_side, tgt_side, args.top_n,
                                        args.dict_id)
    save_dictionary(dictionary, args.out)
    print(f"{dictionary.dict_id}: {dictionary.size} entries -> {args.out}")
    return 0


def cmd_ingest_table(args) -> int:
    dictionary = ingest_translation_table(args.table, args.top_n, args.dict_id)
    save_dictionary(dictionary, args.out)
    print(f"{dictionary.dict_id}: {dictionary.size} entries -> {args.out}")
    return 0


def cmd_combine(args) -> int:
    dicts = _load_member_dictionaries(args.dicts)
    if args.combination == "none":
        raise ConfigError("combine needs --combination simple or independent")
    combined = _combine(dicts, args.combination)
    save_combined(combined, args.out)
    print(f"{combined.mode} combination: {combined.size} entries -> {args.out}")
    return 0


def cmd_build_matrix(args) -> int:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    corpus = load_corpus(args.corpus, stopwords)
    dicts = _load_member_dictionaries(args.dicts)
    if len(dicts) != 1:
        raise ConfigError("build-matrix expects exactly one --dict")
    column = 0 if args.side == "source" else 1
    seeds = []
    for entry in dicts[0].entries:
        if entry[column] not in seeds:
            seeds.append(entry[column])
    rows = build_vocabulary(corpus, args.min_frequency)
    build = build_ordered if args.mode == "ordered" else build_unordered
    matrix = build(corpus, rows, seeds, args.window)
    if args.measure == LLR:
        matrix = apply_loglikelihood(matrix, corpus.frequencies,
                                     corpus.token_count)
    if args.normalize:
        matrix = normalize_rows(matrix)
    if args.prune:
        matrix = prune_zero_rows(matrix)
    save_matrix(matrix, args.out)
    print(f"{matrix.mode} matrix: {len(matrix.row_words)} rows x "
          f"{len(matrix.col_keys)} cols, {matrix.nnz} nonzeros -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    lexicon = read_lexicon(args.lexicon)
    gold = load_gold(args.gold)
    report = evaluate(lexicon, gold, _parse_ks(args.ks))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
    print(report.summary())
    return 0


def _add_pipeline_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file; every "
                        "key can be overridden by the matching flag")
    parser.add_argument("--source-corpus", dest="source_corpus")
    parser.add_argument("--target-corpus", dest="target_corpus")
    parser.add_argument("--source-stopwords", dest="source_stopwords")
    parser.add_argument("--target-stopwords", dest="target_stopwords")
    parser.add_argument("--dict", dest="dicts", action="append", default=[],
                        metavar="ID=PATH",
                        help="member dictionary, highest priority first; "
                        "repeatable")
    parser.add_argument("--combination",
                        choices=("none", "simple", "independent"))
    parser.add_argument("--mode", choices=("unordered", "ordered"))
    parser.add_argument("--window", type=int)
    parser.add_argument("--measure", choices=(RAW, LLR))
    parser.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                        default=None)
    parser.add_argument("--metric",
                        choices=("cityblock", "cosine", "dicemin", "diceprod",
                                 "jaccardmin", "jaccardprod", "lin",
                                 "newdicemin"))
    parser.add_argument("--weight-source", dest="weight_source",
                        choices=("unit", "accuracy", "accuracy_size",
                                 "explicit"))
    parser.add_argument("--accuracy", dest="accuracies", action="append",
                        default=[], metavar="ID=VALUE")
    parser.add_argument("--weight", dest="weights", action="append",
                        default=[], metavar="ID=VALUE")
    parser.add_argument("--top-k", dest="top_k", type=int)
    parser.add_argument("--min-frequency", dest="min_frequency", type=int)
    parser.add_argument("--min-target-frequency", dest="min_target_frequency",
                        type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--out", help="output lexicon TSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilex",
        description="Extract a bilingual lexicon from comparable corpora "
                    "using seed dictionaries.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-pivot",
                       help="build a seed dictionary through a pivot language")
    p.add_argument("--src-pivot", required=True,
                   help="source->pivot dictionary TSV "
                        "(headword<TAB>pivot description)")
    p.add_argument("--pivot-tgt", required=True,
                   help="pivot->target dictionary TSV "
                        "(pivot word<TAB>target words)")
    p.add_argument("--stopwords", help="pivot-language stop words")
    p.add_argument("--top-n", dest="top_n", required=True, type=int)
    p.add_argument("--dict-id", dest="dict_id", default="DicPi")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_pivot)

    p = sub.add_parser("ingest-table",
                       help="reduce a translation table to a seed dictionary")
    p.add_argument("--table", required=True,
                   help="source<TAB>target<TAB>probability TSV")
    p.add_argument("--top-n", dest="top_n", required=True, type=int)
    p.add_argument("--dict-id", dest="dict_id", default="DicPa")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest_table)

    p = sub.add_parser("combine", help="combine seed dictionaries")
    p.add_argument("--dict", dest="dicts", action="append", required=True,
                   metavar="ID=PATH")
    p.add_argument("--combination", required=True,
                   choices=("simple", "independent"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("build-matrix",
                       help="build and persist one co-occurrence matrix")
    p.add_argument("--corpus", required=True)
    p.add_argument("--stopwords")
    p.add_argument("--dict", dest="dicts", action="append", required=True,
                   metavar="ID=PATH")
    p.add_argument("--side", choices=("source", "target"), default="source",
                   help="which dictionary side supplies the seed columns")
    p.add_argument("--mode", choices=("unordered", "ordered"),
                   default="unordered")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--measure", choices=(RAW, LLR), default=LLR)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--min-frequency", dest="min_frequency", type=int,
                   default=1)
    p.add_argument("--prune", action=argparse.BooleanOptionalAction,
                   default=True, help="drop all-zero rows")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_matrix)

    p = sub.add_parser("extract",
                       help="full pipeline: corpora + dictionaries -> lexicon")
    _add_pipeline_arguments(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="score a lexicon against a gold set")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--ks", default="1,10")
    p.add_argument("--out", help="write the Top-k table as TSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline",
                       help="extract and, when a gold set is given, evaluate")
    _add_pipeline_arguments(p)
    p.add_argument("--gold")
    p.add_argument("--ks")
    p.add_argument("--report", help="write the Top-k table as TSV")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
