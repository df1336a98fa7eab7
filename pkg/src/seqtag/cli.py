"""Command-line interface.

Subcommands: train, tag, eval, compare, generate. Exit codes: 0 on
success, 1 on usage errors, 2 on data or model errors. Every run echoes
its fully resolved configuration to stderr for reproducibility. The
SEQTAG_THREADS environment variable caps concurrent pairwise SVM
trainings.
"""

from __future__ import annotations

import argparse
import os
import sys

from .corpus import FORMAT_TAGGED, FORMAT_WORDS, load_corpus, save_corpus
from .errors import SeqtagError
from .evaluate import (
    SyntheticCorpusSpec,
    ablation_configs,
    evaluate,
    generate_synthetic_corpus,
    render_records,
    render_table,
    run_comparison,
    split_corpus,
)
from .features import FeatureConfig
from .persistence import load_bundle, save_bundle
from .tagger import METHODS, format_tagged_output, tag_corpus, train_tagger


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; we reserve 2
        raise UsageError(message)


def _add_feature_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=3, metavar="N",
                        help="context window radius (default 3)")
    parser.add_argument("--no-pos", action="store_true",
                        help="disable candidate-tag features")
    parser.add_argument("--no-pos-order", action="store_true",
                        help="disable (tag, rank) features")
    parser.add_argument("--no-word", action="store_true",
                        help="disable surface-form features")


def _add_learner_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--C", type=float, default=1.0, metavar="X",
                        help="SVM box constraint (default 1)")
    parser.add_argument("--degree", type=int, default=2, metavar="D",
                        help="polynomial kernel degree (default 2)")
    parser.add_argument("--kkt-tol", type=float, default=1e-3, metavar="X",
                        help="SMO violation tolerance (default 1e-3)")
    parser.add_argument("--max-passes", type=int, default=1000, metavar="N",
                        help="SMO step allowance per example (default 1000)")
    parser.add_argument("--gis-iters", type=int, default=500, metavar="N",
                        help="max iterative-scaling updates (default 500)")
    parser.add_argument("--gis-tol", type=float, default=1e-3, metavar="X",
                        help="constraint residual tolerance (default 1e-3)")
    parser.add_argument("--min-count", type=int, default=1, metavar="N",
                        help="decision-list pair count floor (default 1)")


def build_parser() -> _Parser:
    parser = _Parser(prog="seqtag", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command",
                                parser_class=_Parser)

    train = sub.add_parser("train",
                           help="train a tagger and write a model bundle")
    train.add_argument("--in", dest="infile", required=True, metavar="FILE")
    train.add_argument("--model", required=True, metavar="FILE")
    train.add_argument("--method", choices=METHODS, default="svm")
    _add_feature_flags(train)
    _add_learner_flags(train)

    tag = sub.add_parser("tag", help="tag raw text with a trained bundle")
    tag.add_argument("--in", dest="infile", required=True, metavar="FILE")
    tag.add_argument("--model", required=True, metavar="FILE")
    tag.add_argument("--out", metavar="FILE", help="default: stdout")
    tag.add_argument("--format", choices=(FORMAT_WORDS, FORMAT_TAGGED),
                     default=FORMAT_WORDS,
                     help="input format; gold tags in tab-tagged input are ignored")

    evl = sub.add_parser("eval", help="score a bundle against a gold corpus")
    evl.add_argument("--in", dest="infile", required=True, metavar="FILE")
    evl.add_argument("--model", required=True, metavar="FILE")

    compare = sub.add_parser(
        "compare", help="train and evaluate several methods side by side")
    compare.add_argument("--in", dest="infile", required=True, metavar="FILE",
                         help="training corpus (tab-tagged)")
    compare.add_argument("--test", required=True, metavar="FILE",
                         help="evaluation corpus (tab-tagged)")
    compare.add_argument("--out", metavar="FILE",
                         help="write machine-readable records here")
    compare.add_argument("--methods", default="baseline,dlist,maxent,svm",
                         metavar="A,B,...")
    compare.add_argument("--ablate-word", action="store_true",
                         help="also run every method without word features")
    _add_feature_flags(compare)
    _add_learner_flags(compare)

    gen = sub.add_parser("generate",
                         help="emit a synthetic benchmark corpus")
    gen.add_argument("--out", metavar="FILE", help="single corpus file")
    gen.add_argument("--train-out", metavar="FILE")
    gen.add_argument("--test-out", metavar="FILE")
    gen.add_argument("--seed", type=int, default=42)
    gen.add_argument("--sentences", type=int, default=2700)
    gen.add_argument("--signal", type=float, default=0.9)
    gen.add_argument("--ambiguity", type=float, default=0.25)
    gen.add_argument("--majority", type=float, default=0.65)
    return parser


def _feature_config(args) -> FeatureConfig:
    if args.window < 0:
        raise UsageError("--window must be >= 0")
    try:
        return FeatureConfig(
            window=args.window,
            use_pos=not args.no_pos,
            use_pos_order=not args.no_pos_order,
            use_word=not args.no_word,
        )
    except ValueError:
        raise UsageError(
            "--no-pos, --no-pos-order and --no-word cannot all be given"
        ) from None


def _threads() -> int:
    raw = os.environ.get("SEQTAG_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"SEQTAG_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("SEQTAG_THREADS must be >= 1")
    return value


def _learner_params(args) -> dict[str, dict]:
    checks = (
        ("--C", args.C > 0),
        ("--degree", args.degree >= 1),
        ("--kkt-tol", args.kkt_tol > 0),
        ("--max-passes", args.max_passes >= 1),
        ("--gis-iters", args.gis_iters >= 0),
        ("--gis-tol", args.gis_tol > 0),
        ("--min-count", args.min_count >= 1),
    )
    for flag, ok in checks:
        if not ok:
            raise UsageError(f"{flag} is out of range")
    return {
        "dlist": {"min_count": args.min_count},
        "maxent": {"max_iterations": args.gis_iters, "tolerance": args.gis_tol},
        "svm": {
            "C": args.C,
            "degree": args.degree,
            "kkt_tolerance": args.kkt_tol,
            "max_passes": args.max_passes,
            "n_jobs": _threads(),
        },
    }


def _echo_config(args) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    resolved["threads"] = os.environ.get("SEQTAG_THREADS", "1")
    pairs = " ".join(f"{k}={v}" for k, v in resolved.items())
    print(f"# {args.command}: {pairs}", file=sys.stderr)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_train(args) -> int:
    config = _feature_config(args)
    params = _learner_params(args)
    training = load_corpus(args.infile)
    bundle = train_tagger(training, args.method, config, params.get(args.method))
    save_bundle(bundle, args.model)
    report = bundle.report
    print(
        f"# trained {report.method}: {report.sentences} sentences, "
        f"{report.tokens} tokens, {report.ambiguous_examples} ambiguous examples, "
        f"{report.features} features, {report.seconds:.2f}s",
        file=sys.stderr,
    )
    for note in report.notes:
        print(f"# {note}", file=sys.stderr)
    return 0


def _cmd_tag(args) -> int:
    bundle = load_bundle(args.model)
    sentences = load_corpus(args.infile, args.format)
    decisions = tag_corpus(bundle, sentences)
    _write(format_tagged_output(sentences, decisions, bundle.tag_set), args.out)
    return 0


def _cmd_eval(args) -> int:
    bundle = load_bundle(args.model)
    test = load_corpus(args.infile)
    metrics = evaluate(bundle, test)

    def line(name, correct, total, precision):
        shown = "n/a" if precision is None else f"{100.0 * precision:.1f}%"
        print(f"{name}: {correct}/{total} = {shown}")

    line("ambiguous", metrics.ambiguous_correct, metrics.ambiguous_total,
         metrics.ambiguous_precision)
    line("all-words", metrics.all_correct, metrics.all_total,
         metrics.all_words_precision)
    return 0


def _cmd_compare(args) -> int:
    config = _feature_config(args)
    params = _learner_params(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if not methods or unknown:
        raise UsageError(
            f"--methods must name some of {', '.join(METHODS)}"
        )
    training = load_corpus(args.infile)
    test = load_corpus(args.test)
    configs = ablation_configs(config) if args.ablate_word else [("all", config)]
    rows = run_comparison(training, test, methods, configs, params)
    sys.stdout.write(render_table(rows))
    if args.out:
        _write(render_records(rows), args.out)
    for row in rows:
        print(f"# {row.method}/{row.config_label}: {row.seconds:.2f}s", file=sys.stderr)
    return 0


def _cmd_generate(args) -> int:
    if not 0.0 <= args.signal <= 1.0:
        raise UsageError("--signal must lie in [0, 1]")
    if not 0.0 <= args.ambiguity <= 1.0:
        raise UsageError("--ambiguity must lie in [0, 1]")
    if not 0.5 <= args.majority <= 1.0:
        raise UsageError("--majority must lie in [0.5, 1]")
    if args.sentences < 1:
        raise UsageError("--sentences must be >= 1")
    split = bool(args.train_out or args.test_out)
    if split and not (args.train_out and args.test_out):
        raise UsageError("--train-out and --test-out must be given together")
    if not split and not args.out:
        raise UsageError("give --out, or --train-out with --test-out")
    spec = SyntheticCorpusSpec(
        seed=args.seed,
        sentences=args.sentences,
        ambiguity_rate=args.ambiguity,
        signal_strength=args.signal,
        majority_share=args.majority,
    )
    corpus = generate_synthetic_corpus(spec)
    if args.out:
        save_corpus(corpus, args.out)
    if split:
        train, test = split_corpus(corpus)
        save_corpus(train, args.train_out)
        save_corpus(test, args.test_out)
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "tag": _cmd_tag,
    "eval": _cmd_eval,
    "compare": _cmd_compare,
    "generate": _cmd_generate,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        _echo_config(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SeqtagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
