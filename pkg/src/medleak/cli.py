"""Command-line interface: analyze captures, generate corpora and fixtures,
and compare cleartext-detection methods."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .capture import MalformedCapture
from .classifiers import METHODS, ClassifierConfig, MethodReport, compare_methods
from .config import ConfigError, RunConfig, load_config, load_registry, merge_cli_overrides, save_registry
from .corpus import (
    SCENARIOS,
    CorpusSpec,
    build_fixture_capture,
    fixture_registry,
    generate_corpus,
    load_corpus,
    save_corpus,
)
from .report import EXIT_ERROR, analyze, render

_METHOD_LABELS = {"ascii": "naive-ascii", "entropy": "shannon-entropy", "chi_squared": "chi-squared"}


class _Parser(argparse.ArgumentParser):
    # exit codes <= 2 are reserved for analysis outcomes
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="medleak", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze capture files and emit device privacy reports")
    p_analyze.add_argument("--capture", action="append", required=True, metavar="PCAP",
                           help="capture file (repeatable)")
    p_analyze.add_argument("--registry", metavar="INI", help="device registry file with a [devices] section")
    p_analyze.add_argument("--config", metavar="INI", help="run configuration file")
    p_analyze.add_argument("--format", choices=("json", "text"), default="json")
    p_analyze.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p_analyze.add_argument("--entropy-threshold", type=float, dest="entropy_threshold")
    p_analyze.add_argument("--chi-threshold", type=float, dest="chi_threshold")
    p_analyze.add_argument("--min-stat-len", type=int, dest="min_stat_len")
    p_analyze.add_argument("--decision-method", choices=("ascii", "entropy", "chi_squared", "majority"),
                           dest="decision_method")
    p_analyze.add_argument("--gap-threshold", type=float, dest="gap_threshold")
    p_analyze.add_argument("--image-window", type=float, dest="image_window")
    p_analyze.add_argument("--dict-dir", type=Path, dest="dict_dir")

    p_corpus = sub.add_parser("gen-corpus", help="generate a labeled synthetic corpus")
    p_corpus.add_argument("--seed", type=int, required=True)
    p_corpus.add_argument("--out", required=True, metavar="DIR")
    p_corpus.add_argument("--n-cleartext", type=int, default=1000)
    p_corpus.add_argument("--n-encrypted", type=int, default=1000)
    p_corpus.add_argument("--min-len", type=int, default=64)
    p_corpus.add_argument("--max-len", type=int, default=2048)

    p_fixture = sub.add_parser("gen-fixture", help="write a named golden-fixture capture")
    p_fixture.add_argument("scenario", choices=SCENARIOS)
    p_fixture.add_argument("--out", required=True, metavar="PCAP")
    p_fixture.add_argument("--registry-out", metavar="INI", help="also write the matching device registry")

    p_compare = sub.add_parser("compare-methods", help="score the three detection methods on a labeled corpus")
    group = p_compare.add_mutually_exclusive_group(required=True)
    group.add_argument("--corpus", metavar="PATH", help="saved corpus (directory or .jsonl)")
    group.add_argument("--seed", type=int, help="generate a fresh corpus from this seed")
    p_compare.add_argument("--n-cleartext", type=int, default=5000)
    p_compare.add_argument("--n-encrypted", type=int, default=5000)
    p_compare.add_argument("--min-len", type=int, default=64)
    p_compare.add_argument("--max-len", type=int, default=2048)
    p_compare.add_argument("--entropy-threshold", type=float, default=7.5)
    p_compare.add_argument("--chi-threshold", type=float, default=1000.0)
    p_compare.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _cmd_analyze(args) -> int:
    config = load_config(args.config) if args.config else RunConfig()
    if args.registry:
        config.registry = load_registry(args.registry)
    if not config.registry:
        raise ConfigError("empty device registry: pass --registry or a config with a [devices] section")
    config = merge_cli_overrides(
        config,
        entropy_threshold=args.entropy_threshold,
        chi_threshold=args.chi_threshold,
        min_stat_len=args.min_stat_len,
        decision_method=args.decision_method,
        gap_threshold=args.gap_threshold,
        image_window=args.image_window,
        dict_dir=args.dict_dir,
    )
    result = analyze(args.capture, config)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    output = render(result.reports, args.format)
    if args.out:
        Path(args.out).write_bytes(output)
    else:
        sys.stdout.buffer.write(output)
    return result.exit_code


def _cmd_gen_corpus(args) -> int:
    spec = CorpusSpec(
        n_cleartext=args.n_cleartext,
        n_encrypted=args.n_encrypted,
        length_range=(args.min_len, args.max_len),
        seed=args.seed,
    )
    path = save_corpus(generate_corpus(spec), args.out)
    print(f"wrote {spec.n_cleartext + spec.n_encrypted} payloads to {path}")
    return 0


def _cmd_gen_fixture(args) -> int:
    Path(args.out).write_bytes(build_fixture_capture(args.scenario))
    print(f"wrote fixture {args.scenario} to {args.out}")
    if args.registry_out:
        save_registry(fixture_registry(args.scenario), args.registry_out)
        print(f"wrote registry to {args.registry_out}")
    return 0


def _format_method_table(report: MethodReport) -> str:
    lines = [f"{'Approach':<16} {'Precision':>10} {'% flagged cleartext':>20}"]
    for method in METHODS:
        stats = report.per_method[method]
        precision = "n/a" if stats.precision is None else f"{stats.precision:.3f}"
        lines.append(f"{_METHOD_LABELS[method]:<16} {precision:>10} {stats.fraction_flagged * 100:>19.1f}%")
    return "\n".join(lines) + "\n"


def _cmd_compare_methods(args) -> int:
    if args.corpus:
        corpus = load_corpus(args.corpus)
    else:
        corpus = generate_corpus(
            CorpusSpec(args.n_cleartext, args.n_encrypted, (args.min_len, args.max_len), args.seed)
        )
    report = compare_methods(
        corpus,
        ClassifierConfig(entropy_threshold=args.entropy_threshold, chi_threshold=args.chi_threshold),
    )
    if args.format == "json":
        doc = {
            method: {
                "precision": stats.precision,
                "fraction_flagged": stats.fraction_flagged,
                "true_positives": stats.true_positives,
                "false_positives": stats.false_positives,
                "false_negatives": stats.false_negatives,
            }
            for method, stats in report.per_method.items()
        }
        print(json.dumps(doc, indent=2))
    else:
        print(_format_method_table(report), end="")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "gen-corpus": _cmd_gen_corpus,
        "gen-fixture": _cmd_gen_fixture,
        "compare-methods": _cmd_compare_methods,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, MalformedCapture, ValueError) as exc:
        print(f"medleak: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"medleak: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
