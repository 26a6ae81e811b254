"""Command-line pipeline: index, identify, dedup, oracle, stats, regress,
estimate, generate, bench.

Machine-readable output goes to stdout, diagnostics to stderr. Exit
codes: 0 success, 2 usage error, 3 data error, 4 oracle cap exceeded.
Parameter precedence is flags > config file (JSON via --config) >
built-in defaults; the defaults mirror the standard experiment setup
(5x5 grid, 15/100 px edge bounds, 4 neighbors, threshold 90, minimum
matched descriptors 0).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import bench as bench_mod
from .cluster import build_table, load_table, save_table
from .dedup import (OracleCapExceededError, comparison_count, exhaustive_dedup,
                    format_report, timed_deduplicate)
from .grid import GridParams, compute_index
from .identify import identify
from .matcher import MatchParams
from .signature import (DirectoryStore, ParseError, iter_corpus_dir, iter_manifest,
                        read_signature_file, write_corpus_dir)
from .stats import (REFERENCE_SIZE_AVG_PAIRS, TABLE_COLUMNS, corpus_stats,
                    estimate_workload, fit_regression, format_rate, predict_avg)
from .synth import GenSpec, generate, write_ground_truth

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    """Engine parameters shared by the subcommands."""

    grid_n: int = 5
    min_edge: float = 15.0
    max_edge: float = 100.0
    neighbors_k: int = 4
    score_threshold: float = 90.0
    min_matched_descriptors: int = 0
    side_tolerance: float = 5.0
    angle_tolerance: float = 0.2618
    jobs: int = 1
    oracle_cap: int = 5000

    def grid(self) -> GridParams:
        return GridParams(self.grid_n)

    def matcher_params(self) -> MatchParams:
        return MatchParams(self.min_edge, self.max_edge, self.neighbors_k,
                           self.score_threshold, self.min_matched_descriptors,
                           self.side_tolerance, self.angle_tolerance)


_PARAM_FLAGS = [
    # (flag, config key, type, help)
    ("--grid-n", "grid_n", int, "side of the square block matrix (default 5)"),
    ("--min-edge", "min_edge", float, "minimum length between two minutiae in pixels (default 15)"),
    ("--max-edge", "max_edge", float, "maximum length between two minutiae in pixels (default 100)"),
    ("--neighbors", "neighbors_k", int, "number of closest neighbors per minutia (default 4)"),
    ("--threshold", "score_threshold", float, "matching score threshold, inclusive (default 90)"),
    ("--min-matched", "min_matched_descriptors", int, "minimum matched descriptors (default 0)"),
    ("--side-tolerance", "side_tolerance", float, "per-side pairing tolerance in pixels (default 5)"),
    ("--angle-tolerance", "angle_tolerance", float, "per-angle pairing tolerance in radians (default 0.2618)"),
    ("--jobs", "jobs", int, "parallel workers for bucket sweeps (default 1)"),
    ("--oracle-cap", "oracle_cap", int, "record cap for the exhaustive oracle (default 5000)"),
]


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; flags override its values")
    for flag, key, value_type, help_text in _PARAM_FLAGS:
        parser.add_argument(flag, dest=key, type=value_type, default=None, help=help_text)


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over config-file values over defaults."""
    values: dict = {}
    if getattr(args, "config", None) is not None:
        loaded = json.loads(Path(args.config).read_text())
        known = {f.name for f in fields(RunConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for _flag, key, _type, _help in _PARAM_FLAGS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return RunConfig(**values)


def _iter_input_corpus(args: argparse.Namespace):
    if getattr(args, "manifest", None):
        return iter_manifest(args.manifest)
    return iter_corpus_dir(args.corpus)


def _corpus_store(args: argparse.Namespace):
    if getattr(args, "manifest", None):
        return {s.record_id: s for s in iter_manifest(args.manifest)}
    return DirectoryStore(args.corpus)


def _load_or_build_table(args: argparse.Namespace, cfg: RunConfig):
    if getattr(args, "table", None):
        return load_table(args.table)
    grid = cfg.grid()
    return build_table((s.record_id, compute_index(s, grid).key_text)
                       for s in _iter_input_corpus(args))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_index(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    grid = cfg.grid()
    table = build_table((s.record_id, compute_index(s, grid).key_text)
                        for s in _iter_input_corpus(args))
    if table.size == 0:
        print("error: empty corpus", file=sys.stderr)
        return EXIT_DATA
    save_table(table, args.out)
    print(f"indexed {table.size} records into {len(table.buckets)} clusters "
          f"-> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_identify(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    query = read_signature_file(args.query)
    table = load_table(args.table)
    store = _corpus_store(args)
    result = identify(query, table, store, cfg.grid(), cfg.matcher_params())
    matched = {rid for rid, _ in result.matches}
    for record_id, score in result.candidates:
        print(f"{record_id}\t{score:.4f}\t{'true' if record_id in matched else 'false'}")
    print(f"penetration\t{result.penetration:.8f}")
    return EXIT_OK


def _cmd_dedup(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    table = _load_or_build_table(args, cfg)
    if table.size == 0:
        print("error: empty corpus", file=sys.stderr)
        return EXIT_DATA
    store = _corpus_store(args)
    report, wall = timed_deduplicate(table, store, cfg.matcher_params(), jobs=cfg.jobs)
    rendered = format_report(report, wall)
    if args.out:
        Path(args.out).write_text(rendered)
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(rendered)
    stats = corpus_stats(table, report, wall)
    if args.csv:
        print(",".join(TABLE_COLUMNS))
        print(stats.csv_row(args.name))
    else:
        print(f"n={stats.size} classes={stats.nb_class} avg={stats.avg:.4f} "
              f"max_p={stats.max_p} max_rate={format_rate(stats.max_rate)} "
              f"duplicates={stats.duplicates} comparisons={report.comparisons} "
              f"wall_s={wall:.4f}", file=sys.stderr)
    if args.oracle:
        groups = exhaustive_dedup(store, cfg.matcher_params(), cap=cfg.oracle_cap)
        sweep_pairs = _group_pairs(g for gs in report.groups_by_key.values() for g in gs)
        oracle_pairs = _group_pairs(groups)
        shared = _shared_key_pairs(table)
        agree = sweep_pairs & shared == oracle_pairs & shared
        print(f"oracle agreement on shared-key pairs: {'yes' if agree else 'NO'}",
              file=sys.stderr)
        if not agree:
            return EXIT_DATA
    return EXIT_OK


def _group_pairs(groups) -> set[frozenset]:
    pairs = set()
    for g in groups:
        for i in range(len(g)):
            for j in range(i + 1, len(g)):
                pairs.add(frozenset((g[i], g[j])))
    return pairs


def _shared_key_pairs(table) -> set[frozenset]:
    pairs = set()
    for bucket in table.buckets.values():
        for i in range(len(bucket)):
            for j in range(i + 1, len(bucket)):
                pairs.add(frozenset((bucket[i], bucket[j])))
    return pairs


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    store = _corpus_store(args)
    groups = exhaustive_dedup(store, cfg.matcher_params(), cap=cfg.oracle_cap)
    for group in groups:
        print(",".join(group))
    duplicates = sum(len(g) - 1 for g in groups if len(g) >= 2)
    print(f"oracle: {len(store)} records, {len(groups)} groups, "
          f"{duplicates} duplicates", file=sys.stderr)
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    table = _load_or_build_table(args, cfg)
    if table.size == 0:
        print("error: empty corpus", file=sys.stderr)
        return EXIT_DATA
    store = _corpus_store(args)
    report, wall = timed_deduplicate(table, store, cfg.matcher_params(), jobs=cfg.jobs)
    stats = corpus_stats(table, report, wall)
    if args.csv:
        print(",".join(TABLE_COLUMNS))
        print(stats.csv_row(args.name))
    else:
        print(f"name\t{args.name}")
        print(f"size\t{stats.size}")
        print(f"nb_class\t{stats.nb_class}")
        print(f"avg\t{stats.avg:.4f}")
        print(f"min_p\t{stats.min_p}")
        print(f"max_p\t{stats.max_p}")
        print(f"std_dev\t{stats.std_dev:.4f}")
        print(f"min_rate\t{format_rate(stats.min_rate)}")
        print(f"max_rate\t{format_rate(stats.max_rate)}")
        print(f"duplicates\t{stats.duplicates}")
        print(f"duration_s\t{stats.duration_s:.4f}")
        print(f"sweep_comparison_bound\t{comparison_count(table)}")
    return EXIT_OK


def _cmd_regress(args: argparse.Namespace) -> int:
    if args.points:
        points = []
        for line_no, line in enumerate(Path(args.points).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                x_text, y_text = line.split(",")
                points.append((float(x_text), float(y_text)))
            except ValueError:
                print(f"error: {args.points}:{line_no}: expected 'size,avg'", file=sys.stderr)
                return EXIT_DATA
    else:
        points = list(REFERENCE_SIZE_AVG_PAIRS)
    fit = fit_regression(points)
    print(f"slope\t{fit.slope:.6g}")
    print(f"intercept\t{fit.intercept:.9g}")
    for n in args.predict or []:
        print(f"predict\t{n}\t{predict_avg(fit, n):.9f}")
    return EXIT_OK


def _fmt_number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else f"{value:g}"


def _cmd_estimate(args: argparse.Namespace) -> int:
    estimate = estimate_workload(args.n, args.avg, args.ms_per_cmp)
    print(f"classes\t{_fmt_number(estimate.classes)}")
    print(f"comparisons\t{_fmt_number(estimate.comparisons)}")
    print(f"wall_ms\t{_fmt_number(estimate.wall_time_ms)}")
    print(f"wall_human\t{estimate.wall_time_human()}")
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = GenSpec(
        subjects=args.subjects,
        minutiae_per_print=(args.minutiae_min, args.minutiae_max),
        image_extent=(args.extent, args.extent),
        dup_fraction=args.dup,
        jitter=args.jitter,
        global_offset=args.offset,
        drop_prob=args.drop,
        seed=args.seed,
        min_spacing=args.spacing,
    )
    signatures, ground_truth = generate(spec)
    count = write_corpus_dir(signatures, args.out)
    truth_path = args.truth or Path(args.out).with_suffix(".truth.tsv")
    write_ground_truth(ground_truth, truth_path)
    print(f"wrote {count} records to {args.out}; "
          f"{len(ground_truth)} planted duplicates -> {truth_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    try:
        sizes = [int(token) for token in args.sizes.split(",") if token]
    except ValueError:
        print(f"error: --sizes expects comma-separated integers, got {args.sizes!r}",
              file=sys.stderr)
        return EXIT_DATA
    spec = GenSpec(subjects=0, dup_fraction=args.dup, seed=args.seed)
    rows = bench_mod.scaling_run(sizes, spec, cfg.grid(), cfg.matcher_params(),
                                 reps=args.reps, jobs=cfg.jobs)
    sys.stdout.write(bench_mod.rows_to_csv(rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpdedup",
        description="Cluster, identify, and deduplicate minutiae fingerprint signatures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def corpus_flags(p: argparse.ArgumentParser, table_optional: bool = True) -> None:
        p.add_argument("--corpus", type=Path, help="corpus directory, one file per record")
        p.add_argument("--manifest", type=Path, help="manifest of record_id<TAB>path lines")
        if table_optional:
            p.add_argument("--table", type=Path, help="prebuilt cluster table file")

    p = sub.add_parser("index", help="build a cluster table from a corpus")
    corpus_flags(p, table_optional=False)
    p.add_argument("--out", type=Path, required=True, help="output table file")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("identify", help="identify one query signature against a table")
    p.add_argument("--query", type=Path, required=True, help="query signature file")
    p.add_argument("--table", type=Path, required=True, help="cluster table file")
    corpus_flags(p, table_optional=False)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("dedup", help="sweep a corpus for duplicates")
    corpus_flags(p)
    p.add_argument("--out", type=Path, help="report file (default: stdout)")
    p.add_argument("--csv", action="store_true", help="emit the stats row as CSV")
    p.add_argument("--name", default="corpus", help="corpus label for the stats row")
    p.add_argument("--oracle", action="store_true",
                   help="also run the exhaustive oracle and check agreement (capped)")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_dedup)

    p = sub.add_parser("oracle", help="exhaustive all-pairs grouping (capped)")
    corpus_flags(p, table_optional=False)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("stats", help="cluster statistics of a corpus")
    corpus_flags(p)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of key-value text")
    p.add_argument("--name", default="corpus", help="corpus label for the stats row")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("regress", help="fit mean occupancy against database size")
    p.add_argument("--points", type=Path,
                   help="CSV of size,avg pairs (default: published reference pairs)")
    p.add_argument("--predict", type=float, action="append",
                   help="extrapolate the fit at this size (repeatable)")
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("estimate", help="forecast deduplication workload")
    p.add_argument("--n", type=float, required=True, help="database size")
    p.add_argument("--avg", type=float, required=True, help="mean records per class")
    p.add_argument("--ms-per-cmp", type=float, default=1.0,
                   help="milliseconds per comparison (default 1)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("generate", help="generate a synthetic corpus with ground truth")
    p.add_argument("--subjects", type=int, required=True)
    p.add_argument("--dup", type=float, default=0.0, help="duplicate fraction (default 0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="output corpus directory")
    p.add_argument("--truth", type=Path, help="ground-truth file (default: <out>.truth.tsv)")
    p.add_argument("--jitter", type=float, default=0.0, help="positional noise sigma, px")
    p.add_argument("--offset", type=int, default=30, help="max duplicate translation, px")
    p.add_argument("--drop", type=float, default=0.0, help="per-minutia drop probability")
    p.add_argument("--minutiae-min", type=int, default=20)
    p.add_argument("--minutiae-max", type=int, default=60)
    p.add_argument("--extent", type=int, default=350, help="square image extent, px")
    p.add_argument("--spacing", type=float, default=15.0, help="min inter-minutia spacing, px")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="scaling curves over synthetic corpora")
    p.add_argument("--sizes", required=True, help="comma-separated corpus sizes, ascending")
    p.add_argument("--reps", type=int, default=3, help="repetitions per timing (default 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dup", type=float, default=0.0, help="duplicate fraction (default 0)")
    p.add_argument("--csv", action="store_true", help="CSV output (always CSV; flag accepted)")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OracleCapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
