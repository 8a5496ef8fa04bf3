"""Command-line entry point: ``analyze``, ``corr`` and ``stats``.

Exit codes: 0 success, 1 input/validation error, 2 numerical error
(degenerate data), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .errors import FinEntropyError, InputError
from .indicators import IndicatorRegistry, MissingPolicy
from .reporting import RunConfig, emit_correlation, read_scores_csv, run_pipeline
from .stats import describe

log = logging.getLogger("finentropy")


def _split(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finentropy",
        description="Entropy-weighted financial competitiveness scoring.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="score and rank companies")
    a.add_argument("--data", required=True, help="wide CSV: ticker + indicator columns")
    a.add_argument("--registry", default=None, help="indicator registry JSON (default: shipped)")
    a.add_argument("--inverse-mode", default="corrected", choices=["corrected", "paper-literal"])
    a.add_argument("--entropy", default="continuous", choices=["continuous", "discrete"])
    a.add_argument("--weight-rule", default="paper", choices=["paper", "classic"])
    a.add_argument("--bandwidth", default="rot", help="'rot' or 'fixed:<h>'")
    a.add_argument("--grid", type=int, default=1025)
    a.add_argument("--missing", default="reject", choices=[m.value for m in MissingPolicy])
    a.add_argument("--out", default="out")
    a.add_argument("--format", default="csv,json", help="comma list from {csv,json}")
    a.add_argument("--corr-ids", default="", help="also write correlation.csv for these ids")
    a.add_argument("--workers", type=int, default=1,
                   help="threads for per-indicator entropy (output is identical)")

    c = sub.add_parser("corr", help="Pearson correlation of raw indicator columns")
    c.add_argument("--data", required=True)
    c.add_argument("--ids", required=True, help="comma-separated indicator ids")
    c.add_argument("--registry", default=None)
    c.add_argument("--missing", default="reject", choices=[m.value for m in MissingPolicy])
    c.add_argument("--out", default="out")

    s = sub.add_parser("stats", help="descriptive statistics of a scores.csv")
    s.add_argument("--scores", required=True)
    s.add_argument("--json", action="store_true", help="print JSON instead of a table")
    return parser


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, int):
        return str(v)
    return f"{v:.6f}"


def _cmd_analyze(args) -> int:
    config = RunConfig(
        data_path=args.data,
        registry_path=args.registry,
        inverse_mode=args.inverse_mode,
        entropy_method=args.entropy,
        weight_rule=args.weight_rule,
        bandwidth=args.bandwidth,
        grid_size=args.grid,
        missing_policy=args.missing,
        output_dir=args.out,
        output_formats=_split(args.format),
        corr_ids=_split(args.corr_ids),
    )
    report = run_pipeline(config, workers=max(1, args.workers))
    for row in report.score_board.rows[:10]:
        print(f"{row.rank:>4}  {row.ticker:<16} {row.score:.5f}")
    if len(report.score_board.rows) > 10:
        print(f"  ... {len(report.score_board.rows) - 10} more in {config.output_dir}")
    return 0


def _cmd_corr(args) -> int:
    ids = _split(args.ids)
    if len(ids) < 2:
        raise InputError("--ids needs at least two indicator ids")
    registry = IndicatorRegistry.from_json(args.registry) if args.registry else None
    corr = emit_correlation(args.data, ids, args.out, registry, MissingPolicy(args.missing))
    width = max(len(i) for i in corr.ids)
    for i, cid in enumerate(corr.ids):
        print(f"{cid:<{width}}  " + "  ".join(f"{v:>12.9f}" for v in corr.values[i][: i + 1]))
    return 0


_STATS_LABELS = [
    ("Mean", "mean"), ("Median", "median"), ("Std. Dev", "std_dev"), ("Kurtosis", "kurtosis"),
    ("Skewness", "skewness"), ("Smallest", "smallest"), ("Largest", "largest"), ("Obs", "obs"),
]


def _cmd_stats(args) -> int:
    stats = describe(read_scores_csv(args.scores))
    if args.json:
        print(json.dumps(stats.to_dict(), indent=2))
    else:
        for label, key in _STATS_LABELS:
            print(f"{label:<9} {_fmt(getattr(stats, key))}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler = {"analyze": _cmd_analyze, "corr": _cmd_corr, "stats": _cmd_stats}[args.command]
    try:
        return handler(args)
    except FinEntropyError as exc:
        stage = getattr(exc, "stage", None)
        prefix = f"error [{stage}]" if stage else "error"
        print(f"{prefix} {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
