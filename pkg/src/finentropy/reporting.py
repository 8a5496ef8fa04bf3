"""Dataset ingestion, the end-to-end scoring run, and report files."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import re
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .density import DEFAULT_GRID_SIZE, MIN_GRID_SIZE, BandwidthPolicy, EntropyMethod, column_entropy
from .errors import (
    DataIOError,
    DuplicateTicker,
    FinEntropyError,
    InputError,
    NonFiniteValue,
    ParseError,
    UnknownIndicatorColumn,
)
from .indicators import (
    CompanyRecord,
    IndicatorMatrix,
    IndicatorRegistry,
    MissingPolicy,
    ValidatedMatrix,
    default_registry,
    validate_matrix,
)
from .normalization import InverseMode, NormalizedMatrix, normalize_matrix
from .stats import CorrelationMatrix, DescriptiveStats, describe, pearson_matrix
from .weighting import (
    ScoreBoard,
    WeightRule,
    WeightVector,
    category_scores,
    compute_weights,
    score_companies,
)

OUTPUT_FORMATS = ("csv", "json")

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_NON_FINITE = re.compile(r"^[+-]?(nan|inf|infinity)$", re.IGNORECASE)


# --- ingestion -----------------------------------------------------------

def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise DataIOError(f"data file not found: {str(path)!r}") from None
    except OSError as exc:
        raise DataIOError(f"cannot read {str(path)!r}: {exc}") from None


def _data_lines(text: str) -> list[str]:
    # '#' lines carry provenance comments (e.g. the fixture's seed)
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def parse_number(cell: str, where: str) -> float | None:
    """Parse one CSV cell; empty means missing."""
    cell = cell.strip()
    if cell == "":
        return None
    if _NON_FINITE.match(cell):
        raise NonFiniteValue(f"non-finite value {cell!r} at {where}")
    if not _NUMBER.match(cell):
        raise ParseError(f"cannot parse {cell!r} as a number at {where}")
    value = float(cell)
    if not np.isfinite(value):
        raise NonFiniteValue(f"value {cell!r} overflows at {where}")
    return value


def load_dataset(data_path, registry: IndicatorRegistry | None = None) -> IndicatorMatrix:
    """Read a wide CSV: ``ticker`` then one column per indicator id.

    The resulting matrix uses registry order for its columns, restricted to
    the indicators present in the file.
    """
    registry = registry or default_registry()
    rows = list(csv.reader(_data_lines(_read_text(data_path))))
    if not rows:
        raise ParseError(f"{str(data_path)!r}: no header row")
    header = [h.strip() for h in rows[0]]
    if not header or header[0].lower() != "ticker":
        raise ParseError(f"{str(data_path)!r}: first header must be 'ticker', got {header[:1]}")
    columns = header[1:]
    seen = set()
    for name in columns:
        if name not in registry:
            raise UnknownIndicatorColumn(name)
        if name in seen:
            raise ParseError(f"{str(data_path)!r}: duplicate column {name!r}")
        seen.add(name)

    order = [j for j, spec in enumerate(registry) if spec.id in seen]
    sub = registry.subset(order)
    file_pos = {name: k for k, name in enumerate(columns)}

    companies, grid = [], []
    tickers = set()
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"{str(data_path)!r} row {line_no}: expected {len(header)} fields, got {len(row)}"
            )
        ticker = row[0].strip()
        if not ticker:
            raise ParseError(f"{str(data_path)!r} row {line_no}: empty ticker")
        if ticker in tickers:
            raise DuplicateTicker(f"duplicate ticker {ticker!r} at row {line_no}")
        tickers.add(ticker)
        companies.append(CompanyRecord(ticker))
        cells = row[1:]
        grid.append([
            parse_number(
                cells[file_pos[spec.id]],
                f"{str(data_path)!r} row {line_no}, column {spec.id!r}",
            )
            for spec in sub
        ])
    return IndicatorMatrix.from_rows(companies, sub, grid)


# --- configuration -------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    data_path: str
    registry_path: str | None = None
    inverse_mode: str = InverseMode.CORRECTED.value
    entropy_method: str = EntropyMethod.CONTINUOUS.value
    weight_rule: str = WeightRule.PAPER_PROPORTIONAL.value
    bandwidth: str = "rot"
    grid_size: int = DEFAULT_GRID_SIZE
    missing_policy: str = MissingPolicy.REJECT.value
    output_dir: str = "out"
    output_formats: tuple[str, ...] = OUTPUT_FORMATS
    corr_ids: tuple[str, ...] = ()

    def __post_init__(self):
        for name, enum_cls in (
            ("inverse_mode", InverseMode),
            ("entropy_method", EntropyMethod),
            ("weight_rule", WeightRule),
            ("missing_policy", MissingPolicy),
        ):
            try:
                object.__setattr__(self, name, enum_cls(getattr(self, name)).value)
            except ValueError:
                choices = ", ".join(m.value for m in enum_cls)
                raise InputError(f"{name}: {getattr(self, name)!r} not in {{{choices}}}") from None
        object.__setattr__(self, "bandwidth", str(BandwidthPolicy.parse(self.bandwidth)))
        if isinstance(self.grid_size, bool) or int(self.grid_size) != self.grid_size \
                or self.grid_size < MIN_GRID_SIZE:
            raise InputError(f"grid_size must be an integer >= {MIN_GRID_SIZE}")
        object.__setattr__(self, "grid_size", int(self.grid_size))
        formats = tuple(self.output_formats)
        bad = [f for f in formats if f not in OUTPUT_FORMATS]
        if bad or not formats:
            raise InputError(f"output formats must be a non-empty subset of {OUTPUT_FORMATS}")
        object.__setattr__(self, "output_formats", tuple(f for f in OUTPUT_FORMATS if f in formats))
        object.__setattr__(self, "corr_ids", tuple(self.corr_ids))

    @property
    def bandwidth_policy(self) -> BandwidthPolicy:
        return BandwidthPolicy.parse(self.bandwidth)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["output_formats"] = list(self.output_formats)
        d["corr_ids"] = list(self.corr_ids)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["output_formats"] = tuple(d.get("output_formats", OUTPUT_FORMATS))
        d["corr_ids"] = tuple(d.get("corr_ids", ()))
        return cls(**d)

    def registry(self) -> IndicatorRegistry:
        if self.registry_path is None:
            return default_registry()
        return IndicatorRegistry.from_json(self.registry_path)


# --- the run -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunReport:
    score_board: ScoreBoard
    weights: WeightVector
    descriptive_stats: DescriptiveStats
    config_echo: RunConfig
    validated: ValidatedMatrix
    normalized: NormalizedMatrix
    bandwidths: dict
    data_sha256: str
    correlation: CorrelationMatrix | None = None
    tool_version: str = __version__
    categories: dict = field(default_factory=dict)

    def diagnostics(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "config_echo": self.config_echo.to_dict(),
            "data_sha256": self.data_sha256,
            "n_companies": len(self.normalized.companies),
            "n_indicators_scored": len(self.normalized.registry),
            "validation_actions": [a.to_dict() for a in self.validated.report],
            "dropped_constant_columns": list(self.normalized.dropped),
            "normalization_range": {
                k: {"min": lo, "max": hi} for k, (lo, hi) in self.normalized.provenance.items()
            },
            "bandwidths": self.bandwidths,
            "tie_policy": self.score_board.tie_policy,
        }


class _Stage:
    """Tag errors escaping a block with the pipeline stage they came from."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, FinEntropyError) and not hasattr(exc, "stage"):
            exc.stage = self.name
        return False


def _entropies(normalized: NormalizedMatrix, config: RunConfig, workers: int):
    method = EntropyMethod(config.entropy_method)
    policy = config.bandwidth_policy

    def one(j):
        spec = normalized.registry.specs[j]
        try:
            return column_entropy(
                normalized.values[:, j], method,
                bandwidth_policy=policy, grid_size=config.grid_size, indicator_id=spec.id,
            )
        except FinEntropyError as exc:
            exc.args = (f"indicator {spec.id!r}: {exc}",)
            raise

    idx = range(len(normalized.registry))
    if workers <= 1:
        return [one(j) for j in idx]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, idx))


def compute_report(config: RunConfig, workers: int = 1) -> RunReport:
    """Run validate, normalize, entropy, weights, scores, and stats in memory."""
    with _Stage("indicator-model"):
        registry = config.registry()
        raw_bytes = _read_text(config.data_path).encode("utf-8")
        matrix = load_dataset(config.data_path, registry)
        validated = validate_matrix(matrix, MissingPolicy(config.missing_policy))
    with _Stage("normalization"):
        normalized = normalize_matrix(validated, InverseMode(config.inverse_mode))
    with _Stage("density-entropy"):
        entropies = _entropies(normalized, config, workers)
    with _Stage("weighting-scoring"):
        weights = compute_weights(entropies, WeightRule(config.weight_rule))
        board = score_companies(normalized, weights)
        cats = category_scores(normalized, weights)
    with _Stage("stats-analysis"):
        stats = describe(board.scores)
        corr = None
        if config.corr_ids:
            corr = correlation_for(validated, config.corr_ids)
    bandwidths = {e.indicator_id: e.bandwidth for e in entropies if e.bandwidth is not None}
    return RunReport(
        score_board=board,
        weights=weights,
        descriptive_stats=stats,
        config_echo=config,
        validated=validated,
        normalized=normalized,
        bandwidths=bandwidths,
        data_sha256=hashlib.sha256(raw_bytes).hexdigest(),
        correlation=corr,
        categories=cats,
    )


def correlation_for(matrix, ids) -> CorrelationMatrix:
    registry = matrix.registry
    cols = []
    for cid in ids:
        if cid not in registry:
            raise UnknownIndicatorColumn(cid)
        cols.append(np.asarray(matrix.values)[:, registry.index_of(cid)])
    return pearson_matrix(cols, ids)


# --- rendering -----------------------------------------------------------

def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render_scores_csv(board: ScoreBoard) -> str:
    return _csv([("rank", "ticker", "score")] + [(r.rank, r.ticker, f"{r.score:.5f}") for r in board.rows])


def render_weights_csv(weights: WeightVector) -> str:
    return _csv([("indicator_id", "entropy", "weight")]
                + [(e.indicator_id, repr(e.h), repr(e.w)) for e in weights.entries])


def render_correlation_csv(corr: CorrelationMatrix) -> str:
    rows = [("",) + corr.ids]
    for i, cid in enumerate(corr.ids):
        rows.append((cid,) + tuple(f"{v:.9g}" for v in corr.values[i]))
    return _csv(rows)


def render_report(report: RunReport) -> dict[str, str]:
    """File name -> contents for every output of a run."""
    cfg = report.config_echo
    board, weights = report.score_board, report.weights
    files: dict[str, str] = {}
    if "csv" in cfg.output_formats:
        files["scores.csv"] = render_scores_csv(board)
        files["weights.csv"] = render_weights_csv(weights)
    if "json" in cfg.output_formats:
        files["scores.json"] = _json({
            "tie_policy": board.tie_policy,
            "rows": [{"rank": r.rank, "ticker": r.ticker, "score": r.score} for r in board.rows],
            "category_contributions": report.categories,
        })
        files["weights.json"] = _json({
            "method": weights.method.value,
            "weight_rule": weights.weight_rule.value,
            "entries": [
                {"indicator_id": e.indicator_id, "entropy": e.h, "weight": e.w}
                for e in weights.entries
            ],
        })
    files["stats.json"] = _json(report.descriptive_stats.to_dict())
    files["diagnostics.json"] = _json(report.diagnostics())
    if report.correlation is not None:
        files["correlation.csv"] = render_correlation_csv(report.correlation)
    return files


def write_outputs(files: dict[str, str], output_dir) -> list[Path]:
    """Write all files or none.

    Contents go to a scratch directory next to ``output_dir`` first and are
    renamed into place only once every file has been written.
    """
    out = Path(output_dir)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(tempfile.mkdtemp(prefix=".finentropy-", dir=out.parent))
    except OSError as exc:
        raise DataIOError(f"cannot prepare output directory {str(out)!r}: {exc}") from None
    try:
        for name, text in files.items():
            with open(tmp / name, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in files:
            os.replace(tmp / name, out / name)
            written.append(out / name)
        return written
    except OSError as exc:
        raise DataIOError(f"cannot write outputs to {str(out)!r}: {exc}") from None
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def run_pipeline(config: RunConfig, workers: int = 1) -> RunReport:
    """Compute the report and write its files into ``config.output_dir``."""
    report = compute_report(config, workers=workers)
    write_outputs(render_report(report), config.output_dir)
    return report


def emit_correlation(data_path, ids, output_dir, registry: IndicatorRegistry | None = None,
                     missing_policy: MissingPolicy = MissingPolicy.REJECT) -> CorrelationMatrix:
    """Correlate raw indicator columns and write ``correlation.csv``."""
    matrix = load_dataset(data_path, registry)
    validated = validate_matrix(matrix, missing_policy)
    corr = correlation_for(validated, ids)
    write_outputs({"correlation.csv": render_correlation_csv(corr)}, output_dir)
    return corr


def read_scores_csv(path) -> list[float]:
    rows = list(csv.reader(_data_lines(_read_text(path))))
    if not rows or [h.strip() for h in rows[0]] != ["rank", "ticker", "score"]:
        raise ParseError(f"{str(path)!r}: header must be rank,ticker,score")
    scores = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError(f"{str(path)!r} row {line_no}: expected 3 fields")
        v = parse_number(row[2], f"{str(path)!r} row {line_no}, column 'score'")
        if v is None:
            raise ParseError(f"{str(path)!r} row {line_no}: empty score")
        scores.append(v)
    return scores
