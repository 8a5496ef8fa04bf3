"""Indicator registry, raw data matrix, and pre-processing validation."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllMissingColumn,
    DataIOError,
    DuplicateIndicator,
    DuplicateTicker,
    EmptyDataset,
    InvalidIndicatorSpec,
    MissingValueRejected,
    NonFiniteValue,
    ShapeMismatch,
)


class Category(str, enum.Enum):
    PROFITABILITY = "Profitability"
    SOLVENCY = "Solvency"
    SUSTAINABLE_DEVELOPMENT = "SustainableDevelopment"
    OPERATIONAL = "Operational"


class Direction(str, enum.Enum):
    POSITIVE = "Positive"
    INVERSE = "Inverse"


class MissingPolicy(str, enum.Enum):
    REJECT = "reject"
    DROP_COMPANY = "drop-company"
    DROP_INDICATOR = "drop-indicator"
    IMPUTE_COLUMN_MEDIAN = "impute-median"


@dataclass(frozen=True)
class IndicatorSpec:
    id: str
    name: str
    category: Category
    direction: Direction
    units: str = ""

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id.strip():
            raise InvalidIndicatorSpec("indicator id must be a non-empty string")
        try:
            object.__setattr__(self, "category", Category(self.category))
        except ValueError:
            raise InvalidIndicatorSpec(
                f"indicator {self.id!r}: unknown category {self.category!r}"
            ) from None
        try:
            object.__setattr__(self, "direction", Direction(self.direction))
        except ValueError:
            raise InvalidIndicatorSpec(
                f"indicator {self.id!r}: unknown direction {self.direction!r}"
            ) from None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "category": self.category.value,
            "direction": self.direction.value,
            "units": self.units,
        }


@dataclass(frozen=True)
class IndicatorRegistry:
    """Ordered indicator specs; the order is the column order downstream."""

    specs: tuple[IndicatorSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        seen = set()
        for spec in self.specs:
            if spec.id in seen:
                raise DuplicateIndicator(f"duplicate indicator id {spec.id!r}")
            seen.add(spec.id)

    def __len__(self):
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)

    def __contains__(self, indicator_id):
        return any(s.id == indicator_id for s in self.specs)

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.specs]

    def index_of(self, indicator_id: str) -> int:
        for i, spec in enumerate(self.specs):
            if spec.id == indicator_id:
                return i
        raise KeyError(indicator_id)

    def get(self, indicator_id: str) -> IndicatorSpec:
        return self.specs[self.index_of(indicator_id)]

    def subset(self, indices: Iterable[int]) -> "IndicatorRegistry":
        return IndicatorRegistry(tuple(self.specs[i] for i in indices))

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "IndicatorRegistry":
        specs = []
        for rec in records:
            try:
                specs.append(
                    IndicatorSpec(
                        id=rec["id"],
                        name=rec.get("name", rec["id"]),
                        category=rec["category"],
                        direction=rec["direction"],
                        units=rec.get("units", ""),
                    )
                )
            except KeyError as exc:
                raise InvalidIndicatorSpec(f"registry record missing field {exc}") from None
        return cls(tuple(specs))

    @classmethod
    def from_json(cls, path) -> "IndicatorRegistry":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"cannot read registry file {str(path)!r}: {exc}") from None
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidIndicatorSpec(f"registry file {str(path)!r}: {exc}") from None
        if not isinstance(records, list):
            raise InvalidIndicatorSpec(f"registry file {str(path)!r} must hold a JSON array")
        return cls.from_records(records)

    def to_records(self) -> list[dict]:
        return [s.to_dict() for s in self.specs]


def default_registry() -> IndicatorRegistry:
    """The shipped 44-indicator registry in four categories."""
    text = resources.files("finentropy.data").joinpath("default_registry.json").read_text(
        encoding="utf-8"
    )
    return IndicatorRegistry.from_records(json.loads(text))


@dataclass(frozen=True)
class CompanyRecord:
    ticker: str
    name: str | None = None

    def __post_init__(self):
        if not isinstance(self.ticker, str) or not self.ticker.strip():
            raise InvalidIndicatorSpec("company ticker must be a non-empty string")


def _check_unique_tickers(companies: Sequence[CompanyRecord]):
    seen = set()
    for c in companies:
        if c.ticker in seen:
            raise DuplicateTicker(f"duplicate ticker {c.ticker!r}")
        seen.add(c.ticker)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    """Raw values r_ij, companies x indicators.

    ``values`` holds NaN wherever ``missing`` is True. Present cells are not
    checked for finiteness here; that is :func:`validate_matrix`'s job.
    """

    companies: tuple[CompanyRecord, ...]
    registry: IndicatorRegistry
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "companies", tuple(self.companies))
        _check_unique_tickers(self.companies)
        values = np.asarray(self.values, dtype=float)
        missing = np.asarray(self.missing, dtype=bool)
        shape = (len(self.companies), len(self.registry))
        if values.shape != shape or missing.shape != shape:
            raise ShapeMismatch(
                f"grid shape {values.shape} (mask {missing.shape}) does not match "
                f"{shape[0]} companies x {shape[1]} indicators"
            )
        values = np.where(missing, np.nan, values)
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "missing", _frozen(missing))

    @classmethod
    def from_rows(cls, companies, registry, rows) -> "IndicatorMatrix":
        """Build from nested lists where ``None`` marks a missing cell."""
        companies = tuple(
            c if isinstance(c, CompanyRecord) else CompanyRecord(c) for c in companies
        )
        n_cols = len(registry)
        if len(rows) != len(companies) or any(len(r) != n_cols for r in rows):
            raise ShapeMismatch(
                f"expected {len(companies)} rows of {n_cols} values"
            )
        missing = np.array([[v is None for v in r] for r in rows], dtype=bool).reshape(
            len(companies), n_cols
        )
        values = np.array(
            [[np.nan if v is None else float(v) for v in r] for r in rows], dtype=float
        ).reshape(len(companies), n_cols)
        return cls(companies, registry, values, missing)

    @property
    def tickers(self) -> list[str]:
        return [c.ticker for c in self.companies]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class ValidationAction:
    kind: str  # drop_company | drop_indicator | impute
    ticker: str | None = None
    indicator_id: str | None = None
    value: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True, eq=False)
class ValidatedMatrix:
    """A complete (no-missing, all-finite) indicator matrix."""

    companies: tuple[CompanyRecord, ...]
    registry: IndicatorRegistry
    values: np.ndarray
    report: tuple[ValidationAction, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=float)))
        object.__setattr__(self, "report", tuple(self.report))

    @property
    def missing(self) -> np.ndarray:
        return np.zeros(self.values.shape, dtype=bool)

    @property
    def tickers(self) -> list[str]:
        return [c.ticker for c in self.companies]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def validate_matrix(matrix, policy: MissingPolicy = MissingPolicy.REJECT) -> ValidatedMatrix:
    """Resolve missing cells according to ``policy`` and check finiteness.

    Accepts an :class:`IndicatorMatrix` or an already validated matrix (in
    which case the result is the same data with an empty report).

    Under ``IMPUTE_COLUMN_MEDIAN`` each missing cell receives the median of the
    column's present values.  Drop policies remove whole rows/columns and keep
    survivor order.
    """
    policy = MissingPolicy(policy)
    values = np.asarray(matrix.values, dtype=float)
    missing = np.asarray(matrix.missing, dtype=bool)
    companies = list(matrix.companies)
    registry = matrix.registry
    ids = registry.ids

    bad = ~missing & ~np.isfinite(values)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NonFiniteValue(
            f"non-finite value at cell (row={i}, col={j}) "
            f"ticker={companies[i].ticker!r} indicator={ids[j]!r}"
        )

    if values.shape[0] == 0 or values.shape[1] == 0:
        raise EmptyDataset("dataset has zero companies or zero indicators")

    report: list[ValidationAction] = []
    if missing.any():
        if policy is MissingPolicy.REJECT:
            i, j = map(int, np.argwhere(missing)[0])
            raise MissingValueRejected(i, j, companies[i].ticker, ids[j])
        if policy is MissingPolicy.DROP_COMPANY:
            keep = ~missing.any(axis=1)
            for i in np.flatnonzero(~keep):
                report.append(ValidationAction("drop_company", ticker=companies[i].ticker))
            values = values[keep]
            companies = [c for c, k in zip(companies, keep) if k]
        elif policy is MissingPolicy.DROP_INDICATOR:
            keep = ~missing.any(axis=0)
            for j in np.flatnonzero(~keep):
                report.append(ValidationAction("drop_indicator", indicator_id=ids[j]))
            values = values[:, keep]
            registry = registry.subset(np.flatnonzero(keep))
        else:
            values = values.copy()
            for j in range(values.shape[1]):
                col_missing = missing[:, j]
                if not col_missing.any():
                    continue
                present = values[~col_missing, j]
                if present.size == 0:
                    raise AllMissingColumn(f"column {ids[j]!r} has no present values")
                med = float(np.median(present))
                for i in np.flatnonzero(col_missing):
                    values[i, j] = med
                    report.append(
                        ValidationAction(
                            "impute", ticker=companies[i].ticker, indicator_id=ids[j], value=med
                        )
                    )
        if values.shape[0] == 0 or values.shape[1] == 0:
            raise EmptyDataset(
                f"no data left after applying missing-value policy {policy.value!r}"
            )

    return ValidatedMatrix(tuple(companies), registry, values, tuple(report))
