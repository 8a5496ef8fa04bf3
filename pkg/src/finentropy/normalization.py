"""Min-max non-dimensionalization of indicator columns."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .errors import AllColumnsDegenerate, DegenerateColumn, InputError, NonFiniteValue
from .indicators import CompanyRecord, Direction, IndicatorRegistry

log = logging.getLogger(__name__)


class InverseMode(str, enum.Enum):
    CORRECTED = "corrected"
    PAPER_LITERAL = "paper-literal"


def _column_range(column) -> tuple[np.ndarray, float, float]:
    col = np.asarray(column, dtype=float)
    if col.ndim != 1 or col.size == 0:
        raise InputError("column must be a non-empty 1-d sequence")
    if not np.isfinite(col).all():
        raise NonFiniteValue("column contains non-finite values")
    lo, hi = float(col.min()), float(col.max())
    if not hi > lo:
        raise DegenerateColumn(f"column is constant (value {lo!r})")
    return col, lo, hi


def normalize_positive(column) -> np.ndarray:
    """Scale so the column minimum maps to 0 and the maximum to 1."""
    col, lo, hi = _column_range(column)
    out = (col - lo) / (hi - lo)
    # exact endpoints regardless of rounding in the division
    out[col == lo] = 0.0
    out[col == hi] = 1.0
    return out


def normalize_inverse(column, mode: InverseMode = InverseMode.CORRECTED) -> np.ndarray:
    """Scale an inverse (lower-is-better) column.

    ``CORRECTED`` maps the minimum to 1 and the maximum to 0.
    ``PAPER_LITERAL`` evaluates ``(min - r) / (max - min)`` verbatim, giving
    values in [-1, 0].
    """
    mode = InverseMode(mode)
    col, lo, hi = _column_range(column)
    if mode is InverseMode.CORRECTED:
        out = (hi - col) / (hi - lo)
        out[col == hi] = 0.0
        out[col == lo] = 1.0
    else:
        out = (lo - col) / (hi - lo)
        out[col == lo] = 0.0
        out[col == hi] = -1.0
    return out


@dataclass(frozen=True, eq=False)
class NormalizedMatrix:
    companies: tuple[CompanyRecord, ...]
    registry: IndicatorRegistry
    values: np.ndarray
    provenance: dict  # indicator id -> (raw min, raw max)
    dropped: tuple[str, ...] = ()
    mode: InverseMode = InverseMode.CORRECTED

    @property
    def tickers(self) -> list[str]:
        return [c.ticker for c in self.companies]

    def column(self, indicator_id: str) -> np.ndarray:
        return self.values[:, self.registry.index_of(indicator_id)]


def normalize_matrix(matrix, mode: InverseMode = InverseMode.CORRECTED) -> NormalizedMatrix:
    """Normalize every column of a validated matrix by its direction.

    Constant columns are dropped (and logged) since min-max scaling is
    undefined for them.
    """
    mode = InverseMode(mode)
    values = np.asarray(matrix.values, dtype=float)
    if np.asarray(matrix.missing).any():
        raise InputError("normalize_matrix requires a complete (validated) matrix")
    kept, cols, provenance, dropped = [], [], {}, []
    for j, spec in enumerate(matrix.registry):
        raw = values[:, j]
        try:
            if spec.direction is Direction.POSITIVE:
                s = normalize_positive(raw)
            else:
                s = normalize_inverse(raw, mode)
        except DegenerateColumn:
            log.warning("dropping constant indicator column %r", spec.id)
            dropped.append(spec.id)
            continue
        kept.append(j)
        cols.append(s)
        provenance[spec.id] = (float(raw.min()), float(raw.max()))
    if not kept:
        raise AllColumnsDegenerate("every indicator column is constant; nothing to score")
    out = np.column_stack(cols)
    out.setflags(write=False)
    return NormalizedMatrix(
        companies=tuple(matrix.companies),
        registry=matrix.registry.subset(kept),
        values=out,
        provenance=provenance,
        dropped=tuple(dropped),
        mode=mode,
    )
