"""Entropy-derived weights, composite scores, and ranking."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .density import EntropyMethod, EntropyValue
from .errors import ColumnMismatch, EmptyScores, InputError, RuleMethodMismatch, ZeroEntropySum

TIE_POLICY = "descending score; ties broken by ascending ticker (lexicographic)"


class WeightRule(str, enum.Enum):
    PAPER_PROPORTIONAL = "paper"
    CLASSIC_DIVERGENCE = "classic"


@dataclass(frozen=True)
class WeightEntry:
    indicator_id: str
    h: float
    w: float


@dataclass(frozen=True)
class WeightVector:
    entries: tuple[WeightEntry, ...]
    method: EntropyMethod
    weight_rule: WeightRule

    @property
    def ids(self) -> list[str]:
        return [e.indicator_id for e in self.entries]

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.w for e in self.entries])

    @property
    def entropies(self) -> np.ndarray:
        return np.array([e.h for e in self.entries])


def compute_weights(entropies: Sequence[EntropyValue],
                    rule: WeightRule = WeightRule.PAPER_PROPORTIONAL) -> WeightVector:
    """Turn per-indicator entropies into weights summing to one.

    ``PAPER_PROPORTIONAL``: w_j = H_j / Σ H (larger entropy, larger weight).
    ``CLASSIC_DIVERGENCE``: w_j = (1 - H_j) / Σ (1 - H); needs entropies
    already scaled to [0, 1], i.e. the discrete method.
    """
    rule = WeightRule(rule)
    entropies = list(entropies)
    if not entropies:
        raise InputError("no entropies to weight")
    methods = {e.method for e in entropies}
    if len(methods) != 1:
        raise RuleMethodMismatch("entropies were computed with mixed methods")
    method = methods.pop()
    h = [float(e.h) for e in entropies]
    if any(not math.isfinite(v) or v < 0 for v in h):
        raise InputError("entropies must be finite and >= 0")

    if rule is WeightRule.PAPER_PROPORTIONAL:
        raw = h
    else:
        if method is not EntropyMethod.DISCRETE:
            raise RuleMethodMismatch(
                "classic divergence weighting needs discrete entropies scaled to [0, 1]"
            )
        if any(v > 1.0 + 1e-12 for v in h):
            raise RuleMethodMismatch("classic divergence weighting needs entropies <= 1")
        raw = [max(1.0 - v, 0.0) for v in h]
    total = math.fsum(raw)
    if not total > 0:
        raise ZeroEntropySum(f"weight denominator is {total!r}; cannot normalize")
    entries = tuple(
        WeightEntry(e.indicator_id, hv, rv / total) for e, hv, rv in zip(entropies, h, raw)
    )
    return WeightVector(entries, method, rule)


@dataclass(frozen=True)
class ScoreRow:
    ticker: str
    score: float
    rank: int


@dataclass(frozen=True)
class ScoreBoard:
    rows: tuple[ScoreRow, ...]
    weight_vector: WeightVector | None = None
    tie_policy: str = TIE_POLICY

    def score_of(self, ticker: str) -> float:
        for row in self.rows:
            if row.ticker == ticker:
                return row.score
        raise KeyError(ticker)

    @property
    def scores(self) -> np.ndarray:
        return np.array([r.score for r in self.rows])


def rank_table(scores) -> list[ScoreRow]:
    """Rank ``{ticker: score}`` (or ``(ticker, score)`` pairs) descending.

    >>> [(r.ticker, r.rank) for r in rank_table({"A": 0.5, "B": 0.5})]
    [('A', 1), ('B', 2)]
    """
    items = list(scores.items()) if isinstance(scores, Mapping) else [tuple(p) for p in scores]
    if not items:
        raise EmptyScores("nothing to rank")
    for ticker, score in items:
        if not math.isfinite(score):
            raise InputError(f"score for {ticker!r} is not finite")
    ordered = sorted(items, key=lambda kv: (-kv[1], kv[0]))
    return [ScoreRow(t, float(s), i + 1) for i, (t, s) in enumerate(ordered)]


def weighted_scores(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Row-wise Σ_j w_j s_ij.

    Elementwise product then a row reduction, not a BLAS matvec, so the
    summation order does not depend on the BLAS thread count.
    """
    return (np.asarray(values, dtype=float) * np.asarray(weights, dtype=float)[None, :]).sum(axis=1)


def score_companies(normalized, weights: WeightVector) -> ScoreBoard:
    ids = normalized.registry.ids
    if ids != weights.ids:
        raise ColumnMismatch(
            f"weight ids {weights.ids} do not match normalized columns {ids}"
        )
    f = weighted_scores(normalized.values, weights.weights)
    rows = rank_table(list(zip(normalized.tickers, f.tolist())))
    return ScoreBoard(tuple(rows), weights, TIE_POLICY)


def category_scores(normalized, weights: WeightVector) -> dict[str, dict[str, float]]:
    """Per-company contribution of each indicator category to the score.

    Contributions of one company sum to its composite score.
    """
    if normalized.registry.ids != weights.ids:
        raise ColumnMismatch("weights do not align with normalized columns")
    w = weights.weights
    cats = [spec.category.value for spec in normalized.registry]
    out: dict[str, dict[str, float]] = {}
    for i, ticker in enumerate(normalized.tickers):
        row: dict[str, float] = {}
        for cat in dict.fromkeys(cats):
            mask = np.array([c == cat for c in cats])
            row[cat] = float((normalized.values[i, mask] * w[mask]).sum())
        out[ticker] = row
    return out

