"""Descriptive statistics of a score distribution and Pearson correlation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyInput, InputError, LengthMismatch, NonFiniteValue, ZeroVarianceColumn


@dataclass(frozen=True)
class DescriptiveStats:
    """Summary of a sample.

    ``std_dev`` uses the n-1 denominator. ``skewness`` and ``kurtosis`` follow
    the adjusted spreadsheet conventions (SKEW / KURT) and are ``None`` when
    the sample is too small or has zero spread.
    """

    mean: float
    median: float
    std_dev: float
    kurtosis: float | None
    skewness: float | None
    smallest: float
    largest: float
    obs: int

    def to_dict(self) -> dict:
        return asdict(self)


def describe(values) -> DescriptiveStats:
    x = np.asarray(values, dtype=float).ravel()
    n = x.size
    if n == 0:
        raise EmptyInput("describe() needs at least one value")
    if not np.isfinite(x).all():
        raise NonFiniteValue("describe() input contains non-finite values")
    mean = float(x.mean())
    sd = float(x.std(ddof=1)) if n > 1 else 0.0
    skew = kurt = None
    if sd > 0:
        z = (x - mean) / sd
        if n >= 3:
            skew = float(n / ((n - 1) * (n - 2)) * np.sum(z**3))
        if n >= 4:
            kurt = float(
                n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * np.sum(z**4)
                - 3 * (n - 1) ** 2 / ((n - 2) * (n - 3))
            )
    return DescriptiveStats(
        mean=mean,
        median=float(np.median(x)),
        std_dev=sd,
        kurtosis=kurt,
        skewness=skew,
        smallest=float(x.min()),
        largest=float(x.max()),
        obs=int(n),
    )


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    ids: tuple[str, ...]
    values: np.ndarray

    def __getitem__(self, pair):
        a, b = pair
        return float(self.values[self.ids.index(a), self.ids.index(b)])


def pearson_matrix(columns: Sequence, ids: Sequence[str]) -> CorrelationMatrix:
    """Pairwise Pearson coefficients; diagonal is exactly 1.

    Only the upper triangle is computed and then mirrored, so the result is
    exactly symmetric.
    """
    ids = tuple(ids)
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    if len(cols) != len(ids):
        raise LengthMismatch(f"{len(cols)} columns but {len(ids)} ids")
    if len(cols) < 2:
        raise InputError("pearson_matrix needs at least 2 columns")
    n = cols[0].size
    for cid, c in zip(ids, cols):
        if c.size != n:
            raise LengthMismatch(f"column {cid!r} has length {c.size}, expected {n}")
        if not np.isfinite(c).all():
            raise NonFiniteValue(f"column {cid!r} contains non-finite values")
    if n < 2:
        raise InputError("columns need at least 2 observations")

    centered = []
    sums_sq = []
    for cid, c in zip(ids, cols):
        d = c - c.mean()
        ss = float(np.sum(d * d))
        if not ss > 0:
            raise ZeroVarianceColumn(cid)
        centered.append(d)
        sums_sq.append(ss)

    k = len(cols)
    r = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            # sqrt of the product (not product of sqrts): sqrt(fl(s*s)) == s
            # exactly, so a duplicated column correlates at exactly 1
            v = float(np.sum(centered[a] * centered[b])) / math.sqrt(sums_sq[a] * sums_sq[b])
            r[a, b] = r[b, a] = min(1.0, max(-1.0, v))
    r.setflags(write=False)
    return CorrelationMatrix(ids, r)
