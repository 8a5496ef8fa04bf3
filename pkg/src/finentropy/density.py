"""Kernel-smoothed CDF estimation and entropy functionals.

The continuous entropy of an indicator is ``-∫_0^1 φ(x) ln φ(x) dx`` where φ
is the CDF of the indicator's normalized values, estimated with a Gaussian
kernel mixture and truncated to the unit interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import (
    BandwidthNonPositive,
    DegenerateColumn,
    InputError,
    InvalidCdf,
    NegativeProbability,
    NonFiniteValue,
    ProbabilitiesNotNormalized,
    ZeroColumnSum,
)

DEFAULT_GRID_SIZE = 1025
MIN_GRID_SIZE = 64
BANDWIDTH_FLOOR = 1e-3


class EntropyMethod(str, enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class BandwidthPolicy:
    """``BandwidthPolicy()`` is the rule of thumb; ``BandwidthPolicy(0.05)`` is fixed."""

    fixed: float | None = None

    def __post_init__(self):
        if self.fixed is not None and not (math.isfinite(self.fixed) and self.fixed > 0):
            raise BandwidthNonPositive(f"fixed bandwidth must be > 0, got {self.fixed!r}")

    @classmethod
    def parse(cls, text: str) -> "BandwidthPolicy":
        """Parse ``rot`` / ``rule-of-thumb`` or ``fixed:<h>``."""
        text = text.strip()
        if text in ("rot", "rule-of-thumb"):
            return cls()
        if text.startswith("fixed:"):
            try:
                h = float(text[len("fixed:"):])
            except ValueError:
                raise InputError(f"bad bandwidth {text!r}") from None
            return cls(h)
        raise InputError(f"bad bandwidth {text!r}; expected 'rot' or 'fixed:<h>'")

    def __str__(self):
        return "rot" if self.fixed is None else f"fixed:{self.fixed!r}"


RULE_OF_THUMB = BandwidthPolicy()


def rule_of_thumb_bandwidth(data) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5), floored at 1e-3.

    Falls back to the standard deviation alone when the IQR is zero.
    """
    x = np.asarray(data, dtype=float)
    n = x.size
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75, 25])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    return max(0.9 * spread * n ** -0.2, BANDWIDTH_FLOOR)


@dataclass(frozen=True, eq=False)
class CdfEstimate:
    grid: np.ndarray
    values: np.ndarray
    bandwidth: float | None = None
    sample_size: int = 0

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def check(self) -> None:
        """Raise :class:`InvalidCdf` unless every invariant holds."""
        g, v = self.grid, self.values
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise InvalidCdf("grid and values must be equal-length 1-d arrays")
        if g[0] != 0.0 or g[-1] != 1.0 or not (np.diff(g) > 0).all():
            raise InvalidCdf("grid must increase strictly from 0 to 1")
        if not np.isfinite(v).all() or v.min() < 0.0 or v.max() > 1.0:
            raise InvalidCdf("CDF values must lie in [0, 1]")
        if (np.diff(v) < 0).any():
            raise InvalidCdf("CDF values must be non-decreasing")
        if v[0] != 0.0 or v[-1] != 1.0:
            raise InvalidCdf("CDF must equal 0 at x=0 and 1 at x=1")

    def __call__(self, x):
        return np.interp(x, self.grid, self.values)


def estimate_cdf(column, bandwidth_policy: BandwidthPolicy = RULE_OF_THUMB,
                 grid_size: int = DEFAULT_GRID_SIZE) -> CdfEstimate:
    """Gaussian-kernel CDF of ``column`` on a uniform grid over [0, 1].

    The mixture CDF Φ is renormalized as (Φ(x) - Φ(0)) / (Φ(1) - Φ(0)) so the
    mass leaking outside the unit interval is discarded.
    """
    x = np.asarray(column, dtype=float)
    if x.ndim != 1:
        raise InputError("column must be 1-d")
    if not np.isfinite(x).all():
        raise NonFiniteValue("column contains non-finite values")
    if x.size < 2 or np.unique(x).size < 2:
        raise DegenerateColumn("need at least 2 distinct values to estimate a CDF")
    if int(grid_size) != grid_size or grid_size < MIN_GRID_SIZE:
        raise InputError(f"grid_size must be an integer >= {MIN_GRID_SIZE}, got {grid_size!r}")
    grid_size = int(grid_size)
    # the estimate is a symmetric function of the sample; sorting makes the
    # floating-point result independent of company order too
    x = np.sort(x)
    if not isinstance(bandwidth_policy, BandwidthPolicy):
        raise InputError(f"unsupported bandwidth policy {bandwidth_policy!r}")
    h = rule_of_thumb_bandwidth(x) if bandwidth_policy.fixed is None else bandwidth_policy.fixed

    grid = np.linspace(0.0, 1.0, grid_size)
    # grid_size x n kernel CDFs; mean along axis 1 is a fixed-order reduction
    raw = ndtr((grid[:, None] - x[None, :]) / h).mean(axis=1)
    lo, hi = raw[0], raw[-1]
    if not hi > lo:
        raise DegenerateColumn("kernel mixture places no mass on [0, 1]")
    values = (raw - lo) / (hi - lo)
    values = np.clip(np.maximum.accumulate(values), 0.0, 1.0)
    values[0] = 0.0
    values[-1] = 1.0
    return CdfEstimate(grid=grid, values=values, bandwidth=float(h), sample_size=int(x.size))


def neg_t_log_t(t) -> np.ndarray:
    """-t ln t elementwise, with the t=0 limit taken as 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = -t[pos] * np.log(t[pos])
    return out


def trapezoid(y, x) -> float:
    """Composite trapezoidal rule over (possibly non-uniform) nodes ``x``."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1])) / 2.0)


def cdf_entropy_integral(grid, values) -> float:
    """Quadrature of -φ ln φ on the given nodes, without CDF invariant checks.

    Only requires values in [0, 1]; useful for injected test functions.
    """
    v = np.asarray(values, dtype=float)
    if v.size and (v.min() < 0.0 or v.max() > 1.0):
        raise InvalidCdf("integrand values must lie in [0, 1]")
    return trapezoid(neg_t_log_t(v), grid)


@dataclass(frozen=True)
class EntropyValue:
    indicator_id: str
    h: float
    method: EntropyMethod
    bandwidth: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", EntropyMethod(self.method))
        if not (math.isfinite(self.h) and self.h >= 0.0):
            raise InputError(f"entropy must be finite and >= 0, got {self.h!r}")


def continuous_entropy(cdf: CdfEstimate, indicator_id: str = "") -> EntropyValue:
    cdf.check()
    h = cdf_entropy_integral(cdf.grid, cdf.values)
    # the integrand is >= 0 pointwise, so only round-off can push h below 0
    h = min(max(h, 0.0), 1.0 / math.e)
    return EntropyValue(indicator_id, h, EntropyMethod.CONTINUOUS)


def discrete_entropy(probabilities, k: float = 1.0, indicator_id: str = "") -> EntropyValue:
    """Shannon entropy ``-k Σ p ln p`` with 0 ln 0 = 0."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InputError("probabilities must be a non-empty 1-d sequence")
    if not np.isfinite(p).all():
        raise NonFiniteValue("probabilities must be finite")
    if (p < 0).any():
        raise NegativeProbability("probabilities must be >= 0")
    if abs(math.fsum(p) - 1.0) > 1e-9:
        raise ProbabilitiesNotNormalized(f"probabilities sum to {math.fsum(p)!r}, not 1")
    if not (math.isfinite(k) and k > 0):
        raise InputError(f"k must be > 0, got {k!r}")
    h = k * math.fsum(neg_t_log_t(p))
    return EntropyValue(indicator_id, max(h, 0.0), EntropyMethod.DISCRETE)


def column_entropy(column, method: EntropyMethod = EntropyMethod.CONTINUOUS, *,
                   bandwidth_policy: BandwidthPolicy = RULE_OF_THUMB,
                   grid_size: int = DEFAULT_GRID_SIZE,
                   indicator_id: str = "") -> EntropyValue:
    """Entropy of one normalized column by the requested method.

    The discrete method builds p_i = s_i / Σ s and scales by k = 1/ln n so
    the result lies in [0, 1].
    """
    method = EntropyMethod(method)
    if method is EntropyMethod.CONTINUOUS:
        cdf = estimate_cdf(column, bandwidth_policy, grid_size)
        ev = continuous_entropy(cdf, indicator_id)
        return EntropyValue(ev.indicator_id, ev.h, ev.method, cdf.bandwidth)

    s = np.asarray(column, dtype=float)
    if s.size < 2:
        raise InputError("discrete entropy needs at least 2 observations")
    total = math.fsum(s)
    if not total > 0:
        raise ZeroColumnSum(f"column {indicator_id!r} sums to {total!r}")
    p = s / total
    return discrete_entropy(p, 1.0 / math.log(s.size), indicator_id)
