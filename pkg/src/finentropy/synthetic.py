"""Seeded synthetic indicator data for demos and golden-file tests.

Regenerate the bundled fixture with::

    python -m finentropy.synthetic src/finentropy/fixtures/synthetic50.csv
"""

from __future__ import annotations

import sys

import numpy as np

from .indicators import IndicatorRegistry, default_registry

DEFAULT_SEED = 20241015


def _draw(rng: np.random.Generator, units: str, n: int) -> np.ndarray:
    if units == "percent":
        return rng.normal(12.0, 9.0, n)
    if units == "crore":
        return rng.lognormal(6.0, 1.3, n)
    if units == "days":
        return rng.uniform(20.0, 900.0, n)
    if units == "rupees":
        return rng.lognormal(5.0, 0.9, n)
    return rng.lognormal(0.3, 0.7, n)


def generate(n_companies: int = 50, seed: int = DEFAULT_SEED,
             registry: IndicatorRegistry | None = None) -> tuple[list[str], np.ndarray]:
    registry = registry or default_registry()
    rng = np.random.default_rng(seed)
    tickers = [f"SYN{i:03d}" for i in range(1, n_companies + 1)]
    # round so the CSV text is the exact data the pipeline sees
    cols = [np.round(_draw(rng, spec.units, n_companies), 4) for spec in registry]
    return tickers, np.column_stack(cols)


def to_csv(tickers, values, registry: IndicatorRegistry | None = None,
           seed: int = DEFAULT_SEED) -> str:
    registry = registry or default_registry()
    lines = [
        f"# synthetic {len(tickers)}x{len(registry)} indicator matrix; "
        f"generator=finentropy.synthetic; seed={seed}",
        ",".join(["ticker"] + registry.ids),
    ]
    for t, row in zip(tickers, values):
        lines.append(",".join([t] + [f"{v:.4f}" for v in row]))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        print("usage: python -m finentropy.synthetic OUT.csv [SEED]", file=sys.stderr)
        return 1
    seed = int(argv[1]) if len(argv) > 1 else DEFAULT_SEED
    tickers, values = generate(seed=seed)
    with open(argv[0], "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(tickers, values, seed=seed))
    return 0


if __name__ == "__main__":
    sys.exit(main())
