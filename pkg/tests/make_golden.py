"""Regenerate the frozen golden outputs for the bundled synthetic fixture.

Run from the repository root::

    python tests/make_golden.py

Only do this after an intentional change to the numerical pipeline.
"""

import os
import shutil
import tempfile
from pathlib import Path

from finentropy.reporting import RunConfig, run_pipeline

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "finentropy" / "fixtures"
GOLDEN = FIXTURES / "golden"

# relative paths so the echoed config does not depend on where the run happens
GOLDEN_CONFIG = RunConfig(data_path="synthetic50.csv", output_dir="out")


def run_in(workdir: Path, workers: int = 1) -> Path:
    shutil.copy(FIXTURES / "synthetic50.csv", workdir / "synthetic50.csv")
    cwd = os.getcwd()
    os.chdir(workdir)
    try:
        run_pipeline(GOLDEN_CONFIG, workers=workers)
    finally:
        os.chdir(cwd)
    return workdir / "out"


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        out = run_in(Path(tmp))
        shutil.rmtree(GOLDEN, ignore_errors=True)
        shutil.copytree(out, GOLDEN)
    print("wrote", sorted(p.name for p in GOLDEN.iterdir()))
