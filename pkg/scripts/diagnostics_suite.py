"""Run every statistical check on both triangular models and print a summary.

    python scripts/diagnostics_suite.py --n 10000 --seed 1
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from mgpmix import SimulationConfig, sample_batch
from mgpmix.cli import load_model
from mgpmix.diagnostics import (distribution_checks, extremal_function_check, face_report,
                                mc_stdf_check)

MODELS = Path(__file__).resolve().parents[1] / "models"
Y_GRID = np.array([[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0.5, 1.0, 2.0], [2, 2, 2]], float)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--mc-draws", type=int, default=10 ** 6)
    args = parser.parse_args()
    ok = True
    for name in ("logistic_triangular", "huesler_reiss_triangular"):
        t0 = time.perf_counter()
        model = load_model(MODELS / f"{name}.json")
        batch = sample_batch(model, SimulationConfig(n=args.n, seed=args.seed))
        rng = np.random.default_rng(args.seed)
        print(f"## {name}")
        print(face_report(model, batch).format())
        summary = distribution_checks(model, batch)
        for j in range(model.d):
            summary.checks.extend(extremal_function_check(model, batch, j, rng).checks)
        max_z, _ = mc_stdf_check(model, Y_GRID, args.mc_draws, rng)
        summary.add("MC stdf on grid, max |z|", max_z, 4.0)
        print(summary.format())
        print(f"({time.perf_counter() - t0:.1f}s)\n")
        ok &= summary.passed
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
