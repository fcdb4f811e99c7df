"""Face probabilities and empirical proportions for the two triangular models.

    python scripts/face_table.py --n 1000 --seed 0
"""

import argparse
from pathlib import Path

from mgpmix import SimulationConfig, sample_batch
from mgpmix.cli import load_model
from mgpmix.diagnostics import face_report

MODELS = Path(__file__).resolve().parents[1] / "models"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    for name in ("logistic_triangular", "huesler_reiss_triangular"):
        model = load_model(MODELS / f"{name}.json")
        batch = sample_batch(model, SimulationConfig(n=args.n, seed=args.seed))
        print(f"# {name}  n={args.n}  l(1)={model.ell_one:.6f}")
        print(face_report(model, batch).format())
        print()


if __name__ == "__main__":
    main()
