"""Empirical coverage as the sample count grows, against the exact area.

Shows how slowly uniform sampling fills the outer arms of the feasible
region: the map to the triangle concentrates mass near the centre, so the
empirical fraction creeps toward the oracle value only for very large n.

    python3 scripts/coverage_convergence.py --model classical --grid 100
"""

from __future__ import annotations

import argparse

from catdilemma.coverage import CLASSES, build_grid, empirical_coverage, oracle_coverage
from catdilemma.sampling import sample


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="classical", choices=("classical", "prequant", "quant"))
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-exponent", type=int, default=6)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    grid = build_grid(args.grid)
    exact = [oracle_coverage(grid, args.model, k).fraction for k in CLASSES]
    print(f"{'n':>9} " + " ".join(f"{k.value:>13}" for k in CLASSES))
    for e in range(3, args.max_exponent + 1):
        batch = sample(args.model, 10**e, args.seed, workers=args.workers)
        row = [empirical_coverage(batch, grid, k).fraction for k in CLASSES]
        print(f"{10**e:>9} " + " ".join(f"{v:>13.4f}" for v in row))
    print(f"{'oracle':>9} " + " ".join(f"{v:>13.4f}" for v in exact))


if __name__ == "__main__":
    main()
