"""Where do sampled points miss the oracle-feasible cells of their class?

For each model, maps n strategies, bins them on an R-grid and reports the
share of points whose cell centroid is oracle-infeasible for the point's
class.  For those misses it re-runs the oracle at the point itself and
measures the distance to the nearest feasible centroid, in cell widths.

    python3 scripts/boundary_misses.py --samples 100000 --grid 100
"""

from __future__ import annotations

import argparse

import numpy as np

from catdilemma.coverage import build_grid, mapped_frequencies, oracle_mask
from catdilemma.model import conditionals_array, intransitive_array
from catdilemma.oracle import feasible_array
from catdilemma.sampling import sample


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = build_grid(args.grid)
    for model in ("classical", "prequant", "quant"):
        batch = sample(model, args.samples, args.seed)
        q, keep = mapped_frequencies(batch)
        q = q[keep]
        intrans = intransitive_array(conditionals_array(batch.model, batch.strategies)[keep])
        cells = grid.locate(q)
        print(f"{model}: {len(q)} mapped points")
        for name, sel in (("intransitive", intrans), ("transitive", ~intrans)):
            mask = oracle_mask(grid, model, name)
            miss = sel & ~mask[cells]
            share = miss.sum() / max(sel.sum(), 1)
            line = f"  {name:<13} in-cell {1 - share:.4f}  misses {int(miss.sum())}"
            if miss.any():
                pointwise, _ = feasible_array(q[miss], model, name)
                centres = grid.centroids[mask]
                dist = max(
                    float(np.min(np.linalg.norm(centres - p, axis=1))) for p in q[miss]
                ) * grid.resolution
                line += f"  pointwise-feasible {pointwise.mean():.4f}  max distance {dist:.2f} cells"
            print(line)


if __name__ == "__main__":
    main()
