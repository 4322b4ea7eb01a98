"""Render the nine ternary panels (three models x three classes) as SVG.

Each panel overlays the oracle-feasible cells with the sampled points that
survive the class filter.

    python3 scripts/render_figures.py --out figures --samples 10000 --seed 0
"""

from __future__ import annotations

import argparse
import sys

from catdilemma.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("--labels", choices=("foods", "electoral"), default="foods")
    args = ap.parse_args()
    return cli_main(
        [
            "figure", "--model", "all", "--class", "all-three",
            "--samples", str(args.samples), "--seed", str(args.seed),
            "--grid", str(args.grid), "--labels", args.labels, "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
