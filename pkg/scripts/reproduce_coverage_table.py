"""Print the coverage table (oracle and empirical) next to the reference values.

    python3 scripts/reproduce_coverage_table.py --oracle-grid 256 --samples 100000 --seed 0
"""

from __future__ import annotations

import argparse
import json

from catdilemma.cli import report_text
from catdilemma.coverage import DEFAULT_EMPIRICAL_R, DEFAULT_ORACLE_R, coverage_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--oracle-grid", type=int, default=DEFAULT_ORACLE_R)
    ap.add_argument("--empirical-grid", type=int, default=DEFAULT_EMPIRICAL_R)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", help="also write the full report here")
    args = ap.parse_args()

    rep = coverage_table(
        oracle_R=args.oracle_grid,
        n=args.samples,
        seed=args.seed,
        empirical_R=args.empirical_grid,
        workers=args.workers,
    )
    print(report_text(rep), end="")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")


if __name__ == "__main__":
    main()
