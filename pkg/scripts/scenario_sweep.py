#!/usr/bin/env python3
"""Sweep the attacker goal T for several platform pool sizes.

For each N, runs the continuous-time engine over a T grid and writes
success_fraction.csv under results/scenario/n<N>/. The default exploit
model (one single-platform exploit plus one pair exploit, uniformly
random arrivals) matches the library default.
"""

import argparse
import csv
import sys
from pathlib import Path

from diversity_lab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-values", default="1,3,5")
    parser.add_argument("--t-sweep", default="0:300:15")
    parser.add_argument("--samples", type=int, default=300)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--outdir", default="results/scenario")
    args = parser.parse_args()

    for n in args.n_values.split(","):
        outdir = Path(args.outdir) / f"n{n}"
        code = cli_main(
            [
                "scenario",
                "--N", n,
                "--T-sweep", args.t_sweep,
                "--samples", str(args.samples),
                "--seed", str(args.seed),
                "--outdir", str(outdir),
            ]
        )
        if code != 0:
            return code
        with open(outdir / "success_fraction.csv", newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))[1:]
        print(f"N={n}: success fraction from {rows[0][2]} at T={rows[0][1]} "
              f"to {rows[-1][2]} at T={rows[-1][1]} ({len(rows)} grid points)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
