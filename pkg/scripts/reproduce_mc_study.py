#!/usr/bin/env python3
"""Run the default five-platform Monte Carlo study and print the summary table.

Writes metrics.json, the three CDF CSVs, and run_manifest.json under
results/mc/ (override with --outdir).
"""

import argparse
import json
import sys
from pathlib import Path

from diversity_lab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results/mc")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    code = cli_main(["mc", "--seed", str(args.seed), "--outdir", args.outdir])
    if code != 0:
        return code

    metrics = json.loads((Path(args.outdir) / "metrics.json").read_text(encoding="utf-8"))
    print(f"{'policy':<10} {'vulnerable':>11} {'compromised':>12} {'incidence':>10}")
    for policy, entry in metrics.items():
        print(
            f"{policy:<10} {entry['mean_vulnerable_fraction']:>11.4f} "
            f"{entry['mean_compromised_fraction']:>12.4f} "
            f"{entry['compromise_incidence']:>10.4f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
