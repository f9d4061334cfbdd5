#!/usr/bin/env python3
"""Run all four figure presets and collect their CSV series under one
output directory.

    python3 scripts/reproduce_figures.py --out out/
    python3 scripts/reproduce_figures.py --out out/ --quick

--quick shrinks path counts and horizons so the whole set finishes in
seconds; the full presets take a few minutes.
"""

import argparse
import sys

from aoisim.cli import main as aoisim_main

FULL = {2: [], 3: [], 4: [], 5: []}
QUICK = {
    2: ["--paths", "50", "--horizon", "200"],
    3: ["--paths", "10", "--horizon", "5000"],
    4: ["--horizon", "5000"],
    5: ["--paths", "20", "--horizon", "5000"],
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    overrides = QUICK if args.quick else FULL
    for figure in (2, 3, 4, 5):
        argv = ["reproduce", "--figure", str(figure),
                "--out", f"{args.out}/fig{figure}",
                "--seed", str(args.seed), *overrides[figure]]
        print("+ aoisim", " ".join(argv))
        code = aoisim_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
