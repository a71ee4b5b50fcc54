#!/usr/bin/env python3
"""Run the seeded randomized property battery and print its JSON report.
Exits nonzero when any suite records a failing trial."""

import argparse
import sys

from opeq.matio import emit_json
from opeq.sweep import run_sweep


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--max-dim", type=int, default=6, dest="max_dim")
    args = parser.parse_args(argv)
    doc = run_sweep(seed=args.seed, trials=args.trials, max_dim=args.max_dim)
    sys.stdout.write(emit_json(doc) + "\n")
    return 0 if doc["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
