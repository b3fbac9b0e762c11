#!/usr/bin/env python3
"""Run the built-in selftest and print one line per check.

Usage: python scripts/run_selftest.py [--seed N]
"""

import argparse
import sys

from dctk.cli import run_selftest


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    failures = run_selftest(args.seed)
    if failures:
        for name in failures:
            print(f"FAIL {name}")
        return 1
    print("selftest OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
