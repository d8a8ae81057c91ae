#!/usr/bin/env python3
"""Run the eight acceptance checks and print one PASS/FAIL line each.

Usage:
    python scripts/run_acceptance_suite.py [--only 1 4 6]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import test_acceptance as acc  # noqa: E402


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    args = p.parse_args()
    wanted = args.only or range(1, len(acc.CHECKS) + 1)
    failed = 0
    for k in wanted:
        t0 = time.perf_counter()
        ok, detail = acc.CHECKS[k - 1]()
        failed += not ok
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail}) [{time.perf_counter() - t0:.1f}s]", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
