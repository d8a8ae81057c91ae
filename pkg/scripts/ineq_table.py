#!/usr/bin/env python3
"""Tabulate the Y - (m/2) log Y = m log(c Delta) analysis: real root, integer
minimum, the matching case bound and the uniform bound, as CSV."""

import argparse
import csv
import sys

from hullsupport import bounds as B


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=int, nargs="+", default=list(range(1, 9)))
    p.add_argument("--cdelta", type=int, nargs="+", default=[4, 8, 9, 10, 16, 32, 64])
    args = p.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["m", "cDelta", "root", "integer_min", "case", "case_bound", "uniform_bound", "dominated"])
    bad = 0
    for m in args.m:
        for cd in args.cdelta:
            y = B.minimal_Y(m, cd)
            case = B.ineq_table_bound(m, 1, cd)
            uni = B.ineq_uniform_bound(m, 1, cd)
            ok = y <= case.bound and y <= uni
            bad += not ok
            w.writerow([m, cd, f"{float(y):.6f}", B.minimal_Y_integer(m, cd), case.case_id,
                        f"{float(case.bound):.6f}", f"{float(uni):.6f}", int(ok)])
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
