"""Tabulate finite-L estimates of A(1) against the published upper value, optionally as CSV."""

import argparse
import csv
import sys

from twoprimes import constants as K
from twoprimes.powers2 import a1_curve
from twoprimes.singular import default_c0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmin", type=int, default=2)
    ap.add_argument("--lmax", type=int, default=30)
    ap.add_argument("--precision", type=int, default=30)
    ap.add_argument("--csv", help="also write the rows here")
    args = ap.parse_args()
    rows = a1_curve(range(args.lmin, args.lmax + 1), default_c0(args.precision))
    print(f"{'L':>3}  {'A(1) lower':>20}  {'A(1) upper':>20}  gap to {K.A1_UPPER}")
    for r in rows:
        gap = float(K.A1_UPPER) - float(r["a_hi"])
        print(f"{r['L']:>3}  {r['a_lo']:>20}  {r['a_hi']:>20}  {gap:+.6f}")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    sys.exit(main())
