"""Level-set measure of |G| > nu L for a range of L at the algebraic and transcendental thresholds."""

import argparse
import math

from twoprimes import constants as K
from twoprimes.levelset import decay_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmin", type=int, default=8)
    ap.add_argument("--lmax", type=int, default=16)
    ap.add_argument("--tol", type=float, default=1e-7)
    ap.add_argument("--nu", type=float, action="append",
                    help="threshold(s); defaults to both published constants and 0.9")
    args = ap.parse_args()
    nus = args.nu or [float(K.NU_ALGEBRAIC), float(K.NU_TRANSCENDENTAL), 0.9]
    Ls = list(range(args.lmin, args.lmax + 1))
    for nu in nus:
        rep = decay_report(nu, Ls, args.tol)
        slope = rep["fitted_exponent"]
        print(f"nu = {nu}  fitted exponent of measure_hi in X = 2^L: {slope if slope is None else round(slope, 4)}")
        for r in rep["rows"]:
            flag = "  (budget exhausted)" if r["budget_exhausted"] else ""
            print(f"  L={r['L']:>2}  [{r['measure_lo']:.6e}, {r['measure_hi']:.6e}]"
                  f"  log hi {math.log(r['measure_hi']):+.4f}{flag}")
        if rep["note"]:
            print("  note:", rep["note"])


if __name__ == "__main__":
    main()
