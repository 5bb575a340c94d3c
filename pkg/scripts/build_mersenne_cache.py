"""Regenerate src/twoprimes/data/mersenne.txt: factorizations of 2^d - 1."""

import argparse
import time
from pathlib import Path

from twoprimes.ntcore import FactorBudget, factorize

OUT = Path(__file__).resolve().parents[1] / "src" / "twoprimes" / "data" / "mersenne.txt"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=64)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    budget = FactorBudget(rho_iterations=20_000_000)
    lines = ["# n p^e ... [cofactor=c,bound=b] for n = 2^d - 1, 1 <= d <= %d" % args.dmax]
    for d in range(1, args.dmax + 1):
        t = time.perf_counter()
        f = factorize(2**d - 1, budget)
        lines.append(f.to_line())
        print(f"d={d:3d} complete={f.complete} {time.perf_counter() - t:.2f}s  {f.to_line()}")
    args.out.write_text("\n".join(lines) + "\n", encoding="ascii")


if __name__ == "__main__":
    main()
