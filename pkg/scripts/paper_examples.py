"""Print the worked s0 instances beside their reported values, with the quotient before the ceiling."""

import argparse

from twoprimes.s0calc import paper_examples


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=40)
    args = ap.parse_args()
    for r in paper_examples(args.precision):
        q = r["quotient"]
        mark = "MISMATCH" if r["discrepancy"] else "match"
        print(f"{r['instance']:<14} {r['formula']:<26} computed {r['computed']:>4}  reported {r['reported']:>4}"
              f"  {mark}  quotient in [{q['lo']}, {q['hi']}]")


if __name__ == "__main__":
    main()
