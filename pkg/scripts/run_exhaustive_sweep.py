#!/usr/bin/env python3
"""Sweep the exhaustive semi-diagonal populations and tabulate the minima.

Every feasible (a, d) with at most 22 free entries is enumerated over GF(2);
the observed minimum max-flattening rank is printed next to the ceil(a/(d-1))
prediction it must match.
"""

import argparse
import sys

from flatrank.search import MAX_FREE_ENTRIES, exhaustive_min_mfrank
from flatrank.tensor import classify_indices


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-a", type=int, default=3)
    parser.add_argument("--max-d", type=int, default=4)
    args = parser.parse_args()

    print(f"{'a':>3} {'d':>3} {'population':>12} {'min mfrank':>11} {'predicted':>10} {'min sum':>8}")
    failures = 0
    for a in range(1, args.max_a + 1):
        for d in range(2, args.max_d + 1):
            free = len(classify_indices(a, d)[2])
            if free > MAX_FREE_ENTRIES:
                print(f"{a:>3} {d:>3} {'(skipped)':>12}  free entries {free} over cap")
                continue
            rep = exhaustive_min_mfrank(a, d)
            predicted = -(-a // (d - 1))
            ok = rep.min_mfrank == predicted
            failures += 0 if ok else 1
            flag = "" if ok else "  << MISMATCH"
            print(
                f"{a:>3} {d:>3} {rep.count:>12} {rep.min_mfrank:>11} {predicted:>10}"
                f" {rep.min_sum_franks:>8}  ({rep.elapsed_s:.2f}s){flag}"
            )
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
