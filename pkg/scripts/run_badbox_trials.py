#!/usr/bin/env python3
"""Bad-box sampler trials: attempts, family sizes, and full verification.

Runs the product-family sampler over a seed range and confirms every output
is bad-box-free and satisfies the complete-graph configuration mod 2.
"""

import argparse
import sys

from flatrank.fw import complete_graph_config, is_config_satisfying, sample_badbox_family


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t", type=int, default=5)
    parser.add_argument("--s", type=int, default=2)
    parser.add_argument("--seeds", type=int, default=20, help="number of seeds to try")
    args = parser.parse_args()

    worst_attempts = 0
    for seed in range(args.seeds):
        fam = sample_badbox_family(args.t, args.s, seed=seed)
        cfg = complete_graph_config(fam.k)
        ok = is_config_satisfying(fam.flat_family(), cfg, distinct="positions")
        worst_attempts = max(worst_attempts, fam.attempts)
        print(
            f"seed {seed:>3}: size {len(fam.members_factors)}, k={fam.k},"
            f" attempts={fam.attempts}, config-satisfying={ok}"
        )
        if not ok:
            return 1
    print(f"worst attempts over {args.seeds} seeds: {worst_attempts}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
