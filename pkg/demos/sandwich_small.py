"""Lower bound, fractional upper bounds and the exact integral answer side by side.

On tiny problems every quantity can be computed, so the bounds can be
watched bracketing the truth.

    python demos/sandwich_small.py [--instances 10] [--n 10]
"""
import argparse

import numpy as np

from olsaudit import Dataset, NetConfig, brute_force_integral, greedy_upper_bound, lp_lower_bound, net_upper_bound


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--n", type=int, default=10)
    args = ap.parse_args()

    print(f"{'seed':>4} {'lower':>7} {'net':>7} {'integral':>8} {'greedy':>6}")
    for seed in range(args.instances):
        rng = np.random.default_rng(seed)
        ds = Dataset(rng.standard_normal((args.n, 2)), rng.standard_normal(args.n))
        low = lp_lower_bound(ds).value
        up = net_upper_bound(ds, NetConfig(500, seed)).value
        exact = brute_force_integral(ds).integral_stability
        greedy = greedy_upper_bound(ds).as_bound(ds.n).value
        print(f"{seed:>4} {low:>7.3f} {up:>7.3f} {exact:>8d} {greedy:>6.0f}")


if __name__ == "__main__":
    main()
