"""How close the lower bound gets to the net upper bound as noise grows.

    python demos/isotropic_tightness.py [--n 1000] [--seeds 3]
"""
import argparse

import numpy as np

from olsaudit import LowerBoundConfig, NetConfig, gen_isotropic, lp_lower_bound, net_upper_bound


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    print(f"{'sigma':>6} {'lower':>8} {'net':>8} {'ratio':>6}")
    for sigma in (0.5, 1.0, 2.0, 5.0, 10.0):
        lows, ups = [], []
        for seed in range(args.seeds):
            ds = gen_isotropic(args.n, 2, sigma, seed=seed)
            lows.append(lp_lower_bound(ds, LowerBoundConfig(seed=seed)).value)
            ups.append(net_upper_bound(ds, NetConfig(1000, seed)).value)
        low, up = np.median(lows), np.median(ups)
        print(f"{sigma:>6} {low:>8.1f} {up:>8.1f} {low / up:>6.2f}")


if __name__ == "__main__":
    main()
