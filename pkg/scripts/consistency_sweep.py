#!/usr/bin/env python3
"""Estimation error vs shot count under randomized measurement.

Usage:
    python scripts/consistency_sweep.py --seeds 100 --out sweep.csv

Simulates a pure state, runs the full estimate-and-project pipeline, and
tabulates RMSE and median error per N with the fitted log-log slope
(expected near -1/2).
"""

import argparse
import csv
import math

from blochmle.checks import consistency_errors


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--base-seed", type=int, default=0)
    parser.add_argument("--out", default="sweep.csv")
    args = parser.parse_args()

    n_values = (100, 1000, 10000, 100000)
    sweep = consistency_errors(n_values=n_values, seeds_per_n=args.seeds, base_seed=args.base_seed)

    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["n_shots", "rmse", "median_error"])
        for n, rmse in zip(n_values, sweep["rmse"]):
            writer.writerow([n, rmse, float(sorted(sweep["errors"][n])[len(sweep["errors"][n]) // 2])])

    print(f"wrote {args.out}")
    for n, rmse in zip(n_values, sweep["rmse"]):
        print(f"N = {n:>6d}   rmse {rmse:.5f}   sqrt(N)*rmse {rmse * math.sqrt(n):.3f}")
    print(f"rmse slope {sweep['rmse_slope']:.3f}, median slope {sweep['median_slope']:.3f}")


if __name__ == "__main__":
    main()
