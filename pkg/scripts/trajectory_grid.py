#!/usr/bin/env python3
"""Projection trajectories on a coordinate plane, for two weightings.

Usage:
    python scripts/trajectory_grid.py --grid 13 --samples 48 --out-prefix traj

Produces ``<prefix>_equal.csv`` and ``<prefix>_weighted.csv`` (weights
5:1:1 on the first axis).  Each row is trajectory_id, sample_index,
xi1, xi2, xi3; endpoints lie on the unit circle of the plane.  Plotting
xi1 against xi2 per trajectory reproduces the characteristic asymmetry:
with most measurements on axis 1, the trajectories barely move in xi1.
"""

import argparse
import csv

import numpy as np

from blochmle.core import norm_squared
from blochmle.projector import projection_trajectory

WEIGHTINGS = {
    "equal": np.array([1 / 3, 1 / 3, 1 / 3]),
    "weighted": np.array([5 / 7, 1 / 7, 1 / 7]),
}


def start_points(grid):
    for u in np.linspace(-1.0, 1.0, grid):
        for v in np.linspace(-1.0, 1.0, grid):
            point = np.array([u, v, 0.0])
            if norm_squared(point) > 1.0:
                yield point


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=13)
    parser.add_argument("--samples", type=int, default=48)
    parser.add_argument("--out-prefix", default="traj")
    args = parser.parse_args()

    for label, weights in WEIGHTINGS.items():
        path = f"{args.out_prefix}_{label}.csv"
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["trajectory_id", "sample_index", "xi1", "xi2", "xi3"])
            for tid, start in enumerate(start_points(args.grid)):
                curve = projection_trajectory(start, weights, args.samples)
                for k, point in enumerate(curve):
                    writer.writerow([tid, k, *point])
        print(f"wrote {path} (weights {weights.round(4).tolist()})")


if __name__ == "__main__":
    main()
