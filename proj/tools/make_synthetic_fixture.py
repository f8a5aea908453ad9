#!/usr/bin/env python3
"""Generate the bundled synthetic unconventional-well table (data/unconv_synthetic.csv).

200 wells, six predictors and an initial-production response. Marginal moments
and the correlation structure follow the public GeoDataSets unconv_MV_v4 table;
values are a seeded multivariate-normal draw, so the file is reproducible.
"""
import argparse

import numpy as np

NAMES = ["Por", "Perm", "AI", "Brittle", "TOC", "VR", "Prod"]
MEANS = np.array([14.99, 4.33, 2.97, 48.66, 0.99, 1.96, 4311.0])
STDS = np.array([2.97, 1.73, 0.57, 14.39, 0.48, 0.30, 1997.0])
CORR = np.array([
    [1.00, 0.76, -0.55, -0.22, 0.80, 0.11, 0.86],
    [0.76, 1.00, -0.24, -0.12, 0.47, 0.05, 0.70],
    [-0.55, -0.24, 1.00, 0.17, -0.60, 0.49, -0.39],
    [-0.22, -0.12, 0.17, 1.00, -0.21, 0.32, -0.02],
    [0.80, 0.47, -0.60, -0.21, 1.00, 0.30, 0.64],
    [0.11, 0.05, 0.49, 0.32, 0.30, 1.00, 0.06],
    [0.86, 0.70, -0.39, -0.02, 0.64, 0.06, 1.00],
])


def nearest_pd(c):
    w, v = np.linalg.eigh(c)
    w = np.clip(w, 1e-3, None)
    c = v @ np.diag(w) @ v.T
    d = np.sqrt(np.diag(c))
    return c / np.outer(d, d)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/unconv_synthetic.csv")
    ap.add_argument("--seed", type=int, default=73073)
    ap.add_argument("--n", type=int, default=200)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    z = rng.multivariate_normal(np.zeros(len(NAMES)), nearest_pd(CORR), size=args.n)
    x = MEANS + z * STDS
    x[:, 1] = np.clip(x[:, 1], 0.5, None)          # permeability stays positive
    x[:, 6] = np.clip(x[:, 6], 250.0, 9750.0)       # production inside the bin range
    with open(args.out, "w") as f:
        f.write("WellIndex," + ",".join(NAMES) + "\n")
        for i, row in enumerate(x, start=1):
            cells = [f"{v:.2f}" for v in row[:-1]] + [f"{row[-1]:.1f}"]
            f.write(f"{i}," + ",".join(cells) + "\n")


if __name__ == "__main__":
    main()
