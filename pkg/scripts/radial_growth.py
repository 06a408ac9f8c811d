"""Radial growth of the rescaled degree-0 Gaussian along a ray.

Prints quantiles of |x(r)| / sqrt(rho(r) log(rho(sqrt r) / (1 - r))) as r -> 1.
Bounded quantiles are the finite-truncation picture of the almost sure bound.
"""

import argparse

import numpy as np

from confmeasure.measures import GaussianSpec, radial_growth, sample_batch
from confmeasure.streams import RNGStream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.5, 0.9, 0.99, 0.999])
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=8)
    args = ap.parse_args()

    order = int(np.ceil(10 / (1 - max(args.radii))))
    x = sample_batch(GaussianSpec(0, 1.0, rescaled=True), order, RNGStream(args.seed), args.samples)
    ratios = radial_growth(x, args.radii)
    print(f"truncation {order}, {args.samples} samples")
    print(f"{'r':>7} {'median':>8} {'q90':>8} {'max':>8}")
    for j, r in enumerate(args.radii):
        col = ratios[:, j]
        print(f"{r:7.3f} {np.nanmedian(col):8.3f} {np.nanquantile(col, 0.9):8.3f} {np.nanmax(col):8.3f}")


if __name__ == "__main__":
    main()
