"""Zeros of Gaussian holomorphic differentials: equivariance and first intensity.

Moving f by a disk automorphism moves its zeros by the same map.  The
expected number of zeros of the degree-m Gaussian in a hyperbolic disk of
radius R is 2m/pi times its invariant area: the first intensity is
(1/4pi) Laplacian of log K(z, z) with K(z, z) = (1 - |z|^2)^(-2m).
"""

import argparse

import numpy as np

from confmeasure.invariant import GroupElement, moebius_act
from confmeasure.measures import GaussianSpec, hyperbolic_area, sample_batch, zeros_in_disk
from confmeasure.series import PowerSeries
from confmeasure.streams import RNGStream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--R", type=float, default=1.2, help="hyperbolic radius, d(0, z) = arctanh|z|")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--order", type=int, default=300)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    stream = RNGStream(args.seed)
    rows = sample_batch(GaussianSpec(args.m, 1.0), args.order, stream.child(0), args.samples)
    r = np.tanh(args.R)
    counts = [len(zeros_in_disk(PowerSeries(row), r)) for row in rows]
    expected = 2 * args.m / np.pi * hyperbolic_area(args.R)
    print(f"zeros in hyperbolic disk R={args.R}: mean {np.mean(counts):.3f} +- {np.std(counts) / np.sqrt(len(counts)):.3f}, expected {expected:.3f}")

    g = GroupElement.random(stream.child(1).generator(), 0.3)
    worst = 0.0
    for row in rows[:10]:
        f = PowerSeries(row)
        z0 = zeros_in_disk(f, 0.6)
        moved = zeros_in_disk(moebius_act(g, f, args.m, args.order), 0.95)
        for z in g(z0):
            worst = max(worst, float(np.min(np.abs(moved - z))))
    print(f"max distance between g(zeros of f) and zeros of g.f: {worst:.2e}")


if __name__ == "__main__":
    main()
