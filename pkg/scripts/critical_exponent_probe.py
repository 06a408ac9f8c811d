"""Sweep p for the generalized (m, n) = (1, 1) partition integral.

Below the critical exponent the importance weights have infinite variance:
the estimate keeps drifting upward with the sample count and the effective
sample size collapses.  Above it both settle.  No closed form is assumed.
"""

import argparse

import numpy as np

from confmeasure.hankel import PartitionMCConfig, critical_exponent, partition_mc
from confmeasure.streams import RNGStream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--p", type=float, nargs="+", default=list(np.arange(1.2, 3.01, 0.2)))
    ap.add_argument("--samples", type=int, default=400_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for N in args.N:
        print(f"N={N}  (classical critical exponent {critical_exponent(N)})")
        print(f"{'p':>6} {'Z(n/4)':>12} {'Z(n)':>12} {'stderr':>10} {'ess/n':>8}")
        for k, p in enumerate(args.p):
            stream = RNGStream(args.seed).child(N, k)
            cfg = PartitionMCConfig(N=N, p=float(p), samples=args.samples, m=1.0, n=1.0)
            quarter = partition_mc(PartitionMCConfig(N=N, p=float(p), samples=args.samples // 4, m=1.0, n=1.0), stream)
            full = partition_mc(cfg, stream)
            print(f"{p:6.2f} {quarter.estimate:12.5g} {full.estimate:12.5g} {full.stderr:10.3g} {full.ess / full.samples:8.4f}")
        print()


if __name__ == "__main__":
    main()
