"""Fit the quadratic constants of W(u) and compare the linear terms with the printed pattern."""

import argparse

from confmeasure import schwarzian
from confmeasure.streams import RNGStream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    fits = [schwarzian.fit_w_constants(schwarzian.random_q_samples(RNGStream(args.seed).child(k).generator(), args.samples)) for k in range(2)]
    print(f"{'entry':>8} {'printed':>10} {'fitted':>12} {'closed form':>12}")
    for (i, j), printed, got, ok in schwarzian.compare_with_display(fits[0]):
        exact = schwarzian.linear_w_coefficient(i, j)
        print(f"W({i},-{j}) {float(printed):10.5f} {got:12.8f} {str(exact):>12} {'ok' if ok else 'differs'}")
    print()
    for name, (i, j) in schwarzian.DISPLAY_CONSTANTS.items():
        a, b = fits[0][name].quadratic, fits[1][name].quadratic
        exact = schwarzian.w_polynomial_exact(i, j)
        print(f"{name:>4} = {a:.12f}  refit {b:.12f}  residual {fits[0][name].residual:.1e}  exact {exact}")


if __name__ == "__main__":
    main()
