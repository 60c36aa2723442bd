"""Largest |A|/|N(A)| over small even sets, scaled by d.

Shows that d * max ratio stays bounded (by 16/7 in every checked case),
so a constant of the form C/d is right but C must exceed 2.
"""

import argparse

from hypercube_indsets.isoperimetry import SMALL_SET_CONSTANT, check_small_set_expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d-min", type=int, default=3)
    ap.add_argument("--d-max", type=int, default=10)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"constant C = {SMALL_SET_CONSTANT}")
    print(f"{'d':>3} {'mode':>11} {'max ratio':>10} {'d * ratio':>10} {'holds':>6}")
    for d in range(args.d_min, args.d_max + 1):
        rep = check_small_set_expansion(d, d, samples=args.samples, seed=args.seed)
        print(f"{d:>3} {rep.mode:>11} {str(rep.max_ratio):>10} "
              f"{float(rep.max_ratio * d):>10.4f} {str(rep.holds):>6}")


if __name__ == "__main__":
    main()
