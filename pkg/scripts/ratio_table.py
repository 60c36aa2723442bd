"""Print |I(Q_d)| next to 2 sqrt(e) 2^{2^{d-1}} and the lower-bound assembly.

    python3 scripts/ratio_table.py --d-max 5
    python3 scripts/ratio_table.py --d-max 6 --extended   # about 10 s more
"""

import argparse

from hypercube_indsets import census


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d-max", type=int, default=5)
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--bounds-to", type=int, default=20,
                    help="also print the assembled lower bound up to this d")
    args = ap.parse_args()

    print(f"{'d':>3} {'count':>14} {'count/asymptotic':>18}")
    for d, ratio in census.ratio_table(args.d_max, extended=args.extended):
        n = census.count_independent_sets(d, extended=args.extended)
        print(f"{d:>3} {n:>14} {ratio:>18.9f}")

    print()
    print(f"{'d':>3} {'lower/asymptotic':>18}")
    for d in range(1, args.bounds_to + 1):
        rep = census.lower_bound_assembly(d)
        shown = "negative" if rep.correction_dominates else f"{rep.ratio_to_asymptotic:.9f}"
        print(f"{d:>3} {shown:>18}")


if __name__ == "__main__":
    main()
