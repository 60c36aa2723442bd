"""Count independent sets of Q_6 two independent ways and compare."""

import time

from hypercube_indsets.census import count_independent_sets


def main():
    for method in ("pairs", "branch"):
        start = time.perf_counter()
        n = count_independent_sets(6, method, extended=True)
        print(f"{method:>7}: {n}  ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
