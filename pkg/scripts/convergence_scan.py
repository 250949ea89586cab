"""Print exact-vs-asymptotic ratios along a ladder of semilengths.

    python scripts/convergence_scan.py [--ladder 125 250 500 1000 2000]
"""
import argparse
import time

from retakh import asymptotics

TARGETS = {
    "motzkin": asymptotics.compare_motzkin,
    "height": asymptotics.compare_height,
    "height-numerator": asymptotics.compare_height_numerator,
    "leaves": asymptotics.compare_leaves,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ladder", type=int, nargs="+", default=list(asymptotics.DEFAULT_LADDER))
    ap.add_argument("--only", choices=sorted(TARGETS), nargs="+", default=sorted(TARGETS))
    args = ap.parse_args()
    for name in args.only:
        t0 = time.perf_counter()
        rows = asymptotics.scan(TARGETS[name], args.ladder)
        print(f"{name}  ({time.perf_counter() - t0:.1f} s)")
        print(f"  {'n':>6}  {'ratio':>12}  {'|ratio-1|':>12}")
        for r in rows:
            print(f"  {r.n:>6}  {r.ratio:12.6f}  {r.deviation:12.6f}")
        print(f"  non-increasing deviation: {asymptotics.non_increasing_deviation(rows)}")


if __name__ == "__main__":
    main()
