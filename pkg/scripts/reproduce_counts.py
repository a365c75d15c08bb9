#!/usr/bin/env python3
"""Exact LETS multiplicities of a published matrix, printed next to the published column.

    python3 scripts/reproduce_counts.py P2 12 3
    python3 scripts/reproduce_counts.py P4 8 6 --b-search 8
"""

import argparse
import time

from qclets.known_codes import ALL, C1_COUNTS, C2_COUNTS, C4_COUNTS, C5_COUNTS
from qclets.qcgraph import lift
from qclets.search import exhaustive_enumerate

PUBLISHED = {"P1": C1_COUNTS, "P2": C2_COUNTS, "P4": C4_COUNTS, "P5": C5_COUNTS}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("code", choices=sorted(ALL))
    ap.add_argument("a_max", type=int)
    ap.add_argument("b_max", type=int)
    ap.add_argument("--no-symmetry", action="store_true")
    args = ap.parse_args()

    code = ALL[args.code]
    t0 = time.time()
    counts = exhaustive_enumerate(lift(code.matrix), args.a_max, args.b_max, symmetric=not args.no_symmetry)
    ref = PUBLISHED.get(args.code, {})
    print("a,b,count,published")
    for cls in sorted(set(counts.nonzero()) | set(ref)):
        if cls[0] <= args.a_max and cls[1] <= args.b_max:
            print(f"{cls[0]},{cls[1]},{counts[cls]},{ref.get(cls, '')}")
    print(f"# {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
