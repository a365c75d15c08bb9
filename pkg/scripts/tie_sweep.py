#!/usr/bin/env python3
"""How much the greedy parent cover depends on tie-breaking.

Re-runs the cover for d_v=3, g=8, a<=12, b<=3 under random tie orders and
tallies (first-step picks, (8,4) picks, (9,5) picks, cost).
"""

import argparse
import random
from collections import Counter

from qclets.plan import build_plan, compute_target_set, cost_report, parent_cover
from qclets.search import default_b_search, structure_db


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orders", type=int, default=400)
    args = ap.parse_args()
    db = structure_db(3, 8, 12, default_b_search(3, 3))
    ts = compute_target_set(db, (12, 3), qc_only=True)
    tally = Counter()
    for seed in range(args.orders):
        rng = random.Random(seed)
        keys = {c: rng.random() for c in db.structures}
        steps = parent_cover(db, ts, True, tie_key=keys.get)
        second = Counter(db[p].cls for p in steps[1].chosen)
        cost = cost_report(build_plan(db, ts, steps))
        key = (len(steps[0].chosen), second[(8, 4)], second[(9, 5)], cost.get("dot2", 0), cost.get("pa2", 0), cost.get("pa3", 0))
        tally[key] += 1
    print("orders,first,from84,from95,dot2,pa2,pa3")
    for key, n in tally.most_common():
        print(n, *key, sep=",")


if __name__ == "__main__":
    main()
