#!/usr/bin/env python3
"""Greedy construction of a 3x5, N=31, girth-8 code free of (a<=8,b<=3) and (a<=10,b<=2) LETSs, then an independent audit."""

import argparse

from qclets.designer import DesignSpec, construct_fixed_N, verify


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=31)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--budget", type=float, default=3600, help="seconds")
    args = ap.parse_args()
    spec = DesignSpec(3, 5, 8, ((8, 3), (10, 2)), N=args.N, seed=args.seed, time_budget=args.budget)
    res = construct_fixed_N(spec)
    print(res.summary())
    if res.ok:
        print(res.matrix.to_text(), end="")
        print(verify(res.matrix, spec.ranges, spec.g0).report(), end="")


if __name__ == "__main__":
    main()
