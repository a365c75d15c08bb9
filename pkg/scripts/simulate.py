#!/usr/bin/env python3
"""FER curve of a published matrix under the 5-bit min-sum decoder.

    python3 scripts/simulate.py P2 --ebn0 3 3.5 4 --min-errors 100
"""

import argparse

from qclets.decoder import DecoderConfig, failure_csv, fer_point_parallel, results_csv
from qclets.known_codes import ALL


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("code", choices=sorted(ALL))
    ap.add_argument("--ebn0", type=float, nargs="+", default=[3.0, 4.0])
    ap.add_argument("--min-errors", type=int, default=100)
    ap.add_argument("--max-frames", type=int, default=2_000_000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    P = ALL[args.code].matrix
    res = [
        fer_point_parallel(P, e, args.threads, args.min_errors, args.max_frames, DecoderConfig(), args.seed + i)
        for i, e in enumerate(args.ebn0)
    ]
    print(results_csv(res), end="")
    print(failure_csv(res), end="")


if __name__ == "__main__":
    main()
