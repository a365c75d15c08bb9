#!/usr/bin/env python3
"""Run the acceptance suite (including slow full-scale checks) and print one line per criterion.

    python3 scripts/run_acceptance.py            # everything, can take hours on one core
    python3 scripts/run_acceptance.py --fast     # skip tests marked slow
    python3 scripts/run_acceptance.py -k criterion2
"""

import argparse
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--fast", action="store_true", help="skip slow tests")
    ap.add_argument("-k", default=None, help="pytest -k expression")
    args = ap.parse_args()
    argv = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-rN"]
    if args.fast:
        argv += ["-m", "not slow"]
    if args.k:
        argv += ["-k", args.k]
    return int(pytest.main(argv))


if __name__ == "__main__":
    sys.exit(main())
