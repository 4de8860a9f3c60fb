#!/usr/bin/env python3
"""Run the acceptance suite and print one line per criterion.

    python3 scripts/run_acceptance.py [--skip-slow]
"""
import argparse
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip-slow", action="store_true", help="skip the D4 stretch criterion")
    args = ap.parse_args()
    argv = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    if args.skip_slow:
        argv += ["-m", "not slow"]
    return pytest.main(argv)


if __name__ == "__main__":
    sys.exit(main())
