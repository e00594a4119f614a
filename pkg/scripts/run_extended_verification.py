#!/usr/bin/env python3
"""Run every verification claim at full published scale and summarize.

This is the long lane: the default CI suite covers the same claims on
smaller domains. Exits nonzero if any claim reports violations.
"""
import argparse
import os
import sys

from msum.campaign import list_claims, run_claim

FULL_SCALE = {
    "theorem1": {"e_max": 1000},
    "divisibility": {"e_max": 1000},
    "lemma3": {"e_max": 1000},
    "two_power": {"k_max": 12},
    "conjecture4": {"e_max": 2049},  # the full verified range
    "corollary8": {"e_max": 1224},
    "prop2": {"r": 6, "e_min": 1224, "e_max": 2000},
    "prop9": {},
    "prop14": {"p_max": 1000},
    "prop15": {"p_max": 2689},
    "example16": {},
    "example17": {},
    "corollary13": {},
    "remark12": {"n_max": 10_000},
    "oracle": {"e_max": 200},
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--store", default=os.environ.get("MSUM_STORE"))
    parser.add_argument("--claims", nargs="*", default=None,
                        help="subset of claim ids (default: all)")
    args = parser.parse_args()

    wanted = args.claims or list(FULL_SCALE)
    unknown = set(wanted) - set(list_claims())
    if unknown:
        parser.error(f"unknown claims: {sorted(unknown)}")

    failures = 0
    for cid in wanted:
        report = run_claim(cid, FULL_SCALE.get(cid, {}), jobs=args.jobs,
                           store=args.store)
        status = "ok " if report.ok else "FAIL"
        print(f"{status} {cid:12s} checks={report.checks:>9d} "
              f"violations={len(report.violations):>3d} {report.elapsed:7.1f}s")
        for v in report.violations[:10]:
            print(f"      {v}")
        failures += not report.ok
    print(f"\n{len(wanted) - failures}/{len(wanted)} claims verified")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
