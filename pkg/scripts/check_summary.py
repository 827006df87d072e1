"""Recompute summary medians from a raw CSV and compare with the written summary.

    python scripts/check_summary.py results/raw.csv results/summary.csv
"""

import argparse
import csv
import statistics
import sys


def medians(raw_path):
    groups = {}
    with open(raw_path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["problem"], row["M"], row["algorithm"])
            groups.setdefault(key, []).append(float(row["igd"]))
    return {k: statistics.median(v) for k, v in groups.items()}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("raw")
    p.add_argument("summary")
    args = p.parse_args(argv)
    expected = medians(args.raw)
    bad = 0
    with open(args.summary, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["problem"], row["M"], row["algorithm"])
            if key not in expected:
                continue  # external rows have no raw data here
            if float(row["median_igd"]) != expected[key]:
                print(f"mismatch {key}: summary {row['median_igd']} raw {expected[key]!r}")
                bad += 1
    print(f"{len(expected)} groups checked, {bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
