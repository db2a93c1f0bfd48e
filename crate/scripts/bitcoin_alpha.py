#!/usr/bin/env python3
"""Convert the SNAP soc-sign-bitcoinalpha CSV to a `src dst label` edge file.

Label 1 marks a negative rating (the minority class), 0 a positive one.
Reciprocal ratings collapse onto one undirected edge keeping the earliest
rating; self-ratings are dropped.
"""
import argparse
import csv
import gzip
import sys


def open_text(path):
    if path.endswith(".gz"):
        return gzip.open(path, "rt", newline="")
    return open(path, newline="")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("input", help="soc-sign-bitcoinalpha.csv or .csv.gz (source,target,rating,time)")
    ap.add_argument("output", help="edge file to write")
    args = ap.parse_args()

    rows = []
    with open_text(args.input) as f:
        for rec in csv.reader(f):
            if not rec:
                continue
            src, dst, rating, time = rec[0], rec[1], int(rec[2]), float(rec[3])
            if src != dst:
                rows.append((time, src, dst, rating))
    rows.sort(key=lambda r: r[0])

    seen = set()
    kept = []
    for _, src, dst, rating in rows:
        key = frozenset((src, dst))
        if key in seen:
            continue
        seen.add(key)
        kept.append((src, dst, 1 if rating < 0 else 0))

    with open(args.output, "w") as out:
        for src, dst, label in kept:
            out.write(f"{src} {dst} {label}\n")
    neg = sum(r[2] for r in kept)
    print(f"{len(kept)} edges, {neg} negative", file=sys.stderr)


if __name__ == "__main__":
    main()
