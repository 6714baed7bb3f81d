#!/usr/bin/env python3
"""Keep every stride-th feature column (default: the even-indexed ones)."""
import argparse
import csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True)
    ap.add_argument("--output", required=True)
    ap.add_argument("--stride", type=int, default=2)
    args = ap.parse_args()
    if args.stride < 1:
        raise SystemExit("--stride must be >= 1")

    with open(args.input, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    label = header.index("class")
    feature_cols = [i for i in range(len(header)) if i != label]
    keep = feature_cols[:: args.stride] + [label]

    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow([row[i] for i in keep])


if __name__ == "__main__":
    main()
