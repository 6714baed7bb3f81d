#!/usr/bin/env python3
"""Copies the input and smuggles in a column the input never had."""
import argparse
import csv

ap = argparse.ArgumentParser()
ap.add_argument("--input", required=True)
ap.add_argument("--output", required=True)
args = ap.parse_args()

with open(args.input, newline="") as fh:
    rows = list(csv.reader(fh))

rows[0].append("fabricated")
for row in rows[1:]:
    row.append("0")

with open(args.output, "w", newline="") as fh:
    csv.writer(fh).writerows(rows)
