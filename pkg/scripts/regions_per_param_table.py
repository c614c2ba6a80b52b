#!/usr/bin/env python3
"""Regions-per-parameter: deep folding stacks against the width-matched
shallow layer, in exact arithmetic.

For each depth the table lists the deep stack's attainable region count
and the shallow maximum of a single layer with the same total number of
units, each divided by its own parameter count.  The final column is the
deep/shallow advantage; it dips below 1 at depth 2 (the folding factor
has not compounded yet while the parameters already grew), then grows
geometrically.

Example:
    python3 scripts/regions_per_param_table.py --n0 2 --width 4 --max-depth 8
"""

import argparse

from pwlregions.bounds import (
    deep_rectifier_lower,
    regions_per_parameter,
    shallow_max_regions,
)
from pwlregions.network import parameter_count, rectifier_structure


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n0", type=int, default=2, help="input dimension")
    ap.add_argument("--width", type=int, default=4, help="units per hidden layer")
    ap.add_argument("--max-depth", type=int, default=8)
    args = ap.parse_args()
    n0, w = args.n0, args.width

    header = (f"{'depth':>5}  {'deep count':>12} {'params':>7} {'per param':>10}   "
              f"{'shallow count':>13} {'params':>7} {'per param':>10}   {'advantage':>9}")
    print(header)
    print("-" * len(header))
    for depth in range(1, args.max_depth + 1):
        deep_s = rectifier_structure(n0, (w,) * depth)
        shallow_s = rectifier_structure(n0, (w * depth,))
        deep_count = deep_rectifier_lower(deep_s)
        shallow_count = shallow_max_regions(n0, w * depth)
        deep_ratio, shallow_ratio = regions_per_parameter(n0, w, depth)
        print(f"{depth:>5}  {deep_count:>12} {parameter_count(deep_s):>7} "
              f"{float(deep_ratio):>10.3f}   "
              f"{shallow_count:>13} {parameter_count(shallow_s):>7} "
              f"{float(shallow_ratio):>10.3f}   "
              f"{float(deep_ratio / shallow_ratio):>9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
