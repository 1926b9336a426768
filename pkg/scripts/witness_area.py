"""Closed-form |A| of the hyperbolic witness region against its lower bound and pixel counts."""
import argparse

from _common import show, write_rows
from rsets.construct import HyperbolicRegion
from rsets.verify import hyperbolic_pixel_area

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--grids", type=int, nargs="+", default=[256, 512, 1024, 2048])
ap.add_argument("--out", default="out/experiments/witness_area.csv")
args = ap.parse_args()

rows = []
for delta in (0.08, 0.04, 0.02, 0.01, 0.005):
    A = HyperbolicRegion(delta)
    row = {"delta": delta, "area": A.area, "lower_bound": A.lower_bound, "ratio": A.area / A.lower_bound}
    for G in args.grids:
        row[f"pixels_G{G}"] = hyperbolic_pixel_area(delta, G)
    rows.append(row)
show(rows)
write_rows(args.out, rows)
