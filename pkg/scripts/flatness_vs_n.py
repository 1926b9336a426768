"""Observed max |int_R phi| in the flat band against the bound 10/N as N varies."""
import argparse
import math

from _common import show, write_rows
from rsets.construct import ThetaConfig, build_phi
from rsets.maxop import flatness_audit

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--eps", type=float, default=0.5)
ap.add_argument("--gamma", type=float, default=math.pi / 24)
ap.add_argument("--trials", type=int, default=20_000)
ap.add_argument("--out", default="out/experiments/flatness_vs_n.csv")
args = ap.parse_args()

rows = []
for N in (4, 8, 16, 32, 81, 160, 320):
    phi, _ = build_phi(ThetaConfig(args.eps, args.gamma, N))
    a = flatness_audit(phi, args.eps, args.gamma, N, args.trials)
    rows.append({"N": N, "bound": a["claimed_bound"], "observed": a["observed"],
                 "observed_times_N": a["observed"] * N, "bound_vacuous": a["bound_vacuous"],
                 "side_violations": a["side_violations"]})
show(rows)
write_rows(args.out, rows)
