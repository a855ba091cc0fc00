"""Sample every achievable (lambda, sum-DoF) region and the comparison table.

Writes plot-ready CSV files next to this script; everything is evaluated in
exact rationals and rendered to floats only for the CSV.
"""

import csv
import pathlib
from fractions import Fraction

from xalign import dof

OUT = pathlib.Path(__file__).parent

GRID = [Fraction(i, 120) for i in range(0, 145)]

curves = {
    "two_user_5_2_local": lambda lam: dof.theorem1_region(5, 2, lam),
    "two_user_5_2_global": lambda lam: dof.corollary1_region(5, 2, lam),
    "two_user_5_3_local": lambda lam: dof.theorem1_region(5, 3, lam),
    "k_user_3": lambda lam: dof.theorem2_region(3, lam),
    "miso_x_2_3": lambda lam: dof.theorem3_region(2, 3, lam),
}

path = OUT / "tradeoff_regions.csv"
with open(path, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["curve", "lambda", "dof_num", "dof_den", "dof_real", "regime"])
    for name, region in curves.items():
        for p in dof.sample_region(region, GRID):
            w.writerow([name, float(p.lam), p.dof.numerator, p.dof.denominator,
                        float(p.dof), p.regime])
print(f"wrote {path}")

print("\ntwo-user comparison rows:")
print(f"{'A':>3} {'B':>3} | {'local':>8} {'global':>8} {'full':>8} {'none':>8}")
for A, B in ((5, 2), (5, 3), (10, 11), (1, 4)):
    row = dof.table1_row(A, B)
    print(f"{A:>3} {B:>3} | {str(row.stia):>8} {str(row.gak):>8} "
          f"{str(row.ia):>8} {str(row.vv):>8}")

print("\nfinite-horizon accounting for (5, 2), approaching 10/3:")
for n in (1, 10, 100, 1000, 10**6):
    val = dof.asymptotic_dof_t1(5, 2, n)
    print(f"  n = {n:>8}: {val} = {float(val):.6f}")
