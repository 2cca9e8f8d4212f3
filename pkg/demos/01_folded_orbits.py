"""Folded orbits converging to a line.

Each orbit x_n runs out along a strand, turns on a half circle of radius n and
comes back, L_n + 1 times.  Near the limit line the orbit has L_n + 1 parallel
strands, so it spends L_n + 1 times as long in a small box as the line does.
"""
import numpy as np

from orbitstrength import make_green, make_rieffel, multiplicity_report, repetition_rule, sojourn_set
from orbitstrength.action import rieffel_canonical_box

green = make_green()
V = rieffel_canonical_box()
print("box V:", V)
print("z spends", sojourn_set(green.z, V), "in V")

for n in (1, 2, 5):
    s = sojourn_set(green.orbit_at(n), V)
    print(f"x_{n} spends {s}  (measure {s.measure()})")

# the ratio settles on 2 in every box of the shrinking family
rep = multiplicity_report(green, n_max=40, m_max=8)
print()
print(rep.render())

# sweep the number of folds
for c in range(6):
    r = multiplicity_report(make_rieffel(repetition_rule(f"const:{c}")), 40, 8)
    print(f"L_n = {c}:  M_L = {r.M_L}  M_U = {r.M_U}")

# sampled positions, e.g. for plotting elsewhere
ts = np.linspace(-12, 12, 7)
print(np.round(green.orbit_at(2).positions(ts), 4))
