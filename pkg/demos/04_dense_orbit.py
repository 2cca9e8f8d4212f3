"""A dense line on the torus.

The orbit of z keeps coming back to every box around z, so its sojourn sets
are unbounded and measure ratios are undefined.  The windowed measure grows
linearly with the horizon at a rate equal to the box area, and z converges to
itself any number of times.
"""
import numpy as np

from orbitstrength import (LocallyClosedViolation, make_kronecker, quadrature_oracle, ratio_table,
                           relative_compactness_probe, self_convergence_witness, verify_witness)
from orbitstrength.geometry import Interval

torus = make_kronecker()
try:
    ratio_table(torus, 2, 2)
except LocallyClosedViolation as exc:
    print("ratio table refused:", exc)

boxes = [torus.neighborhoods(m) for m in (1, 2)]
for d in relative_compactness_probe(torus.z, boxes, (250, 500, 1000, 2000)):
    print(f"m={d.m}: measures {np.round(d.windowed_measures, 4)}, slope {d.growth_slope:.5f}")

window = Interval.closed(-1000, 1000)
rng = np.random.default_rng(0)
print("oracle on [-1000, 1000]:", quadrature_oracle(torus.z, boxes[0], window, 1e-3, rng))

w = self_convergence_witness(torus, 3)
for n in w.ns:
    print(f"W_{w.schedule[n]}: returns at {w.translates[n]}")
print(verify_witness(torus, w))
