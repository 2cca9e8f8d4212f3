"""One sequence, two limit orbits.

The spliced orbits pass twice near the line through (0,0,0) and three times
near the line through (1,0,0).  Boxes around each limit see a different
multiplicity.
"""
from orbitstrength import construct_witness, excision_check, make_splice, multiplicity_report, verify_witness

x0, z0 = make_splice()
for sc in (x0, z0):
    rep = multiplicity_report(sc, 40, 8)
    print(f"{sc.name}: M_L = {rep.M_L}, M_U = {rep.M_U}, residual {rep.quantization_residual}")
    w = construct_witness(sc, int(rep.M_L), 40)
    v = verify_witness(sc, w)
    n = w.ns[-1]
    print(f"  witness rows n={w.ns[0]}..{n}, last translates {w.translates[n]}: {v.message}")

orbit = x0.orbit_at(3)
for u in (-1.0, 0.0, 1.0):
    print(f"x_3 at u={u}:", orbit.point_at(u))

v = excision_check(x0, 20, 2, 0.1, 100)
print(f"excision at n=20, m=2: passed={v.passed} over {v.samples} sampled s")
