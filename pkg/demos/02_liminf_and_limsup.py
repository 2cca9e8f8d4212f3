"""Alternating and growing folds.

With L_n = 1, 2, 1, 2, ... the ratio column oscillates between 2 and 3, so the
lower multiplicity is 2 and the upper one is 3.  Three separated visits only
exist along the even subsequence, which is what the witness search finds.
"""
from orbitstrength import (WitnessExhausted, construct_witness, make_rieffel, multiplicity_report,
                           ratio_table, repetition_rule, verify_witness)

alt = make_rieffel(repetition_rule("alt:1,2"), name="rieffel-alt")
table = ratio_table(alt, n_max=12, m_max=3)
for m in table.ms:
    print(f"m={m}:", table.column(m))

rep = multiplicity_report(alt, 40, 8)
print(f"M_L = {rep.M_L}, M_U = {rep.M_U}")

try:
    construct_witness(alt, 3, 40)
except WitnessExhausted as exc:
    print("full sequence:", exc)

w = construct_witness(alt, 3, 40, subsequence=True)
print("subsequence rows:", w.ns)
print(verify_witness(alt, w))
print(w.to_csv())

# L_n = n: the ratios never settle, both multiplicities are infinite
grow = multiplicity_report(make_rieffel(repetition_rule("grow")), 40, 8)
print(grow.render())
