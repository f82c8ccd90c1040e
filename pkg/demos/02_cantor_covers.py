"""Covers, gaps and codings of central Cantor sets.

Run: python demos/02_cantor_covers.py
"""
from fractions import Fraction

from cantorembed import CentralCantor, Periodic, coding_to_point, contains_point, level_cover
from cantorembed.selfsimilar import covers_to_csv, gaps, is_set_of_uniqueness

C3 = CentralCantor(Fraction(1, 3))
for n in range(3):
    print(f"level {n}:", [(str(a), str(b)) for a, b in level_cover(C3, n)])

print("gaps at level 2:", [(str(a), str(b)) for a, b in gaps(level_cover(C3, 2))])
print(covers_to_csv([level_cover(C3, 1)]))

# 1/4 codes as 0101... and so lies in every level; 1/2 drops out at once.
print("1/4:", contains_point(C3, Fraction(1, 4), 12))
print("1/2:", contains_point(C3, Fraction(1, 2), 12))
print("coding (01)^inf ->", coding_to_point(C3, (), Periodic((0, 1))))

for rho in (Fraction(1, 3), Fraction(3, 10)):
    print(f"C_{rho} set of uniqueness?", is_set_of_uniqueness(CentralCantor(rho)))
