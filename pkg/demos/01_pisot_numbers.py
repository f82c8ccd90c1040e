"""Pisot numbers and the separation of digit sums.

Run: python demos/01_pisot_numbers.py
"""
from fractions import Fraction

from cantorembed import AlgebraicReal, garsia_separation, is_pisot

# Coefficients are listed constant term first: x^2 - 2x - 1 is [-1, -2, 1].
silver = [-1, -2, 1]
verdict = is_pisot(silver, (2, 3))
print("1 + sqrt2 Pisot?", verdict.is_pisot)
print("  conjugates have modulus at most", float(verdict.conjugate_modulus_upper_bound))

print("sqrt2 Pisot?", is_pisot([-2, 0, 1], (1, 2)).is_pisot)
print("10/3 Pisot?", is_pisot([-10, 3], (3, 4)).is_pisot)

# Nonzero sums t_1 theta + ... + t_n theta^n with t_i in {-1, 0, 1} stay away from 0.
theta = AlgebraicReal.from_root(silver, 2, 3)
C = garsia_separation(theta, [[-1], [0], [1]])
print("separation constant for 1 + sqrt2:", float(C), "(2 - sqrt2 =", 2 - 2 ** 0.5, ")")

# Refinement keeps shrinking an exact rational enclosure.
root2 = AlgebraicReal.from_root([-2, 0, 1], 1, 2)
lo, hi = root2.refine(Fraction(1, 10 ** 6))
print("sqrt2 lies in", lo, hi)
