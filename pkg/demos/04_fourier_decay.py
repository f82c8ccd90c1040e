"""Fourier transforms of Cantor measures: Pisot ratios do not decay.

Run: python demos/04_fourier_decay.py
"""
from fractions import Fraction as F

from cantorembed import CantorMeasure, PiMultiple, probe_sequence, wiener_average
from cantorembed.fourier import EtaConstruction

third = CantorMeasure.central(F(1, 3))
tenths = CantorMeasure.central(F(3, 10))

print("|mu_hat(3^n pi)| for rho = 1/3:")
print(probe_sequence(third, PiMultiple(F(1)), 3, 8).to_csv())

print("|mu_hat((10/3)^n pi)| for rho = 3/10:")
print(probe_sequence(tenths, PiMultiple(F(1)), F(10, 3), 13).to_csv())

for T in (10, 100, 1000, 10000):
    print(f"Wiener average at T={T}:", round(wiener_average(third, T, 10 ** 5), 4))

eta = EtaConstruction(F(1, 3), F(1, 9), grid=200, depth=5)
print("fraction of scales with a feasible offset:", eta.feasible_fraction)
for n in (1, 5, 10):
    est = eta.eta_hat(n)
    print(f"|eta_hat({n})| = {est.modulus:.4f} <= {est.bound:.4f}")
