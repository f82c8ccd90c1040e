"""Box-counting estimates for attractors, intersections and orbit closures.

Run: python demos/05_box_dimension.py
"""
import math
from fractions import Fraction as F

from cantorembed import CentralCantor, Periodic, attractor_dim_estimate, furstenberg_sweep
from cantorembed.dimension import default_grid, fibonacci_prefix, orbit_closure_dim_estimate
from cantorembed.selfsimilar import cantor_p_set

A3, B5 = cantor_p_set(3, [0, 2]), cantor_p_set(5, [0, 4])
print("3-set slope", attractor_dim_estimate(A3, range(4, 11)).slope, "vs", math.log(2) / math.log(3))
print("5-set slope", attractor_dim_estimate(B5, range(3, 8)).slope, "vs", math.log(2) / math.log(5))

# A small sweep over lambda * B5 + c; every slope stays under both dimensions.
result = furstenberg_sweep(A3, B5, default_grid(6, F(1, 4), 2), default_grid(6, -1, 1), 8)
print(result.summary())

print("periodic orbit:", orbit_closure_dim_estimate(F(1, 3), Periodic((0, 1)), range(4, 11)).slope)
print("Fibonacci orbit:", orbit_closure_dim_estimate(F(1, 3), fibonacci_prefix(4096), range(4, 11)).slope)
