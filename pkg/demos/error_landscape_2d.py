"""
The 2D error probability landscape
==================================

Every 2D lattice, after scaling and rotation, is described by two numbers
(a, b) with |a| <= 1/2, b > 0, a^2 + b^2 >= 1. The probability that rounding
misses the closest lattice point has a closed form in (a, b). This script
maps that landscape: the exact formula against the geometric computation,
the worst case, level curves, and the best lattice at a fixed packing
density.
"""

import numpy as np

from latbabai import (
    DENSITY_2D_MAX,
    ReducedBasis2D,
    level_curve_data,
    optimal_a,
    packing_density_2d,
    pe_closed_form,
    pe_density_form,
    pe_geometric_2d,
    worst_theta,
)

rng = np.random.default_rng(11)

# the two extremes: rectangular lattices never err, the hexagonal lattice
# is the worst case at 1/12
square = ReducedBasis2D(0.0, 1.0)
hexagonal = ReducedBasis2D(-0.5, np.sqrt(3.0) / 2.0)
print("square lattice error probability:   ", pe_closed_form(square))
print("hexagonal lattice error probability:", pe_closed_form(hexagonal), "= 1/12")

# closed form vs explicit cell intersection on random in-regime parameters
worst_gap = 0.0
for _ in range(200):
    a = rng.uniform(-0.5, 0.5)
    b = rng.uniform(0.8, 2.0)
    if a * a + b * b < 1.0:
        continue
    rb = ReducedBasis2D(a, b)
    worst_gap = max(worst_gap, abs(pe_closed_form(rb) - pe_geometric_2d(rb.basis())))
print(f"\nclosed form vs geometric, max |difference| over 200 samples: {worst_gap:.2e}")

# polar view: at fixed basis-length ratio rho the maximizing angle is where
# the horizontal component of the second vector reaches -1/2
for rho in (1.0, 1.2, 1.5):
    th = worst_theta(rho)
    print(f"rho = {rho}: worst angle {th:.6f} rad ({np.degrees(th):.2f} deg)")

# level curves of the error probability, printable as (k, a, b, pe) rows
rows = level_curve_data(pe_values=(0.0, 0.02, 1.0 / 12.0), grid=40)
print(f"\nlevel-curve samples: {len(rows)} rows")
for k in (0.0, 0.02, 1.0 / 12.0):
    pts = [(a, b) for kk, a, b, _ in rows if kk == k]
    print(f"  k = {k:.4f}: {len(pts)} points, a range "
          f"[{min(p[0] for p in pts):.3f}, {max(p[0] for p in pts):.3f}]")

# fixing the packing density and asking for the least error-prone shape:
# below pi/4 the rectangular lattice is available and optimal, above it the
# constraint binds and the optimum moves toward the hexagonal corner
print("\ndensity -> optimal a and its error probability")
for density in (0.7, np.pi / 4.0, 0.83, 0.88, DENSITY_2D_MAX):
    a_star = optimal_a(density)
    print(f"  {density:.4f} -> a* = {a_star:+.4f}, pe = {pe_density_form(a_star, density):.6f}")

print("\nhexagonal density is the 2D maximum:", packing_density_2d(hexagonal))
