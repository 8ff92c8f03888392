"""
Nearest-plane decoding in the plane
===================================

Walks through the rounding algorithm on a skewed 2D basis: the rectangular
decoding cells, where they disagree with the true Voronoi regions, and how
often that happens for random queries.
"""

import numpy as np

from latbabai import (
    babai_cell,
    babai_point,
    cvp_bruteforce,
    is_babai_error,
    nearest_plane,
    qr_upper,
)

rng = np.random.default_rng(7)

# a deliberately skewed basis: second vector leans halfway over the first
V = np.array([[1.0, 0.5], [0.0, 0.9]])
Q, R = qr_upper(V)
print("generator V (columns are basis vectors):")
print(V)
print("canonical upper triangular form R:")
print(R)

# one decode, step by step: round the last coefficient, subtract, repeat
x = np.array([0.73, 1.42])
b = nearest_plane(R, Q.T @ x)
print(f"\nquery x = {x} decodes to coefficients b = {b}")
print("decoded lattice point:", V @ b)

# the preimage of b is an axis-aligned box in the rotated frame
cell = babai_cell(R, b)
print("decoding cell center:", cell.center, "half widths:", cell.half_widths)
print("cell volume equals |det V|:", cell.volume, abs(np.linalg.det(V)))

# compare against the exact closest point for a batch of random queries;
# disagreements are exactly the points that fall in the cell but outside
# the Voronoi region of the decoded lattice point
n_queries = 5000
queries = rng.uniform(-3, 3, size=(n_queries, 2))
errors = 0
for q in queries:
    approx = babai_point(V, q)
    exact = cvp_bruteforce(V, q)
    if not np.array_equal(approx.coeffs, exact.coeffs):
        d_a = np.linalg.norm(q - approx.point)
        d_e = np.linalg.norm(q - exact.point)
        errors += d_a > d_e + 1e-12
print(f"\nrounding missed the closest point on {errors}/{n_queries} random queries")
print(f"empirical miss rate: {errors / n_queries:.4f}")

# the flag computed by the library agrees with the distance comparison
sample = queries[:200]
flags = [is_babai_error(V, q) for q in sample]
print("library error flags on the first 200 queries:", sum(flags), "errors")
