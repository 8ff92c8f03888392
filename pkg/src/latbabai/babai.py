"""Babai's nearest-plane approximation to the closest lattice point.

For an upper triangular generator the algorithm is plain back-substitution
with rounding; for a general basis it is successive projection onto nested
subspaces. The preimage of each output is an axis-aligned box in the
orthogonalized frame, which is what makes the error geometry tractable.
"""

from dataclasses import dataclass

import numpy as np

from .core import LatticePoint, as_basis, cvp_bruteforce, qr_upper, round_half_up


def _check_upper(R):
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    if R.shape != (n, n) or np.any(np.abs(R[np.tril_indices(n, -1)]) > 1e-10 * max(1.0, np.abs(R).max())):
        raise ValueError("expected an upper triangular generator matrix")
    if np.any(np.diag(R) <= 0):
        raise ValueError("upper triangular generator needs a positive diagonal")
    return R


def nearest_plane(R, x):
    """Babai coefficients for an upper triangular generator with positive diagonal.

    b_m = [(x_m - sum_{l>m} b_l r_ml) / r_mm] for m = n..1, with [.] rounding
    halves up.
    """
    R = _check_upper(R)
    x = np.asarray(x, dtype=float)
    n = R.shape[0]
    b = np.zeros(n)
    for m in range(n - 1, -1, -1):
        b[m] = round_half_up((x[m] - R[m, m + 1 :] @ b[m + 1 :]) / R[m, m])
    return b.astype(int)


def nearest_plane_general(V, x):
    """Babai coefficients for an arbitrary full-rank basis, by successive projection.

    Walking i = n..1: round the coefficient of x's component along the part of
    v_i orthogonal to span(v_1..v_{i-1}), subtract, continue. Agrees with
    nearest_plane applied to the rotated upper triangular generator.
    """
    V = as_basis(V)
    x = np.asarray(x, dtype=float)
    n = V.shape[0]
    # Gram-Schmidt without normalization
    B = np.zeros_like(V)
    for i in range(n):
        v = V[:, i].copy()
        for j in range(i):
            v -= (V[:, i] @ B[:, j]) / (B[:, j] @ B[:, j]) * B[:, j]
        B[:, i] = v
    b = np.zeros(n)
    z = x.copy()
    for i in range(n - 1, -1, -1):
        b[i] = round_half_up((z @ B[:, i]) / (B[:, i] @ B[:, i]))
        z -= b[i] * V[:, i]
    return b.astype(int)


@dataclass(frozen=True)
class BabaiCell:
    """Axis-aligned box (in the orthogonalized frame) decoded to one coefficient vector."""

    center: np.ndarray
    half_widths: np.ndarray

    @property
    def volume(self):
        return float(np.prod(2.0 * self.half_widths))

    def contains(self, x, tol=1e-12):
        return bool(np.all(np.abs(np.asarray(x) - self.center) <= self.half_widths + tol))


def babai_cell(R, b):
    """Preimage of coefficients b under nearest_plane on the upper triangular R."""
    R = _check_upper(R)
    b = np.asarray(b, dtype=float)
    return BabaiCell(center=R @ b, half_widths=0.5 * np.diag(R).copy())


def is_babai_error(V, x, window=3):
    """True when nearest-plane lands strictly farther from x than the true closest point.

    Distances are compared with 1e-12 slack, so exact ties on cell boundaries
    do not count as errors.
    """
    V = as_basis(V)
    x = np.asarray(x, dtype=float)
    approx = nearest_plane_general(V, x)
    exact = cvp_bruteforce(V, x, window=window)
    d_approx = np.linalg.norm(x - V @ approx)
    return bool(d_approx > np.linalg.norm(x - exact.point) + 1e-12)


def babai_point(V, x):
    """Embedded nearest-plane output as a LatticePoint."""
    V = as_basis(V)
    b = nearest_plane_general(V, x)
    return LatticePoint(coeffs=b, point=V @ b)


__all__ = [
    "nearest_plane",
    "nearest_plane_general",
    "babai_cell",
    "BabaiCell",
    "is_babai_error",
    "babai_point",
]
