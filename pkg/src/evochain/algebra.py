"""Three-dimensional real evolution algebras on a natural basis.

A structure matrix ``a`` stores ``e_i e_i = sum_j a[i][j] e_j``; distinct basis
vectors multiply to zero.  A basis change ``p`` stores the new basis vectors as
rows, written in old coordinates.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-9


class AlgebraError(Exception):
    pass


class NotNaturalBasis(AlgebraError):
    pass


class SingularBasis(AlgebraError):
    pass


def vanishes(q: float, scale: float = 0.0, tol: float = DEFAULT_TOL) -> bool:
    """True when |q| <= tol * max(1, scale)."""
    return abs(q) <= tol * max(1.0, scale)


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def equal_rows(lam: float, mu: float, gam: float) -> np.ndarray:
    return np.outer([lam, mu, gam], [1.0, 1.0, 1.0])


def proportional_rows(alpha: float, beta: float, gamma: float, lam: float, mu: float) -> np.ndarray:
    return np.outer([1.0, lam, mu], [alpha, beta, gamma])


def multiply(x, y, m) -> np.ndarray:
    """(xy)_l = sum_k x_k y_k a[k][l]."""
    return (np.asarray(x, dtype=float) * np.asarray(y, dtype=float)) @ np.asarray(m, dtype=float)


def det3(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(p[0, 0] * (p[1, 1] * p[2, 2] - p[1, 2] * p[2, 1])
                 - p[0, 1] * (p[1, 0] * p[2, 2] - p[1, 2] * p[2, 0])
                 + p[0, 2] * (p[1, 0] * p[2, 1] - p[1, 1] * p[2, 0]))


def inv3(p) -> np.ndarray:
    """Inverse through the adjugate."""
    p = np.asarray(p, dtype=float)
    d = det3(p)
    if d == 0.0:
        raise SingularBasis("basis change has zero determinant")
    adj = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = p[rows[0], cols[0]] * p[rows[1], cols[1]] - p[rows[0], cols[1]] * p[rows[1], cols[0]]
            adj[i, j] = (-1) ** (i + j) * minor
    return adj / d


def _product_scale(m: np.ndarray, p: np.ndarray) -> float:
    return float(np.max(np.abs(p)) ** 2 * np.max(np.abs(m)))


def off_diagonal_products(m, p) -> np.ndarray:
    """Rows are e_1'e_2', e_1'e_3', e_2'e_3' in old coordinates."""
    m = np.asarray(m, dtype=float)
    p = np.asarray(p, dtype=float)
    return np.array([(p[i] * p[j]) @ m for i, j in ((0, 1), (0, 2), (1, 2))])


def transform(m, p, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Structure matrix of the same algebra in the basis given by the rows of ``p``."""
    m = as_matrix(m)
    p = as_matrix(p)
    d = det3(p)
    if abs(d) <= tol:
        raise SingularBasis(f"|det p| = {abs(d):.3g} is not above tolerance")
    scale = _product_scale(m, p)
    off = off_diagonal_products(m, p)
    worst = float(np.max(np.abs(off)))
    if not vanishes(worst, scale, tol):
        raise NotNaturalBasis(f"off-diagonal product of size {worst:.3g} does not vanish")
    squares = (p * p) @ m
    return squares @ inv3(p)


def derived_dim(m, tol: float = DEFAULT_TOL) -> int:
    """Dimension of E^2, i.e. the numerical rank of the structure matrix."""
    m = as_matrix(m)
    sv = np.linalg.svd(m, compute_uv=False)
    scale = float(sv[0]) if sv.size else 0.0
    return int(sum(not vanishes(float(x), scale, tol) for x in sv))
