"""Independent checks: witness verification and a numeric isomorphism search.

Nothing here imports the classifier.  ``iso_search`` looks for a basis change
``p`` (rows = new basis in old coordinates) with

    e_i' e_j' = 0                         for i < j
    e_i' e_i' = sum_k target[i, k] e_k'

written out in old coordinates: 18 scalar equations in the 9 entries of ``p``.
Each restart runs MINPACK's Levenberg-Marquardt from a random start.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .algebra import DEFAULT_TOL, as_matrix, det3, derived_dim
from .canonical import Label, canonical_matrix

DET_FLOOR = 1e-8
MAX_ITER = 200
_PAIRS = ((0, 1), (0, 2), (1, 2))


class SingularWitness(ValueError):
    pass


def natural_basis_residuals(m: np.ndarray, target: np.ndarray, p: np.ndarray) -> np.ndarray:
    """The 18 components: three off-diagonal products, then three diagonal mismatches."""
    off = [(p[i] * p[j]) @ m for i, j in _PAIRS]
    diag = [(p[i] * p[i]) @ m - target[i] @ p for i in range(3)]
    return np.concatenate(off + diag)


def _jacobian(m: np.ndarray, target: np.ndarray, p: np.ndarray) -> np.ndarray:
    jac = np.zeros((18, 9))
    for row, (i, j) in enumerate(_PAIRS):
        block = slice(3 * row, 3 * row + 3)
        # d/dp[i,k] of sum_k p[i,k] p[j,k] m[k,l] is p[j,k] m[k,l]
        jac[block, 3 * i:3 * i + 3] = (p[j][:, None] * m).T
        jac[block, 3 * j:3 * j + 3] = (p[i][:, None] * m).T
    for i in range(3):
        block = slice(9 + 3 * i, 12 + 3 * i)
        jac[block, 3 * i:3 * i + 3] += (2 * p[i][:, None] * m).T
        for r in range(3):
            # - sum_r target[i,r] p[r,l]
            jac[block, 3 * r:3 * r + 3] -= target[i, r] * np.eye(3)
    return jac


def verify_witness(m, p, label: Label | str, tol: float = DEFAULT_TOL) -> float:
    """Max entrywise error of the natural-basis equations for ``p`` against the canonical matrix."""
    m = as_matrix(m)
    p = as_matrix(p)
    d = det3(p)
    if not abs(d) > tol:
        raise SingularWitness(f"|det p| = {abs(d):.3g} is not above {tol:g}")
    target = canonical_matrix(Label(str(label)))
    return float(np.max(np.abs(natural_basis_residuals(m, target, p))))


@dataclass(frozen=True)
class IsoSearchReport:
    found: bool
    witness: Optional[np.ndarray]
    residual: float
    restarts_used: int
    seed: int
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": None if self.witness is None else self.witness.tolist(),
            "residual": self.residual,
            "restarts_used": self.restarts_used,
            "seed": self.seed,
            "reason": self.reason,
        }


def _polish(m, target, p0):
    fun = lambda x: natural_basis_residuals(m, target, x.reshape(3, 3))
    jac = lambda x: _jacobian(m, target, x.reshape(3, 3))
    sol = least_squares(fun, p0.ravel(), jac=jac, method="lm", max_nfev=MAX_ITER, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    p = sol.x.reshape(3, 3)
    return p, float(np.max(np.abs(fun(sol.x))))


def iso_search(source, target, restarts: int = 64, tol: float = DEFAULT_TOL, seed: int = 0,
               warm_start=None) -> IsoSearchReport:
    """Multistart search for a basis change carrying ``source`` to ``target``.

    Not finding one is a report, not a proof of non-isomorphism.  Restart k
    draws its start from ``SeedSequence(seed).spawn`` child k, so results do
    not depend on how many restarts ran before.  An optional ``warm_start``
    is tried first as restart 0.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = as_matrix(source)
    c = as_matrix(target)
    if derived_dim(m, tol) != derived_dim(c, tol):
        return IsoSearchReport(False, None, float("inf"), 0, seed, "rank mismatch")
    children = np.random.SeedSequence(seed).spawn(restarts)
    best = float("inf")
    for k in range(restarts):
        if k == 0 and warm_start is not None:
            start = as_matrix(warm_start)
        else:
            start = np.random.default_rng(children[k]).uniform(-2.0, 2.0, size=(3, 3))
        p, res = _polish(m, c, start)
        best = min(best, res)
        if res <= tol and abs(det3(p)) >= DET_FLOOR:
            return IsoSearchReport(True, p, res, k + 1, seed)
    return IsoSearchReport(False, None, best, restarts, seed, "restart budget exhausted")
