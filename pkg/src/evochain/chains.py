"""The three chain families and their Chapman-Kolmogorov check.

M1(s,t) = h(t)/2 * (1/h(s)+f(s), 1/h(s)-g(s), g(s)-f(s))^T (1,1,1)
M2(s,t) = 1/2 * (1+psi(s), 1-phi(s), phi(s)-psi(s))^T (1,1,1) for t < a, else 0
M3(s,t) = theta(s) * (1, phi1(s), phi2(s))^T (eta(t), vartheta(t), kappa(t)),
          theta(s) = 1 / (eta(s) + phi1(s) vartheta(s) + phi2(s) kappa(s))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .algebra import DEFAULT_TOL, vanishes
from .canonical import Label
from .classifier import (
    Classification,
    EqualRowsParams,
    ProportionalRowsParams,
    classify_equal_rows,
    classify_proportional_rows,
    decide_equal_rows,
    decide_proportional_rows,
)
from .expr import DomainError

REQUIRED = {
    "M1": ("h", "f", "g"),
    "M2": ("phi", "psi"),
    "M3": ("eta", "vartheta", "kappa", "phi1", "phi2"),
}


@dataclass(frozen=True)
class ChainSpec:
    family: str
    functions: Mapping[str, Callable[[float], float]]
    threshold: float | None = None  # the time a of M2
    perturbation: tuple[int, int, float] | None = None  # (row, col, delta) added to every matrix
    name: str = ""
    extras: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in REQUIRED:
            raise ValueError(f"unknown chain family {self.family!r}")
        missing = [k for k in REQUIRED[self.family] if k not in self.functions]
        if missing:
            raise ValueError(f"{self.family} needs functions {', '.join(missing)}")
        if self.family == "M2" and (self.threshold is None or not self.threshold > 0):
            raise ValueError("M2 needs a threshold a > 0")

    def fn(self, name: str, x: float) -> float:
        return float(self.functions[name](x))


def _check_times(s: float, t: float) -> None:
    if not s <= t:
        raise DomainError(f"times must satisfy s <= t, got s={s!r}, t={t!r}")


def equal_rows_params(c: ChainSpec, s: float, t: float, tol: float = DEFAULT_TOL) -> tuple[float, float, float]:
    """(lam, mu, gam) for M1 and M2 (only meaningful for M2 when t < a)."""
    if c.family == "M1":
        hs = c.fn("h", s)
        if vanishes(hs, 0.0, tol):
            raise DomainError(f"h(s) vanishes at s={s!r}")
        ht = c.fn("h", t)
        inv = 1.0 / hs
        f, g = c.fn("f", s), c.fn("g", s)
        if vanishes(ht * inv, 0.0, tol):
            raise DomainError(f"h(t)/h(s) vanishes at (s,t)=({s!r},{t!r})")
        half = ht / 2.0
        return half * (inv + f), half * (inv - g), half * (g - f)
    if c.family == "M2":
        a, b = c.fn("psi", s), c.fn("phi", s)
        return (1 + a) / 2, (1 - b) / 2, (b - a) / 2
    raise ValueError("equal-rows parameters exist only for M1 and M2")


def theta(c: ChainSpec, s: float, tol: float = DEFAULT_TOL) -> float:
    terms = (c.fn("eta", s), c.fn("phi1", s) * c.fn("vartheta", s), c.fn("phi2", s) * c.fn("kappa", s))
    denom = sum(terms)
    if vanishes(denom, max(abs(x) for x in terms), tol):
        raise DomainError(f"theta denominator vanishes at s={s!r}")
    return 1.0 / denom


def proportional_params(c: ChainSpec, s: float, t: float, tol: float = DEFAULT_TOL) -> ProportionalRowsParams:
    th = theta(c, s, tol)
    return ProportionalRowsParams(
        th * c.fn("eta", t), th * c.fn("vartheta", t), th * c.fn("kappa", t), c.fn("phi1", s), c.fn("phi2", s)
    )


def _m2_zero(c: ChainSpec, t: float) -> bool:
    return t >= c.threshold


def chain_matrix(c: ChainSpec, s: float, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    _check_times(s, t)
    if c.family == "M2" and _m2_zero(c, t):
        m = np.zeros((3, 3))
    elif c.family in ("M1", "M2"):
        lam, mu, gam = equal_rows_params(c, s, t, tol)
        m = np.outer([lam, mu, gam], [1.0, 1.0, 1.0])
    else:
        m = proportional_params(c, s, t, tol).matrix()
    if c.perturbation is not None:
        i, j, delta = c.perturbation
        m = m.copy()
        m[i, j] += delta
    return m


def verify_ck(c: ChainSpec, s: float, tau: float, t: float, tol: float = DEFAULT_TOL) -> float:
    """Max-abs entry of M(s,t) - M(s,tau) M(tau,t)."""
    direct = chain_matrix(c, s, t, tol)
    composed = chain_matrix(c, s, tau, tol) @ chain_matrix(c, tau, t, tol)
    return float(np.max(np.abs(direct - composed)))


def ck_scale(c: ChainSpec, s: float, tau: float, t: float, tol: float = DEFAULT_TOL) -> float:
    """Magnitude the CK residual is measured against: max(1, |M(s,t)|, |M(s,tau)| |M(tau,t)|)."""
    a = chain_matrix(c, s, tau, tol)
    b = chain_matrix(c, tau, t, tol)
    direct = chain_matrix(c, s, t, tol)
    terms = np.abs(a) @ np.abs(b)
    return max(1.0, float(np.max(np.abs(direct))), float(np.max(terms)))


def chain_label(c: ChainSpec, s: float, t: float, tol: float = DEFAULT_TOL) -> tuple[Label, str]:
    """Label and branch id without building a witness (used by grid scans)."""
    _check_times(s, t)
    if c.family == "M2" and _m2_zero(c, t):
        return Label.E0, "T2.zero"
    if c.family in ("M1", "M2"):
        return decide_equal_rows(*equal_rows_params(c, s, t, tol), tol)
    p = proportional_params(c, s, t, tol)
    return decide_proportional_rows(p.alpha, p.beta, p.gamma, p.lam, p.mu, tol)


def chain_classify(c: ChainSpec, s: float, t: float, tol: float = DEFAULT_TOL) -> Classification:
    _check_times(s, t)
    if c.family == "M2" and _m2_zero(c, t):
        return Classification(Label.E0, "T2.zero", None, 0.0)
    if c.family in ("M1", "M2"):
        return classify_equal_rows(EqualRowsParams(*equal_rows_params(c, s, t, tol)), tol)
    return classify_proportional_rows(proportional_params(c, s, t, tol), tol)
