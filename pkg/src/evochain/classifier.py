"""Isomorphism classification of the two rank-one families with explicit witnesses.

Equal-rows family: rows (l,l,l), (m,m,m), (g,g,g) with l+m+g != 0.
Proportional-rows family: rows r, lam*r, mu*r with r = (alpha, beta, gamma).

Each classifier runs an ordered decision table (first match wins) and then
builds a basis change realising the isomorphism.  Branch ids look like
``L1.e.1`` or ``L3.II.h.4``; a ``swap23:`` prefix means the e2/e3 exchange
was applied first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL, det3, equal_rows, proportional_rows, vanishes
from .canonical import Label, canonical_matrix


class ClassificationError(Exception):
    pass


class OutOfLemmaScope(ClassificationError):
    pass


class AllZero(ClassificationError):
    pass


class UnsupportedShape(ClassificationError):
    pass


class UncoveredBranch(ClassificationError):
    """No row of the decision table matched; only reachable through tolerance collisions."""


@dataclass(frozen=True)
class EqualRowsParams:
    lam: float
    mu: float
    gam: float

    def matrix(self) -> np.ndarray:
        return equal_rows(self.lam, self.mu, self.gam)


@dataclass(frozen=True)
class ProportionalRowsParams:
    alpha: float
    beta: float
    gamma: float
    lam: float
    mu: float

    def matrix(self) -> np.ndarray:
        return proportional_rows(self.alpha, self.beta, self.gamma, self.lam, self.mu)


@dataclass(frozen=True)
class Classification:
    label: Label
    branch: str
    witness: np.ndarray | None = field(default=None, compare=False)
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "label": str(self.label),
            "branch": self.branch,
            "witness": None if self.witness is None else [float(x) for x in self.witness.ravel()],
            "residual": float(self.residual),
        }


def _absolute_error(m, p, label) -> float:
    target = canonical_matrix(label)
    worst = 0.0
    for i in range(3):
        for j in range(i, 3):
            want = target[i] @ p if i == j else np.zeros(3)
            worst = max(worst, float(np.max(np.abs((p[i] * p[j]) @ m - want))))
    return worst


def witness_residual(m, p, label) -> float:
    """Largest error of e_i'e_j' = delta_ij sum_k c_ik e_k', relative to the size of the terms.

    Errors are divided by max(1, scale) where scale bounds |p_ik p_jk a_kl|, the
    same relative-zero rule used for every other tolerance test.
    """
    m = np.asarray(m, dtype=float)
    p = np.asarray(p, dtype=float)
    target = canonical_matrix(label)
    scale = max(1.0, float(np.max(np.abs(p))) ** 2 * float(np.max(np.abs(m))))
    worst = 0.0
    for i in range(3):
        for j in range(i, 3):
            prod = (p[i] * p[j]) @ m
            want = target[i] @ p if i == j else np.zeros(3)
            worst = max(worst, float(np.max(np.abs(prod - want))))
    return worst / scale


def _sign(q: float, scale: float, tol: float) -> int:
    if vanishes(q, scale, tol):
        return 0
    return 1 if q > 0 else -1


def _sum_sign(terms, tol: float) -> int:
    """Sign of a sum of already-cleaned terms.

    Terms of one sign cannot cancel.  Mixed signs are compared against the
    largest term with no absolute floor, so tiny but non-vanishing inputs
    give the same answer as their rescaled versions.
    """
    terms = [float(t) for t in terms]
    signs = {(t > 0) - (t < 0) for t in terms} - {0}
    if not signs:
        return 0
    if len(signs) == 1:
        return signs.pop()
    total = sum(terms)
    if abs(total) <= tol * max(abs(t) for t in terms):
        return 0
    return 1 if total > 0 else -1


def _clean(x: float, scale: float, tol: float) -> float:
    return 0.0 if vanishes(x, scale, tol) else float(x)


def _perm(order) -> np.ndarray:
    """Basis change whose i-th new vector is old basis vector order[i]."""
    p = np.zeros((3, 3))
    for i, k in enumerate(order):
        p[i, k] = 1.0
    return p


SWAP12 = _perm((1, 0, 2))
SWAP13 = _perm((2, 1, 0))
SWAP23 = _perm((0, 2, 1))


# --- equal rows ------------------------------------------------------------

_L1_LABEL = {"a": Label.E4, "b": Label.E5, "c": Label.E6, "d": Label.E7, "e": Label.E8, "f": Label.E9}


def decide_equal_rows(lam: float, mu: float, gam: float, tol: float = DEFAULT_TOL) -> tuple[Label, str]:
    """Label and branch id for the equal-rows family, without building a witness."""
    scale = max(abs(lam), abs(mu), abs(gam))
    lam, mu, gam = (_clean(x, scale, tol) for x in (lam, mu, gam))
    s = _sum_sign((lam, mu, gam), tol)
    sl, sm, sg = _sign(lam, 0, 0), _sign(mu, 0, 0), _sign(gam, 0, 0)
    if s == 0:
        if sl == sm == sg == 0:
            raise AllZero("all three rows vanish")
        raise OutOfLemmaScope("row parameters sum to zero")
    zeros = (sl == 0) + (sm == 0) + (sg == 0)
    if zeros == 3:
        raise AllZero("all three rows vanish")
    if zeros == 2:
        which = 1 if sl else (2 if sm else 3)
        return Label.E4, f"L1.a.{which}"
    if zeros == 1:
        if sl == 0:
            prod, which = sm * sg, 1
        elif sm == 0:
            prod, which = sl * sg, 2
        else:
            prod, which = sl * sm, 3
        return (Label.E5, f"L1.b.{which}") if prod > 0 else (Label.E6, f"L1.c.{which}")
    sab = _sum_sign((lam, mu), tol)
    first = sl * sm * sab * s
    second = sg * sab
    if first > 0 and second > 0:
        return Label.E7, "L1.d"
    if first > 0 and second < 0:
        return Label.E8, "L1.e.1"
    if first < 0 and second > 0:
        return Label.E8, "L1.e.2"
    if sab == 0:
        return Label.E8, "L1.e.3"
    return Label.E9, "L1.f"


def _l1_one_nonzero(lam: float) -> np.ndarray:
    c = 1.0 / lam
    return np.array([[c, c, c], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def _l1_first_zero(mu: float, gam: float) -> np.ndarray:
    # lam = 0, mu*gam != 0; free constants fixed to 1 and 0
    c = 1.0 / (mu + gam)
    if mu * gam > 0:
        third = [0.0, math.sqrt(gam / mu) * c, -math.sqrt(mu / gam) * c]
    else:
        third = [0.0, math.sqrt(-gam / mu) * c, math.sqrt(-mu / gam) * c]
    return np.array([[c, c, c], [1.0, 0.0, 0.0], third])


def _l1_generic(lam: float, mu: float, gam: float, branch: str, tol: float) -> np.ndarray:
    s = lam + mu + gam
    ab = lam + mu
    c = 1.0 / s
    first = [c, c, c]
    if branch == "L1.e.3":
        return _l1_opposite_pair(lam, gam, tol)
    k = 1.0 / (ab * s)
    if branch in ("L1.d", "L1.e.1"):
        if lam * mu > 0:
            second = [-math.sqrt(mu * k / lam), math.sqrt(lam * k / mu), 0.0]
        else:
            second = [math.sqrt(mu * k / lam), math.sqrt(lam * k / mu), 0.0]
        if branch == "L1.d":
            z = math.sqrt(gam / ab) * c
            third = [z, z, -math.sqrt(ab / gam) * c]
        else:
            z = math.sqrt(-gam / ab) * c
            third = [z, z, math.sqrt(-ab / gam) * c]
        return np.array([first, second, third])
    if branch == "L1.e.2":
        z = math.sqrt(gam / ab) * c
        second = [z, z, -math.sqrt(ab / gam) * c]
        third = [math.sqrt(-mu * k / lam), math.sqrt(-lam * k / mu), 0.0]
        return np.array([first, second, third])
    # L1.f
    if lam * mu > 0:
        second = [-math.sqrt(-mu * k / lam), math.sqrt(-lam * k / mu), 0.0]
    else:
        second = [math.sqrt(-mu * k / lam), math.sqrt(-lam * k / mu), 0.0]
    z = math.sqrt(-gam / ab) * c
    third = [z, z, math.sqrt(-ab / gam) * c]
    return np.array([first, second, third])


def _l1_opposite_pair(lam: float, gam: float, tol: float) -> np.ndarray:
    # mu = -lam, so the row sum is gam
    lg = lam + gam
    side = _sum_sign((lam, gam), tol) * (1 if lam > 0 else -1)
    if side > 0:
        r = math.sqrt(lam * lg)
        w = math.sqrt(lam / lg) / gam
        return np.array([[1 / gam] * 3,
                         [1 / r, 0.0, -(lam / gam) / r],
                         [w, w * lg / lam, w]])
    if side < 0:
        r = math.sqrt(-lam * lg)
        w = math.sqrt(-lam / lg) / gam
        return np.array([[1 / gam] * 3,
                         [w, w * lg / lam, w],
                         [1 / r, 0.0, -(lam / gam) / r]])
    q = 1.0 / (math.sqrt(2.0) * lam)
    return np.array([[-1 / lam] * 3,
                     [0.0, q, -q],
                     [math.sqrt(2.0) / lam, q, q]])


def equal_rows_witness(lam: float, mu: float, gam: float, branch: str, tol: float = DEFAULT_TOL) -> np.ndarray:
    kind, _, which = branch.partition(".")[2].partition(".")
    if kind == "a":
        if which == "1":
            return _l1_one_nonzero(lam)
        if which == "2":
            return _l1_one_nonzero(mu) @ SWAP12
        return _l1_one_nonzero(gam) @ SWAP13
    if kind in ("b", "c"):
        if which == "1":
            return _l1_first_zero(mu, gam)
        if which == "2":
            return _l1_first_zero(lam, gam) @ SWAP12
        return _l1_first_zero(mu, lam) @ SWAP13
    return _l1_generic(lam, mu, gam, branch, tol)


def classify_equal_rows(p: EqualRowsParams | tuple, tol: float = DEFAULT_TOL) -> Classification:
    if not isinstance(p, EqualRowsParams):
        p = EqualRowsParams(*p)
    label, branch = decide_equal_rows(p.lam, p.mu, p.gam, tol)
    w = equal_rows_witness(p.lam, p.mu, p.gam, branch, tol)
    return Classification(label, branch, w, witness_residual(p.matrix(), w, label))


def classify_lemma2(a: float, b: float, tol: float = DEFAULT_TOL) -> Classification:
    return classify_equal_rows(EqualRowsParams((1 + a) / 2, (1 - b) / 2, (b - a) / 2), tol)


# --- proportional rows -----------------------------------------------------

@dataclass(frozen=True)
class _Facts:
    """Signs of every quantity the proportional-rows table inspects (0 = vanishes)."""
    a: int
    b: int
    c: int
    lam: int
    mu: int
    q: int  # alpha^2 + lam beta^2 + mu gamma^2
    p: int  # alpha^2 + lam beta^2
    r: int  # lam beta^2 + mu gamma^2


def _facts(alpha, beta, gamma, lam, mu, tol) -> _Facts:
    rs = max(abs(alpha), abs(beta), abs(gamma))
    ms = max(abs(lam), abs(mu))
    alpha, beta, gamma = (_clean(x, rs, tol) for x in (alpha, beta, gamma))
    lam, mu = _clean(lam, ms, tol), _clean(mu, ms, tol)
    a2, lb, mg = alpha * alpha, lam * beta * beta, mu * gamma * gamma
    sign = lambda x: (x > 0) - (x < 0)
    return _Facts(
        sign(alpha), sign(beta), sign(gamma), sign(lam), sign(mu),
        _sum_sign((a2, lb, mg), tol), _sum_sign((a2, lb), tol), _sum_sign((lb, mg), tol),
    )


def _decide_isotropic_row(f: _Facts) -> tuple[Label, str]:
    lam, mu, b, c = f.lam, f.mu, f.b, f.c
    if mu == 0 and lam and b and c:
        return Label.E1, "L3.I.a.1"
    if lam == 0 and b and c and mu:
        return Label.E1, "L3.I.a.2"
    if c == 0 and mu == 0 and lam and b:
        return Label.E1, "L3.I.a.3"
    if lam == 0 and b == 0 and c and mu:
        return Label.E1, "L3.I.a.4"
    if c == 0 and lam and b and mu > 0:
        return Label.E2, "L3.I.b.1"
    if b == 0 and lam and c and lam > 0 and mu:
        return Label.E2, "L3.I.b.2"
    if lam and b and c and mu:
        return Label.E2, "L3.I.b.3"
    if c == 0 and lam and b and mu < 0:
        return Label.E3, "L3.I.c.1"
    if b == 0 and c and mu and lam < 0:
        return Label.E3, "L3.I.c.2"
    raise UncoveredBranch(f"branch I with sign pattern {f}")


def _decide_anisotropic_row(f: _Facts) -> tuple[Label, str]:
    lam, mu, q, p = f.lam, f.mu, f.q, f.p
    if lam == 0 and mu == 0:
        return Label.E4, "L3.II.d"
    if lam == 0 and mu > 0:
        return Label.E5, "L3.II.e.1"
    if mu == 0 and lam > 0:
        return Label.E5, "L3.II.e.2"
    if lam == 0 and mu < 0:
        return Label.E6, "L3.II.f.1"
    if mu == 0 and lam < 0:
        return Label.E6, "L3.II.f.2"
    if lam > 0 and mu > 0:
        return Label.E7, "L3.II.g"
    table = (
        ((1, -1, None, 1), Label.E8, "L3.II.h.1"),
        ((-1, 1, -1, 1), Label.E8, "L3.II.h.2"),
        ((-1, 1, 1, None), Label.E8, "L3.II.h.3"),
        ((-1, -1, 1, -1), Label.E8, "L3.II.h.4"),
        ((-1, -1, -1, None), Label.E8, "L3.II.h.5"),
    )
    for (sl, sm, sp, sq), label, branch in table:
        if lam == sl and mu == sm and (sp is None or p == sp) and (sq is None or q == sq):
            return label, branch
    if lam and mu and p == 0:
        return Label.E8, "L3.II.h.6"
    table = (
        ((1, -1, None, -1), "L3.II.i.1"),
        ((-1, 1, -1, -1), "L3.II.i.2"),
        ((-1, -1, 1, 1), "L3.II.i.3"),
    )
    for (sl, sm, sp, sq), branch in table:
        if lam == sl and mu == sm and (sp is None or p == sp) and (sq is None or q == sq):
            return Label.E9, branch
    raise UncoveredBranch(f"branch II with sign pattern {f}")


def _decide_zero_first_entry(f: _Facts) -> tuple[Label, str]:
    lam, mu, c, r = f.lam, f.mu, f.c, f.r
    if mu and c and lam > 0 and r == 0:
        return Label.E2, "L3.III.j"
    if mu and c and lam < 0 and r == 0:
        return Label.E3, "L3.III.k"
    if mu == 0 and lam > 0:
        return Label.E5, "L3.III.l.1"
    if lam == 0 and c and mu > 0:
        return Label.E5, "L3.III.l.2"
    if mu == 0 and lam < 0:
        return Label.E6, "L3.III.m.1"
    if lam == 0 and c and mu < 0:
        return Label.E6, "L3.III.m.2"
    if lam > 0 and mu > 0:
        return Label.E7, "L3.III.n"
    if lam < 0 and mu < 0:
        return Label.E8, "L3.III.o.1"
    if r > 0 and lam * mu < 0:
        return Label.E8, "L3.III.o.2"
    if r < 0 and lam * mu < 0:
        return Label.E9, "L3.III.p"
    if lam == 0 and mu == 0:
        return Label.E10, "L3.III.q"
    if lam == 0 and c == 0 and mu > 0:
        return Label.E11, "L3.III.r"
    if lam == 0 and c == 0 and mu < 0:
        return Label.E12, "L3.III.s"
    raise UncoveredBranch(f"branch III with sign pattern {f}")


def decide_proportional_rows(alpha, beta, gamma, lam, mu, tol: float = DEFAULT_TOL) -> tuple[Label, str]:
    """Label and branch id for the proportional-rows family, without a witness."""
    f = _facts(alpha, beta, gamma, lam, mu, tol)
    if f.a == 0 and f.b == 0:
        if f.c == 0:
            return Label.E0, "L3.zero"
        label, branch = decide_proportional_rows(alpha, gamma, beta, mu, lam, tol)
        return label, "swap23:" + branch
    if f.a:
        return _decide_isotropic_row(f) if f.q == 0 else _decide_anisotropic_row(f)
    return _decide_zero_first_entry(f)


def _diag(*d) -> np.ndarray:
    return np.diag(np.array(d, dtype=float))


def _scaled_first(alpha, beta, gamma) -> list[float]:
    return [1 / alpha, beta / alpha ** 2, gamma / alpha ** 2]


def _signed_pair(d: np.ndarray, second: int, third: int) -> np.ndarray:
    """Order rows 2 and 3 so a negative square never precedes a positive one."""
    if second < 0 < third:
        d = d[[0, 2, 1]]
    return d


def _isotropic_row_witness(alpha, beta, gamma, lam, mu, branch) -> np.ndarray:
    if branch == "L3.I.a.1":
        return np.array([[0, -1, 0], [-1, 0, -1], [0, 0, 1.0]]) @ _diag(*_scaled_first(alpha, beta, gamma))
    if branch == "L3.I.a.2":
        return np.array([[0, 0, -1], [-1, -1, 0], [0, 1, 0.0]]) @ _diag(*_scaled_first(alpha, beta, gamma))
    if branch == "L3.I.a.3":
        return _diag(1 / alpha, beta / alpha ** 2, 1.0)
    if branch == "L3.I.a.4":
        return _diag(1 / alpha, gamma / alpha ** 2, 1.0) @ SWAP23
    if branch in ("L3.I.b.1", "L3.I.c.1"):
        return _diag(1 / alpha, beta / alpha ** 2, 1 / (alpha * math.sqrt(abs(mu))))
    if branch in ("L3.I.b.2", "L3.I.c.2"):
        return _diag(1 / alpha, gamma / alpha ** 2, 1 / (alpha * math.sqrt(abs(lam)))) @ SWAP23
    # L3.I.b.3
    return _all_nonzero_isotropic(alpha, beta, gamma, lam, mu)


def _all_nonzero_isotropic(alpha, beta, gamma, lam, mu) -> np.ndarray:
    """Branch I with every parameter nonzero: scale to equal rows (1, -1-u, u), then mix."""
    u = mu * gamma ** 2 / alpha ** 2
    det = u * (1 + u)
    if det == 0.0 or not math.isfinite(det):
        raise ClassificationError("second basis change of the all-nonzero case is singular")
    k = u * (1 + u) ** 2
    d = 2 * (alpha ** 2 + mu * gamma ** 2)
    plus = alpha ** 2 * (k + 1) / d
    minus = alpha ** 2 * (k - 1) / d
    mix = np.array([[plus, minus, plus], [minus, plus, minus], [-u, 0.0, 1.0]])
    w = mix @ _diag(*_scaled_first(alpha, beta, gamma))
    frame = _isotropic_frame(alpha, beta, gamma, lam, mu)
    if not (abs(det3(mix) - det) <= 1e-9 * abs(det) and abs(det3(w)) > 1e-12):
        # k +- 1 cancel for large |u| and the scaling collapses for tiny beta or gamma
        return frame
    # the mixed basis grows like u^3, so keep whichever basis is more accurate
    m = np.outer([1.0, lam, mu], [alpha, beta, gamma])
    return min((w, frame), key=lambda p: _absolute_error(m, p, Label.E2))


def _isotropic_frame(alpha, beta, gamma, lam, mu) -> np.ndarray:
    """Basis giving E2 for x.y = F(x, y) r with F = diag(1, lam, mu) and F(r, r) = 0.

    Take x with F(x, r) = 1 and F(x, x) = rho = +-1, set e1 = x,
    e2 = rho r - x and let e3 span the F-orthogonal complement of {x, r}.
    """
    form = np.array([1.0, lam, mu])
    r = np.array([alpha, beta, gamma])
    rho = 1.0 if int(np.sum(form < 0)) == 1 else -1.0
    x = np.array([1.0 / alpha, 0.0, 0.0])
    x = x + 0.5 * (rho - float(np.sum(form * x * x))) * r
    z = np.cross(form * x, form * r)
    z = z / math.sqrt(float(np.sum(form * z * z)) / rho)
    return np.array([x, rho * r - x, z])


def _anisotropic_row_witness(alpha, beta, gamma, lam, mu, branch) -> np.ndarray:
    a2 = alpha * alpha
    if branch == "L3.II.d":
        return np.array([_scaled_first(alpha, beta, gamma), [0, 1, -1], [0, 4, 1]], dtype=float)
    if branch in ("L3.II.e.1", "L3.II.f.1", "L3.II.e.2", "L3.II.f.2"):
        if branch.endswith("2"):
            beta, gamma, lam, mu = gamma, beta, mu, lam
        q = a2 + mu * gamma ** 2
        p1 = np.array([_scaled_first(alpha, beta, gamma), [0, 1, 0], [-gamma * mu / alpha, 1, 1]])
        p2 = _diag(a2 / q, 1.0, alpha / (math.sqrt(abs(mu)) * q))
        w = p2 @ p1
        return w @ SWAP23 if branch.endswith("2") else w
    p = a2 + lam * beta ** 2
    q = p + mu * gamma ** 2
    if branch == "L3.II.h.6":
        mg = mu * gamma ** 2
        p1 = np.array([
            _scaled_first(alpha, beta, gamma),
            [-mu / (2 * alpha), beta * mu / (2 * a2), 1 / gamma],
            [(2 * a2 - mg) / (2 * alpha ** 3), beta * (2 * a2 + mg) / (2 * a2 * a2), gamma / a2],
        ])
        return _diag(a2 / mg, 1 / mu, -a2 / mg) @ p1
    p1 = np.array([
        _scaled_first(alpha, beta, gamma),
        [-lam * beta / alpha, 1, 0],
        [-mu * gamma / p, -beta * mu * gamma / (alpha * p), 1 / alpha],
    ])
    p2 = _diag(a2 / q, alpha / math.sqrt(abs(lam * p * q)), alpha * math.sqrt(abs(p)) / (math.sqrt(abs(mu)) * abs(q)))
    p2 = _signed_pair(p2, int(np.sign(lam * p * q)), int(np.sign(mu * p)))
    return p2 @ p1


_CYCLE = _perm((1, 2, 0))     # {e2, e3, e1}
_REVERSE = _perm((2, 1, 0))   # {e3, e2, e1}


def _zero_first_entry_witness(alpha, beta, gamma, lam, mu, branch, tol) -> np.ndarray:
    f = _facts(alpha, beta, gamma, lam, mu, tol)
    if f.lam:
        lb = lam * beta
        if f.mu == 0:
            p2 = np.array([[1 / lb, gamma / (lb * beta), 0], [0, 1, 0], [0, 0, math.sqrt(abs(lam)) / lb]])
            return p2 @ _CYCLE
        if f.c == 0:
            p2 = _diag(1 / lb, 1 / (math.sqrt(abs(mu * lam)) * beta), 1 / (math.sqrt(abs(lam)) * beta))
            p2 = _signed_pair(p2, int(np.sign(lam * mu)), int(np.sign(lam)))
            return p2 @ _CYCLE
        p2 = _diag(1 / lb, 1.0, 1.0)
        lb2 = lam * beta * beta
        if f.r == 0:
            p3 = _diag(1.0, gamma / lb2, 1 / (math.sqrt(abs(lam)) * beta))
            return p3 @ p2 @ _CYCLE
        r = lb2 + mu * gamma * gamma
        p3 = np.array([[1, gamma / lb2, 0], [-mu * gamma, 1, 0], [0, 0, 1.0]])
        p4 = _diag(lb2 / r, abs(beta) * math.sqrt(abs(lam / mu)) / abs(r), 1 / math.sqrt(abs(r)))
        p4 = _signed_pair(p4, int(np.sign(lam * mu)), int(np.sign(r)))
        return p4 @ p3 @ p2 @ _CYCLE
    if f.mu and f.c:
        p2 = np.array([[mu * gamma, mu * beta, 0], [0, 1, 0], [0, 0, mu]])
        p3 = _diag(1 / (mu * gamma) ** 2, 1.0, 1 / (math.sqrt(abs(mu)) * mu * gamma))
        return p3 @ p2 @ _REVERSE
    if f.mu == 0:
        return np.array([[0, beta, gamma], [0, 0, 1 / beta], [1, 0, 0]])
    return np.array([[0, beta, 0], [1, 0, 0], [0, 0, 1 / math.sqrt(abs(mu))]])


def proportional_rows_witness(alpha, beta, gamma, lam, mu, branch: str, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    if branch.startswith("swap23:"):
        inner = proportional_rows_witness(alpha, gamma, beta, mu, lam, branch[len("swap23:"):], tol)
        return inner @ SWAP23
    if branch == "L3.zero":
        return None
    if branch.startswith("L3.I."):
        return _isotropic_row_witness(alpha, beta, gamma, lam, mu, branch)
    if branch.startswith("L3.II."):
        return _anisotropic_row_witness(alpha, beta, gamma, lam, mu, branch)
    return _zero_first_entry_witness(alpha, beta, gamma, lam, mu, branch, tol)


def classify_proportional_rows(p: ProportionalRowsParams | tuple, tol: float = DEFAULT_TOL) -> Classification:
    if not isinstance(p, ProportionalRowsParams):
        p = ProportionalRowsParams(*p)
    args = (p.alpha, p.beta, p.gamma, p.lam, p.mu)
    label, branch = decide_proportional_rows(*args, tol)
    w = proportional_rows_witness(*args, branch, tol)
    if w is None:
        return Classification(label, branch, None, 0.0)
    return Classification(label, branch, w, witness_residual(p.matrix(), w, label))


# --- general dispatch ------------------------------------------------------

def classify_general(m, tol: float = DEFAULT_TOL) -> Classification:
    """Detect the zero, equal-rows or proportional-rows shape and classify."""
    m = np.asarray(m, dtype=float)
    scale = float(np.max(np.abs(m)))
    if scale <= tol:
        return Classification(Label.E0, "zero", None, 0.0)
    is_equal = all(vanishes(float(np.ptp(row)), scale, tol) for row in m)
    if is_equal:
        lam, mu, gam = (float(np.mean(row)) for row in m)
        try:
            return classify_equal_rows(EqualRowsParams(lam, mu, gam), tol)
        except OutOfLemmaScope:
            pass
    pivot = int(np.argmax(np.max(np.abs(m), axis=1)))
    base = m[pivot]
    k = int(np.argmax(np.abs(base)))
    ratios = m[:, k] / base[k]
    if not all(vanishes(float(np.max(np.abs(m[i] - ratios[i] * base))), scale, tol) for i in range(3)):
        raise UnsupportedShape("rows are not proportional")
    if vanishes(float(np.max(np.abs(m[0]))), scale, tol):
        if is_equal:
            raise OutOfLemmaScope("equal rows summing to zero with a vanishing first row")
        # move a nonzero row to the front, classify, then undo the move
        order = (pivot,) + tuple(i for i in range(3) if i != pivot)
        q = _perm(order)
        inner = classify_general(q @ m @ q.T, tol)
        w = None if inner.witness is None else inner.witness @ q
        res = 0.0 if w is None else witness_residual(m, w, inner.label)
        return Classification(inner.label, "perm:" + inner.branch, w, res)
    first = m[0]
    lam = float(ratios[1] / ratios[0])
    mu = float(ratios[2] / ratios[0])
    c = classify_proportional_rows(ProportionalRowsParams(*(float(x) for x in first), lam, mu), tol)
    if c.witness is not None:
        c = Classification(c.label, c.branch, c.witness, witness_residual(m, c.witness, c.label))
    return c


def witness_determinant(c: Classification) -> float:
    return 0.0 if c.witness is None else det3(c.witness)
