"""Partition of the time set by isomorphism class: grid scan, then bisection.

A breakpoint whose bracket contains a simple rational (denominator at most
``SNAP_DENOMINATOR``) is snapped to it and classified exactly there; that is
how single-point labels such as the E4 at s = 3 in the first example are
recovered.  If the snapped label differs from both neighbours it is reported
as a point annotation, otherwise it tells which side owns the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import DEFAULT_TOL
from .canonical import Label
from .chains import ChainSpec, chain_label
from .expr import DomainError

SNAP_DENOMINATOR = 64
# zero tolerance is scaled by this when re-checking a suspected tolerance sliver
FINE_FACTOR = 1e-3

MaybeLabel = Optional[Label]


class NoChangeFound(Exception):
    pass


@dataclass(frozen=True)
class Breakpoint:
    axis: str
    value: float
    width: float
    left: MaybeLabel
    right: MaybeLabel
    point: MaybeLabel = None
    exact: Optional[Fraction] = None
    fixed_other: Optional[float] = None

    @property
    def location(self) -> float:
        """Snapped value when one was found, else the bracket midpoint."""
        return float(self.exact) if self.exact is not None else self.value

    @property
    def isolated(self) -> bool:
        """The label exactly at the breakpoint differs from both sides."""
        return self.exact is not None and self.point != self.left and self.point != self.right

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "value": self.value,
            "width": self.width,
            "left": _lab(self.left),
            "point": _lab(self.point),
            "right": _lab(self.right),
            "exact": None if self.exact is None else str(self.exact),
            "fixed_other": self.fixed_other,
        }


@dataclass(frozen=True)
class Cell:
    """Interval [lo, hi] with closure flags (None when the owner of an end is unknown)."""
    lo: float
    hi: float
    label: MaybeLabel
    branch: str
    lo_closed: Optional[bool] = True
    hi_closed: Optional[bool] = False

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "label": _lab(self.label), "branch": self.branch,
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}


@dataclass(frozen=True)
class Band:
    """An s-interval (or single s) with the t-partition found at a representative s."""
    s: Cell
    s_rep: float
    runs: tuple[Cell, ...]
    t_breakpoints: tuple[Breakpoint, ...] = ()

    @property
    def signature(self) -> tuple:
        return tuple(r.label for r in self.runs)

    def to_dict(self) -> dict:
        return {"s": self.s.to_dict(), "s_rep": self.s_rep, "runs": [r.to_dict() for r in self.runs],
                "t_breakpoints": [b.to_dict() for b in self.t_breakpoints]}


@dataclass
class Partition:
    dimension: str
    domain: tuple[float, ...]
    cells: list[Cell] = field(default_factory=list)
    bands: list[Band] = field(default_factory=list)
    breakpoints: list[Breakpoint] = field(default_factory=list)
    grid: list[tuple[float, float, MaybeLabel]] = field(default_factory=list)

    def labels(self) -> list[MaybeLabel]:
        return [c.label for c in self.cells]

    def rectangles(self) -> list[dict]:
        """2-D cells as rectangles clipped to the triangle s <= t."""
        out = []
        for band in self.bands:
            for run in band.runs:
                out.append({"s_lo": band.s.lo, "s_hi": band.s.hi, "t_lo": max(run.lo, band.s.lo),
                            "t_hi": run.hi, "label": _lab(run.label), "branch": run.branch})
        return out

    def to_dict(self) -> dict:
        d = {"dimension": self.dimension, "domain": list(self.domain),
             "breakpoints": [b.to_dict() for b in self.breakpoints]}
        if self.dimension == "1d":
            d["cells"] = [c.to_dict() for c in self.cells]
        else:
            d["bands"] = [b.to_dict() for b in self.bands]
            d["cells"] = self.rectangles()
        return d


def _lab(x: MaybeLabel) -> Optional[str]:
    return None if x is None else str(x)


# --- labelling helpers -----------------------------------------------------

def _labeller(c: ChainSpec, axis: str, fixed_other: Optional[float], tol: float,
              fine: bool = True) -> Callable[[float], tuple[MaybeLabel, str]]:
    def at(x: float) -> tuple[MaybeLabel, str]:
        if axis == "s":
            s, t = x, (x if fixed_other is None else fixed_other)
        else:
            s, t = fixed_other, x
        try:
            return chain_label(c, s, t, tol)
        except (DomainError, ArithmeticError):
            return None, "undefined"
    if tol > 0 and fine:
        at.fine = _labeller(c, axis, fixed_other, tol * FINE_FACTOR, fine=False)
    else:
        at.fine = at
    return at


def snap(lo: float, hi: float, max_den: int = SNAP_DENOMINATOR) -> Optional[Fraction]:
    """Smallest-denominator rational in [lo, hi], if its denominator is small enough."""
    for q in range(1, max_den + 1):
        p = math.ceil(lo * q)
        if p / q <= hi:
            return Fraction(p, q)
    return None


def _bisect(at, lo: float, hi: float, lo_label: MaybeLabel, tol_x: float) -> tuple[float, float, int]:
    calls = 0
    changed = False
    while hi - lo > tol_x:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        calls += 1
        if at(mid)[0] == lo_label:
            lo = mid
        else:
            hi = mid
            changed = True
    if not changed:
        calls += 1
        if at(hi)[0] == lo_label:
            raise NoChangeFound(f"label {lo_label} on both ends of [{lo}, {hi}]")
    return lo, hi, calls


def refine_breakpoint(c: ChainSpec, lo: float, hi: float, axis: str = "s", fixed_other: Optional[float] = None,
                      tol_x: float = 1e-6, tol: float = DEFAULT_TOL, lo_label: MaybeLabel = None,
                      counter: Optional[list] = None) -> float:
    """Midpoint of a bracket of width <= tol_x containing the label change in [lo, hi].

    ``fixed_other`` is the other time coordinate; for axis 's' it may be None,
    meaning t = s.  ``counter`` (a one-element list) accumulates classifications.
    """
    at = _labeller(c, axis, fixed_other, tol)
    calls = 0
    if lo_label is None:
        lo_label = at(lo)[0]
        calls += 1
    a, b, n = _bisect(at, lo, hi, lo_label, tol_x)
    if counter is not None:
        counter[0] += calls + n
    return 0.5 * (a + b)


def _make_bp(at, axis, a, b, left, right, fixed_other) -> Breakpoint:
    exact = snap(a, b)
    point = at(float(exact))[0] if exact is not None else None
    return Breakpoint(axis, 0.5 * (a + b), b - a, left, right, point, exact, fixed_other)


def _breakpoints(at, axis: str, lo: float, hi: float, lo_label: MaybeLabel, hi_label: MaybeLabel,
                 tol_x: float, fixed_other: Optional[float]) -> list[Breakpoint]:
    """Refine the change between two grid points.

    When a third label shows up in between, its region is bracketed too.  A
    region narrower than ``tol_x`` is a point label.  A wider one is checked
    at a much tighter zero tolerance: if it then takes a neighbour's label it
    was only the tolerance band of a quantity vanishing to second order, and
    is absorbed.
    """
    a, b, _ = _bisect(at, lo, hi, lo_label, tol_x)
    middle = at(b)[0]
    if middle == hi_label:
        return [_make_bp(at, axis, a, b, lo_label, hi_label, fixed_other)]
    try:
        c, d, _ = _bisect(at, b, hi, middle, tol_x)
    except NoChangeFound:
        return [_make_bp(at, axis, a, b, lo_label, hi_label, fixed_other)]
    if d - a <= 2 * tol_x:
        return [_make_bp(at, axis, a, d, lo_label, hi_label, fixed_other)]
    refined = at.fine(0.5 * (b + c))[0]
    if refined == lo_label:
        return [_make_bp(at, axis, c, d, lo_label, hi_label, fixed_other)]
    if refined == hi_label:
        return [_make_bp(at, axis, a, b, lo_label, hi_label, fixed_other)]
    return [_make_bp(at, axis, a, b, lo_label, middle, fixed_other),
            _make_bp(at, axis, c, d, middle, hi_label, fixed_other)]


def _runs_from_grid(at, xs: list[float], axis: str, tol_x: float, fixed_other: Optional[float]):
    """Scan grid points, refine each label change, and merge into cells."""
    labs = [at(x) for x in xs]
    raw: list[Breakpoint] = []
    for i in range(len(xs) - 1):
        if labs[i][0] != labs[i + 1][0]:
            raw.extend(_breakpoints(at, axis, xs[i], xs[i + 1], labs[i][0], labs[i + 1][0], tol_x, fixed_other))
    # a change landing exactly on a grid point shows up as two breakpoints
    # around a one-point run; fold them into one annotated breakpoint
    merged: list[Breakpoint] = []
    for bp in raw:
        if merged and abs(bp.value - merged[-1].value) <= 2 * tol_x and bp.left == merged[-1].right:
            prev = merged.pop()
            exact = prev.exact if prev.exact is not None else bp.exact
            point = at(float(exact))[0] if exact is not None else bp.left
            bp = Breakpoint(axis, 0.5 * (prev.value + bp.value), max(prev.width, bp.width, abs(bp.value - prev.value)),
                            prev.left, bp.right, point, exact, fixed_other)
            if bp.left == bp.right and not bp.isolated:
                continue
        merged.append(bp)
    cells: list[Cell] = []
    lo, lo_closed = xs[0], True
    start_label, start_branch = labs[0]
    for bp in merged:
        hi_closed = None if bp.exact is None else (bp.point == bp.left)
        cells.append(Cell(lo, bp.location, bp.left, _branch_near(at, lo, bp.location, start_branch), lo_closed, hi_closed))
        lo = bp.location
        lo_closed = None if bp.exact is None else (bp.point == bp.right)
    cells.append(Cell(lo, xs[-1], labs[-1][0], labs[-1][1], lo_closed, True))
    return cells, merged, labs


def _branch_near(at, lo, hi, default):
    mid = 0.5 * (lo + hi)
    return at(mid)[1] if hi > lo else default


def _grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 2:
        raise ValueError("resolution must be at least 2")
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def scan_1d(c: ChainSpec, domain: tuple[float, float], resolution: int = 4096, tol: float = DEFAULT_TOL,
            tol_x: float = 1e-6, fixed_t: Optional[float] = None) -> Partition:
    """Partition of an s-interval; t = s unless ``fixed_t`` is given."""
    xs = _grid(domain[0], domain[1], resolution)
    at = _labeller(c, "s", fixed_t, tol)
    cells, bps, labs = _runs_from_grid(at, xs, "s", tol_x, fixed_t)
    grid = [(x, x if fixed_t is None else fixed_t, lab[0]) for x, lab in zip(xs, labs)]
    return Partition("1d", tuple(domain), cells, [], bps, grid)


def _t_runs(c: ChainSpec, s: float, t_grid: list[float], tol: float, tol_x: float):
    ts = [s] + [t for t in t_grid if t > s]
    if len(ts) < 2:
        ts = [s, s]
    at = _labeller(c, "t", s, tol)
    cells, bps, labs = _runs_from_grid(at, ts, "t", tol_x, s)
    return tuple(cells), tuple(bps), list(zip(ts, labs))


def scan_2d(c: ChainSpec, s_min: float, t_max: float, resolution: int = 256, tol: float = DEFAULT_TOL,
            tol_x: float = 1e-6) -> Partition:
    """Partition of the triangle s_min <= s <= t <= t_max into s-bands of t-runs."""
    xs = _grid(s_min, t_max, resolution)
    table: dict[int, list[MaybeLabel]] = {}
    grid = []
    for i, s in enumerate(xs):
        at = _labeller(c, "t", s, tol)
        row = [at(t)[0] for t in xs[i:]]
        table[i] = row
        grid.extend((s, t, lab) for t, lab in zip(xs[i:], row))

    s_bps: list[Breakpoint] = []
    for i in range(len(xs) - 1):
        # compare the two rows on their common t values (j >= i+1)
        left, right = table[i][1:], table[i + 1]
        j = next((k for k, (u, v) in enumerate(zip(left, right)) if u != v), None)
        if j is None:
            continue
        t_star = xs[i + 1 + j]
        at = _labeller(c, "s", t_star, tol)
        s_bps.extend(_breakpoints(at, "s", xs[i], xs[i + 1], left[j], right[j], tol_x, t_star))

    bands: list[Band] = []
    edges = [(xs[0], None)] + [(bp.location, bp) for bp in s_bps] + [(xs[-1], None)]
    sig_at = {}

    def runs_at(s):
        if s not in sig_at:
            sig_at[s] = _t_runs(c, s, xs, tol, tol_x)
        return sig_at[s]

    interior = []
    for (lo, lbp), (hi, hbp) in zip(edges, edges[1:]):
        rep = 0.5 * (lo + hi)
        runs, tbps, _ = runs_at(rep)
        interior.append((lo, hi, lbp, hbp, rep, runs, tbps))

    for k, (lo, hi, lbp, hbp, rep, runs, tbps) in enumerate(interior):
        lo_closed = True if lbp is None else None
        hi_closed = True if hbp is None else None
        sig = tuple(r.label for r in runs)
        if lbp is not None and lbp.exact is not None:
            lo_closed = tuple(r.label for r in runs_at(float(lbp.exact))[0]) == sig
        if hbp is not None and hbp.exact is not None:
            hi_closed = tuple(r.label for r in runs_at(float(hbp.exact))[0]) == sig
        if lbp is not None and lbp.exact is not None and k > 0:
            s0 = float(lbp.exact)
            pruns, ptbps, _ = runs_at(s0)
            psig = tuple(r.label for r in pruns)
            prev_sig = tuple(r.label for r in interior[k - 1][5])
            if psig != sig and psig != prev_sig:
                bands.append(Band(Cell(s0, s0, None, "point", True, True), s0, pruns, ptbps))
        bands.append(Band(Cell(lo, hi, None, "band", lo_closed, hi_closed), rep, runs, tbps))
    return Partition("2d", (s_min, t_max), [], bands, s_bps, grid)


def scan(c: ChainSpec, domain, resolution: int = 4096, tol: float = DEFAULT_TOL, tol_x: float = 1e-6,
         fixed_t: Optional[float] = None) -> Partition:
    """1-D scan for a pair (lo, hi); 2-D triangle scan for a triple (s_min, t_max, '2d')."""
    if len(domain) == 2:
        return scan_1d(c, (float(domain[0]), float(domain[1])), resolution, tol, tol_x, fixed_t)
    return scan_2d(c, float(domain[0]), float(domain[1]), resolution, tol, tol_x)
