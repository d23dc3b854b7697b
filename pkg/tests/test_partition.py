import math
from fractions import Fraction

import pytest

from evochain.canonical import Label
from evochain.chains import ChainSpec, chain_label
from evochain.config import builtin
from evochain.expr import parse_piecewise
from evochain.partition import NoChangeFound, refine_breakpoint, scan, scan_1d, scan_2d, snap

EX1 = builtin("example1").chain()
EX2 = builtin("example2").chain()
EX3 = builtin("example3").chain()


@pytest.mark.parametrize("chain,lo,hi,want", [
    (EX1, 2.7, 2.8, 2.75),
    (EX2, 5.9, 6.1, 6.0),
    (EX1, 5.6, 5.7, 17 / 3),
])
def test_refine_examples(chain, lo, hi, want):
    counter = [0]
    x = refine_breakpoint(chain, lo, hi, "s", None, 1e-6, counter=counter)
    assert abs(x - want) <= 1e-6
    assert counter[0] <= math.ceil(math.log2((hi - lo) / 1e-6)) + 1


def test_refine_along_t():
    x = refine_breakpoint(EX3, 3.5, 6.5, "t", 0.5, 1e-6)
    assert abs(x - 6) <= 1e-6


def test_refine_without_change_raises():
    with pytest.raises(NoChangeFound):
        refine_breakpoint(EX1, 3.2, 3.8)


def test_snap_prefers_small_denominators():
    assert snap(2.7499995, 2.7500005) == Fraction(11, 4)
    assert snap(5.6666662, 5.6666672) == Fraction(17, 3)
    assert snap(math.sqrt(2) - 1e-7, math.sqrt(2) + 1e-7) is None


def test_example1_partition():
    part = scan(EX1, (0, 8), 4096)
    assert [str(c.label) for c in part.cells] == ["E8", "E9", "E7", "E8", "E9"]
    points = [(b.value, str(b.point)) for b in part.breakpoints]
    for (x, lab), (want, want_lab) in zip(points, [(2.75, "E6"), (3, "E4"), (4, "E5"), (17 / 3, "E6")]):
        assert abs(x - want) <= 1e-6 and lab == want_lab
    assert len(points) == 4
    assert all(b.isolated for b in part.breakpoints)


def test_example2_partition():
    part = scan(EX2, (0, 8), 4096)
    assert [str(c.label) for c in part.cells] == ["E9", "E7", "E8", "E9"]
    assert [str(b.point) for b in part.breakpoints] == ["E4", "E5", "E6"]
    for b, want in zip(part.breakpoints, (2, 2.25, 6)):
        assert abs(b.value - want) <= 1e-6


def test_example2_zero_band():
    part = scan_2d(EX2, 0, 12, 96)
    for band in part.bands:
        tail = [r for r in band.runs if r.hi > 10 + 1e-6]
        assert tail and all(r.label == Label.E0 for r in tail)
        assert all(r.lo >= 10 - 1e-6 or band.s.lo >= 10 - 1e-6 for r in tail)
    for s, t, lab in part.grid:
        if t >= 10:
            assert lab == Label.E0


def test_constant_chain_has_one_cell():
    fns = {k: parse_piecewise(v) for k, v in (("h", "1"), ("f", "0"), ("g", "0"))}
    part = scan_1d(ChainSpec("M1", fns), (0, 8), 64)
    assert len(part.cells) == 1 and not part.breakpoints


def test_undefined_points_become_cells():
    gap = parse_piecewise("[0, 1): 1; [2, 4): 1")
    fns = {"h": gap, "f": parse_piecewise("0"), "g": parse_piecewise("0")}
    part = scan_1d(ChainSpec("M1", fns), (0, 3.9), 40)
    labels = [c.label for c in part.cells]
    assert labels == [Label.E5, None, Label.E5]
    assert (part.cells[1].lo, part.cells[1].hi) == (1.0, 2.0)


def test_doubling_resolution_keeps_interior_labels():
    coarse = scan_1d(EX1, (0, 8), 512)
    fine = scan_1d(EX1, (0, 8), 1024)
    step = 8 / 511
    for c in coarse.cells:
        lo, hi = c.lo + 2 * step, c.hi - 2 * step
        for k in range(5):
            x = lo + (hi - lo) * k / 4
            if lo < hi:
                owner = [f for f in fine.cells if f.lo < x < f.hi]
                assert owner and owner[0].label == c.label


def test_example3_table():
    part = scan_2d(EX3, 0, 8, 160)
    got = [(round(b.s.lo, 6), round(b.s.hi, 6), [str(r.label) for r in b.runs]) for b in part.bands]
    assert got == [
        (0, 1, ["E3", "E8", "E9", "E8"]),
        (1, 2, ["E1", "E6"]),
        (2, 3, ["E2", "E8", "E9"]),
        (3, 4, ["E6", "E12"]),
        (4, 4, ["E4", "E10"]),
        (4, 5, ["E5", "E11"]),
        (5, 5.7, ["E8", "E9"]),
        (5.7, 5.7, ["E5", "E11"]),
        (5.7, 8, ["E7"]),
    ]


def test_partition_is_deterministic():
    a = scan_1d(EX1, (0, 8), 256).to_dict()
    b = scan_1d(EX1, (0, 8), 256).to_dict()
    assert a == b


def test_breakpoint_point_labels_match_direct_classification():
    part = scan_1d(EX1, (0, 8), 600)
    for b in part.breakpoints:
        x = float(b.exact)
        assert chain_label(EX1, x, x)[0] == b.point
