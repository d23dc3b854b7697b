import math

import pytest
from hypothesis import given, strategies as st

from evochain.config import EXAMPLE3, parse_config
from evochain.expr import (
    BinOp, Const, DomainError, ExprSyntaxError, GapQueryError, Neg, OverlapError, Pow, Sqrt,
    UnknownIdentifier, Var, compile_expr, evaluate, parse, parse_piecewise, pretty,
)


def ex3(name):
    return parse_config(EXAMPLE3).chain().functions[name]


@pytest.mark.parametrize("text,x,want", [
    ("4*s - 16", 3, -4),
    ("s", 7, 7),
    ("4*s^2 - 24*s + 32", 4, 0),
    ("1/(s+1)", 0, 1),
    ("2^-1", 0, 0.5),
    ("-s**2", 3, -9),
    ("(s-1)^2 + 4", 2, 5),
    ("-2^2", 0, -4),
    ("sqrt(s)*sqrt(s)", 9, 9),
])
def test_evaluate_examples(text, x, want):
    assert evaluate(parse(text), x) == pytest.approx(want, abs=1e-15)


def test_horner_agrees_with_parsed_polynomial():
    poly = parse("4*s^2 - 24*s + 32")
    for s in (-3.5, 0.0, 1.25, 2.75, 6.0):
        assert evaluate(poly, s) == pytest.approx((4 * s - 24) * s + 32, rel=1e-15, abs=1e-15)


def test_syntax_error_reports_byte_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("1 + * s")
    assert err.value.offset == 4
    with pytest.raises(ExprSyntaxError) as err:
        parse("1 + 2 é")
    assert err.value.offset == 6
    with pytest.raises(ExprSyntaxError) as err:
        parse("1 é")
    assert err.value.offset == 2


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as err:
        parse("x + 1", "s")
    assert err.value.name == "x"


@pytest.mark.parametrize("text", ["", "   ", "s^1.5", "s^s", "(s", "s)", "sqrt s"])
def test_rejects_malformed(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


@pytest.mark.parametrize("text,x", [("1/s", 0.0), ("sqrt(s)", -1.0), ("s^-1", 0.0), ("s^400", 1e10)])
def test_domain_errors_are_typed(text, x):
    with pytest.raises(DomainError):
        evaluate(parse(text), x)


def test_piecewise_examples():
    eta = ex3("eta")
    assert eta(5) == 6
    assert eta(6) == 0
    assert parse_piecewise("[0, inf): 0", "t")(123.0) == 0
    assert ex3("phi2")(2.5) == 1
    assert ex3("vartheta")(2) == pytest.approx(math.sqrt(5), rel=1e-15)
    assert ex3("kappa")(0.5) == 0


def test_piecewise_boundaries_follow_half_open_rule():
    phi2 = ex3("phi2")
    assert [phi2(x) for x in (0, 1, 2, 3)] == [-1, 0, 1, -1]
    kappa = ex3("kappa")
    assert kappa(1) == -2 and kappa(6) == 0
    vartheta = ex3("vartheta")
    assert vartheta(3) == 0 and vartheta(6) == 4


def test_closed_piece_owns_its_right_end():
    phi1 = ex3("phi1")
    assert phi1(5) == 0
    assert phi1(5.7) == pytest.approx(0, abs=1e-15)
    assert phi1(6) == pytest.approx(0.3)


def test_gap_and_overlap():
    f = parse_piecewise("[0, 1): s; [2, 3): 1")
    with pytest.raises(GapQueryError):
        f(1.5)
    with pytest.raises(GapQueryError):
        f(-1)
    with pytest.raises(OverlapError):
        parse_piecewise("[0, 2): s; [1, 3): 1")
    with pytest.raises(OverlapError):
        parse_piecewise("[0, 1]: s; [1, 3): 1")
    parse_piecewise("[0, 1]: s; (1, 3): 1")


def test_bounds_may_be_constant_expressions():
    f = parse_piecewise("[0, 11/4): 1; [11/4, inf): 2")
    assert f(2.74) == 1 and f(2.75) == 2


def _nodes():
    leaves = st.one_of(
        st.builds(Var, st.just("s")),
        st.builds(Const, st.integers(0, 50).map(float)),
        st.builds(Const, st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
    )

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(BinOp, st.sampled_from("+-*/"), children, children),
            st.builds(Pow, children, st.integers(-3, 3)),
            st.builds(Sqrt, children),
        )
    return st.recursive(leaves, extend, max_leaves=12)


@given(_nodes())
def test_pretty_round_trip(node):
    assert parse(pretty(node)) == node


@given(_nodes(), st.floats(-10, 10))
def test_evaluation_is_deterministic_and_finite(node, x):
    f = compile_expr(node)
    try:
        a = f(x)
    except DomainError:
        return
    assert math.isfinite(a)
    assert a == f(x)
