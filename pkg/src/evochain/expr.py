"""Scalar expressions of one variable and piecewise functions built from them.

Grammar (whitespace insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom (('^' | '**') ['-' | '+'] INTEGER)?
    atom    := NUMBER | NAME | 'sqrt' '(' expr ')' | '(' expr ')'

NAME must be the single free variable declared by the caller.  Piecewise
text is one piece per line (or ';'-separated), each ``<interval> : <expr>``
where the interval is written ``[lo, hi)``, ``[lo, hi]``, ``(lo, hi)`` or
``(lo, hi]`` and the bounds are constant expressions or ``inf``/``-inf``.
A line with no interval covers the whole real line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union


class ExprError(Exception):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class DomainError(ExprError, ArithmeticError):
    pass


class GapQueryError(DomainError):
    pass


class OverlapError(ExprError):
    pass


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int


@dataclass(frozen=True)
class Sqrt:
    arg: "Expression"


Expression = Union[Const, Var, Neg, BinOp, Pow, Sqrt]


# --- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, n)))
    return tokens


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, variable: str | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variable = variable

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}", off)

    def parse(self) -> Expression:
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", off)
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            sign = 1
            kind, val, off = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
            kind, val, off = self.take()
            if kind != "num" or not re.fullmatch(r"\d+", val):
                raise ExprSyntaxError("exponent must be an integer literal", off)
            return Pow(base, sign * int(val))
        return base

    def atom(self) -> Expression:
        kind, val, off = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if val == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Sqrt(inner)
            if self.variable is not None and val == self.variable:
                return Var(val)
            raise UnknownIdentifier(val, off)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", off)
        raise ExprSyntaxError(f"unexpected {val!r}", off)


def parse(text: str, variable: str | None = "s") -> Expression:
    """Parse infix text over the single free variable ``variable``."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text, variable).parse()


# --- printing --------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


def _prec(node: Expression) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    if isinstance(node, Pow):
        return _POW_PREC
    return _ATOM_PREC


def _fmt_const(v: float) -> str:
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def pretty(node: Expression) -> str:
    """Render with the minimum parentheses needed to re-parse to the same tree."""
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Sqrt):
        return f"sqrt({pretty(node.arg)})"
    if isinstance(node, Neg):
        inner = pretty(node.arg)
        if _prec(node.arg) < _NEG_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < _ATOM_PREC:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    left = pretty(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = pretty(node.right)
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# --- evaluation ------------------------------------------------------------

def _checked(v: float, what: str) -> float:
    if not math.isfinite(v):
        raise DomainError(f"{what} produced a non-finite value")
    return v


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return _checked(a / b, "division")


def _sqrt(a: float) -> float:
    if a < 0.0:
        raise DomainError(f"sqrt of negative value {a!r}")
    return math.sqrt(a)


def _pow(a: float, k: int) -> float:
    if k < 0 and a == 0.0:
        raise DomainError("zero raised to a negative power")
    try:
        return _checked(a ** k, "power")
    except OverflowError as exc:
        raise DomainError("power overflow") from exc


def compile_expr(node: Expression) -> Callable[[float], float]:
    """Turn a tree into a closure; evaluation order is fixed so results are bit-stable."""
    if isinstance(node, Const):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        f = compile_expr(node.arg)
        return lambda x: -f(x)
    if isinstance(node, Sqrt):
        f = compile_expr(node.arg)
        return lambda x: _sqrt(f(x))
    if isinstance(node, Pow):
        f = compile_expr(node.base)
        k = node.exponent
        return lambda x: _pow(f(x), k)
    lf, rf = compile_expr(node.left), compile_expr(node.right)
    if node.op == "+":
        return lambda x: _checked(lf(x) + rf(x), "addition")
    if node.op == "-":
        return lambda x: _checked(lf(x) - rf(x), "subtraction")
    if node.op == "*":
        return lambda x: _checked(lf(x) * rf(x), "multiplication")
    return lambda x: _div(lf(x), rf(x))


# --- piecewise -------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = False

    def __contains__(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self) -> str:
        return (("[" if self.lo_closed else "(") + f"{_fmt_const(self.lo)}, {_fmt_const(self.hi)}"
                + ("]" if self.hi_closed else ")"))


def _overlap(a: Interval, b: Interval) -> bool:
    if a.hi < b.lo or b.hi < a.lo:
        return False
    if a.hi == b.lo:
        return a.hi_closed and b.lo_closed
    if b.hi == a.lo:
        return b.hi_closed and a.lo_closed
    return True


@dataclass(frozen=True)
class Piece:
    interval: Interval
    expr: Expression
    source: str = ""


class PiecewiseFunction:
    """Ordered, non-overlapping pieces; evaluation outside every piece is an error."""

    def __init__(self, pieces: list[Piece], variable: str = "s"):
        pieces = list(pieces)
        if not pieces:
            raise ExprError("piecewise function needs at least one piece")
        for prev, cur in zip(pieces, pieces[1:]):
            if cur.interval.lo < prev.interval.lo:
                raise OverlapError(f"pieces not sorted: {cur.interval} after {prev.interval}")
        for i, a in enumerate(pieces):
            for b in pieces[i + 1:]:
                if _overlap(a.interval, b.interval):
                    raise OverlapError(f"pieces {a.interval} and {b.interval} overlap")
        self.pieces = tuple(pieces)
        self.variable = variable
        self._compiled = tuple((p.interval, compile_expr(p.expr)) for p in pieces)

    def __call__(self, x: float) -> float:
        for interval, f in self._compiled:
            if x in interval:
                return f(x)
        raise GapQueryError(f"no piece covers {self.variable}={x!r}")

    def __repr__(self) -> str:
        body = "; ".join(f"{p.interval}: {pretty(p.expr)}" for p in self.pieces)
        return f"PiecewiseFunction({body})"


_INTERVAL = re.compile(r"^\s*([\[(])([^,]*),([^\])]*)([\])])\s*:(.*)$", re.S)


def _bound(text: str) -> float:
    text = text.strip()
    if text in ("inf", "+inf", "-inf"):
        return -math.inf if text.startswith("-") else math.inf
    return evaluate(parse(text, variable=None), 0.0)


def parse_piecewise(text: str, variable: str = "s") -> PiecewiseFunction:
    """Parse ``[lo, hi): expr`` pieces separated by newlines or ';'."""
    pieces = []
    for raw in re.split(r"[;\n]", text):
        if not raw.strip():
            continue
        m = _INTERVAL.match(raw)
        if m is None:
            if ":" in raw:
                raise ExprSyntaxError(f"malformed interval in {raw.strip()!r}", 0)
            interval = Interval()
            body = raw
        else:
            lo, hi = _bound(m.group(2)), _bound(m.group(3))
            if lo > hi:
                raise ExprError(f"empty interval in {raw.strip()!r}")
            interval = Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")
            body = m.group(5)
        pieces.append(Piece(interval, parse(body.strip(), variable), body.strip()))
    return PiecewiseFunction(pieces, variable)


def evaluate(f: Union[PiecewiseFunction, Expression, Callable[[float], float]], x: float) -> float:
    """Evaluate an expression tree or piecewise function at ``x``."""
    if isinstance(f, PiecewiseFunction):
        return f(x)
    if isinstance(f, (Const, Var, Neg, BinOp, Pow, Sqrt)):
        return compile_expr(f)(x)
    return f(x)
