"""Expression trees for analytic functions of one complex variable.

The grammar (informal EBNF) is

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' integer)? | '-' factor
    atom   := 'z' | number | 'i' | '(' expr ')' | func '(' expr ')' | builtin
    func   := exp | log | sin | cos | tan | sqrt
    builtin:= koebe | identity | mobius(n, n, n, n) | tan_scaled(n)

Numbers are decimal literals; a trailing ``i`` makes the literal pure
imaginary, and an additive pair of literals such as ``0.3+0.1i`` folds to a
single complex constant.  General powers are deliberately absent: write
exp(a*log(...)) so the branch choice is explicit.

Builtins expand at parse time into plain trees, so downstream code only
ever sees the node types below.  ``to_source`` prints a tree that reparses
to a structurally identical tree (composition nodes print inlined and
reparse to the inlined tree).
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import (
    DomainError,
    ExprSyntaxError,
    MobiusDegenerateError,
    UnknownIdentifierError,
)


class Expr:
    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Exp(Expr):
    child: Expr


@dataclass(frozen=True)
class Log(Expr):
    child: Expr


@dataclass(frozen=True)
class Sin(Expr):
    child: Expr


@dataclass(frozen=True)
class Cos(Expr):
    child: Expr


@dataclass(frozen=True)
class Tan(Expr):
    child: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    child: Expr


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr


_FUNCS = {"exp": Exp, "log": Log, "sin": Sin, "cos": Cos, "tan": Tan, "sqrt": Sqrt}


def koebe() -> Expr:
    """z / (1 - z)^2."""
    return Div(Var(), IntPow(Sub(Const(1 + 0j), Var()), 2))


def mobius(a, b, c, d) -> Expr:
    """(a z + b) / (c z + d), requiring ad - bc != 0."""
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if a * d - b * c == 0:
        raise MobiusDegenerateError("mobius coefficients with ad - bc = 0")
    return Div(
        Add(Mul(Const(a), Var()), Const(b)),
        Add(Mul(Const(c), Var()), Const(d)),
    )


def tan_scaled(c) -> Expr:
    """tan(sqrt(c/2) z), whose Schwarzian is the constant c."""
    c = complex(c)
    if c.imag != 0 or c.real <= 0:
        raise DomainError("tan_scaled needs a positive real constant")
    return Tan(Mul(Const(complex(np.sqrt(c.real / 2.0))), Var()))


def identity() -> Expr:
    return Var()


# ---------------------------------------------------------------------------
# Tokenizer / parser


_TOKEN_RE = re.compile(
    r"""(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/^(),])
      | (?P<ws>\s+)""",
    re.X,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "num":
            lit = m.group()
            if lit.endswith("i"):
                tokens.append(("num", complex(0.0, float(lit[:-1])), pos))
            else:
                tokens.append(("num", complex(float(lit)), pos))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group(), pos))
        elif m.lastgroup == "op":
            tokens.append(("op", m.group(), pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _NotConstant(Exception):
    pass


def const_value(expr: Expr) -> complex:
    """Fold a variable-free tree to its complex value."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        raise _NotConstant()
    if isinstance(expr, Add):
        return const_value(expr.left) + const_value(expr.right)
    if isinstance(expr, Sub):
        return const_value(expr.left) - const_value(expr.right)
    if isinstance(expr, Mul):
        return const_value(expr.left) * const_value(expr.right)
    if isinstance(expr, Div):
        return const_value(expr.left) / const_value(expr.right)
    if isinstance(expr, Neg):
        return -const_value(expr.child)
    if isinstance(expr, IntPow):
        return const_value(expr.base) ** expr.exponent
    if isinstance(expr, Exp):
        return cmath.exp(const_value(expr.child))
    if isinstance(expr, Log):
        return cmath.log(const_value(expr.child))
    if isinstance(expr, Sin):
        return cmath.sin(const_value(expr.child))
    if isinstance(expr, Cos):
        return cmath.cos(const_value(expr.child))
    if isinstance(expr, Tan):
        return cmath.tan(const_value(expr.child))
    if isinstance(expr, Sqrt):
        return cmath.sqrt(const_value(expr.child))
    if isinstance(expr, Compose):
        return const_value(substitute(expr.outer, expr.inner))
    raise TypeError(f"unknown node {type(expr).__name__}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Expr:
        tree = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError("trailing input", pos)
        return tree

    def expr(self) -> Expr:
        left = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                right = self.term()
                if isinstance(left, Const) and isinstance(right, Const):
                    v = left.value + right.value if value == "+" else left.value - right.value
                    left = Const(v)
                else:
                    left = Add(left, right) if value == "+" else Sub(left, right)
            else:
                return left

    def term(self) -> Expr:
        left = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                right = self.factor()
                left = Mul(left, right) if value == "*" else Div(left, right)
            else:
                return left

    def factor(self) -> Expr:
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            child = self.factor()
            if isinstance(child, Const):
                return Const(-child.value)
            return Neg(child)
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return IntPow(base, self.integer())
        return base

    def integer(self) -> int:
        sign = 1
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            sign = -1
            kind, value, pos = self.peek()
        if kind != "num" or value.imag != 0 or value.real != int(value.real):
            raise ExprSyntaxError("expected an integer exponent", pos)
        self.advance()
        return sign * int(value.real)

    def atom(self) -> Expr:
        kind, value, pos = self.advance()
        if kind == "num":
            return Const(value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "name":
            if value == "z":
                return Var()
            if value == "i":
                return Const(1j)
            if value in _FUNCS:
                self.expect_op("(")
                child = self.expr()
                self.expect_op(")")
                return _FUNCS[value](child)
            if value == "koebe":
                return koebe()
            if value == "identity":
                return identity()
            if value == "mobius":
                args = self.const_args(4, pos)
                return mobius(*args)
            if value == "tan_scaled":
                args = self.const_args(1, pos)
                return tan_scaled(args[0])
            raise UnknownIdentifierError(f"unknown identifier {value!r}", pos)
        raise ExprSyntaxError("expected an expression", pos)

    def const_args(self, n: int, pos: int):
        self.expect_op("(")
        values = []
        for k in range(n):
            arg = self.expr()
            try:
                values.append(const_value(arg))
            except _NotConstant:
                raise ExprSyntaxError("builtin arguments must be constant", pos) from None
            if k < n - 1:
                self.expect_op(",")
        self.expect_op(")")
        return values


def parse(text: str) -> Expr:
    """Parse expression text; raises ExprSyntaxError with a 0-based offset."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_const(v: complex):
    """Return (text, level); negative leading parts print through unary minus."""
    if v.real < 0 or (v.real == 0 and v.imag < 0):
        body, level = _fmt_const(-v)
        if level >= _LEVEL_ATOM:
            return "-" + body, _LEVEL_NEG
        return "-(" + body + ")", _LEVEL_NEG
    if v.imag == 0:
        return _fmt_real(v.real), _LEVEL_ATOM
    if v.real == 0:
        return _fmt_real(v.imag) + "i", _LEVEL_ATOM
    sign = "+" if v.imag > 0 else "-"
    return f"{_fmt_real(v.real)}{sign}{_fmt_real(abs(v.imag))}i", _LEVEL_ADD


def _render(expr: Expr):
    if isinstance(expr, Var):
        return "z", _LEVEL_ATOM
    if isinstance(expr, Const):
        return _fmt_const(expr.value)
    if isinstance(expr, (Add, Sub)):
        op = "+" if isinstance(expr, Add) else "-"
        return (
            _wrap(expr.left, _LEVEL_ADD) + op + _wrap(expr.right, _LEVEL_ADD + 1),
            _LEVEL_ADD,
        )
    if isinstance(expr, (Mul, Div)):
        op = "*" if isinstance(expr, Mul) else "/"
        return (
            _wrap(expr.left, _LEVEL_MUL) + op + _wrap(expr.right, _LEVEL_MUL + 1),
            _LEVEL_MUL,
        )
    if isinstance(expr, Neg):
        return "-" + _wrap(expr.child, _LEVEL_NEG), _LEVEL_NEG
    if isinstance(expr, IntPow):
        return _wrap(expr.base, _LEVEL_ATOM) + f"^{expr.exponent}", _LEVEL_POW
    if isinstance(expr, Compose):
        return _render(substitute(expr.outer, expr.inner))
    for cls, name in ((Exp, "exp"), (Log, "log"), (Sin, "sin"), (Cos, "cos"), (Tan, "tan"), (Sqrt, "sqrt")):
        if isinstance(expr, cls):
            return f"{name}({to_source(expr.child)})", _LEVEL_ATOM
    raise TypeError(f"unknown node {type(expr).__name__}")


def _wrap(expr: Expr, min_level: int) -> str:
    text, level = _render(expr)
    if level < min_level:
        return "(" + text + ")"
    return text


def to_source(expr: Expr) -> str:
    return _render(expr)[0]


def substitute(expr: Expr, replacement: Expr) -> Expr:
    """Replace every Var with ``replacement``."""
    if isinstance(expr, Var):
        return replacement
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return type(expr)(substitute(expr.left, replacement), substitute(expr.right, replacement))
    if isinstance(expr, Neg):
        return Neg(substitute(expr.child, replacement))
    if isinstance(expr, IntPow):
        return IntPow(substitute(expr.base, replacement), expr.exponent)
    if isinstance(expr, Compose):
        return substitute(substitute(expr.outer, expr.inner), replacement)
    return type(expr)(substitute(expr.child, replacement))


# ---------------------------------------------------------------------------
# Evaluation

MAX_ORDER = 6


def _eval(expr: Expr, z, order: int, ctx: jets.JetContext) -> jets.Jet:
    if isinstance(expr, Var):
        return jets.variable_jet(z, order)
    if isinstance(expr, Const):
        return jets.const_jet(expr.value, order, ctx.shape)
    if isinstance(expr, Add):
        return _eval(expr.left, z, order, ctx) + _eval(expr.right, z, order, ctx)
    if isinstance(expr, Sub):
        return _eval(expr.left, z, order, ctx) - _eval(expr.right, z, order, ctx)
    if isinstance(expr, Mul):
        return _eval(expr.left, z, order, ctx) * _eval(expr.right, z, order, ctx)
    if isinstance(expr, Div):
        return jets.jet_div(_eval(expr.left, z, order, ctx), _eval(expr.right, z, order, ctx), ctx)
    if isinstance(expr, Neg):
        return -_eval(expr.child, z, order, ctx)
    if isinstance(expr, IntPow):
        return jets.jet_pow_int(_eval(expr.base, z, order, ctx), expr.exponent, ctx)
    if isinstance(expr, Exp):
        return jets.jet_exp(_eval(expr.child, z, order, ctx))
    if isinstance(expr, Log):
        return jets.jet_log(_eval(expr.child, z, order, ctx), ctx)
    if isinstance(expr, Sqrt):
        return jets.jet_sqrt(_eval(expr.child, z, order, ctx), ctx)
    if isinstance(expr, Sin):
        return jets.jet_sin_cos(_eval(expr.child, z, order, ctx))[0]
    if isinstance(expr, Cos):
        return jets.jet_sin_cos(_eval(expr.child, z, order, ctx))[1]
    if isinstance(expr, Tan):
        return jets.jet_tan(_eval(expr.child, z, order, ctx))
    if isinstance(expr, Compose):
        inner = _eval(expr.inner, z, order, ctx)
        outer = _eval(expr.outer, inner.value, order, ctx)
        return jets.jet_compose(outer, inner)
    raise TypeError(f"unknown node {type(expr).__name__}")


def eval_jet(expr: Expr, z, order: int = 3, *, masked: bool = False) -> jets.Jet:
    """Evaluate the Taylor jet of ``expr`` at ``z`` (scalar or ndarray).

    In strict mode (default) domain failures raise.  With ``masked=True``
    failures are recorded per point and the returned jet carries a boolean
    ``valid`` array instead.
    """
    if not 0 <= order <= MAX_ORDER:
        raise DomainError(f"jet order must lie in [0, {MAX_ORDER}]")
    zz = np.asarray(z, dtype=complex)
    ctx = jets.JetContext(shape=zz.shape, strict=not masked)
    jet = _eval(expr, zz, order, ctx)
    if masked:
        jet.valid = ~ctx.invalid & np.all(np.isfinite(jet.coeffs), axis=0)
    return jet


def eval_value(expr: Expr, z):
    """Plain function value, as a python complex for scalar input."""
    value = eval_jet(expr, z, order=0).value
    if np.ndim(value) == 0:
        return complex(value)
    return value
