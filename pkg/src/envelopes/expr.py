"""Expression language for the closed-form curves defining circle families.

The grammar is deliberately tiny: floating literals, the parameter ``t``,
named constants, the functions ``sin``/``cos``/``sqrt``, unary minus, and
``+ - * / ^``.  ``^`` is right-associative and binds tighter than unary
minus, so ``-t^2`` parses as ``-(t^2)``.  Trees are immutable and safe to
share across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    """Syntax error, carrying the byte offset and the expected token set."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


class UnknownFunctionError(ParseError):
    pass


class EvalError(ExprError):
    pass


class UnboundConstantError(EvalError):
    pass


class DomainError(EvalError):
    """Raised instead of producing NaN/inf (negative sqrt, division by zero)."""


class DifferentiationError(ExprError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    """The parameter of the family (always named ``t``)."""


@dataclass(frozen=True)
class Const:
    """A named constant, bound at evaluation time."""

    name: str


@dataclass(frozen=True)
class Fun:
    name: str  # sin | cos | sqrt
    arg: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str  # + - * / ^
    left: "Expr"
    right: "Expr"


Expr = Num | Var | Const | Fun | Neg | Bin

FUNCTIONS = ("sin", "cos", "sqrt")

# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"got {text or 'end of input'!r}", pos, (repr(op),))
        self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {text!r}", pos, ("operator", "end of input"))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                e = Bin(text, e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                e = Bin(text, e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # right-associative; exponent may carry its own sign
            return Bin("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            pk, pt, _ = self.peek()
            if pk == "op" and pt == "(":
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(f"unknown function {text!r}", pos, FUNCTIONS)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Fun(text, arg)
            if text == "t":
                return Var()
            return Const(text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(
            f"got {text or 'end of input'!r}", pos, ("number", "identifier", "'('", "'-'")
        )


def parse(source: str) -> Expr:
    """Parse *source* into an expression tree.

    Whitespace-insensitive; standard precedence with ``^`` right-associative.
    Raises :class:`ParseError` with the byte offset on malformed input.
    """
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Evaluation


def _pow_value(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0:
        raise DomainError("zero raised to a negative power")
    if base < 0.0 and exponent != math.floor(exponent):
        raise DomainError("negative base with non-integer exponent")
    return base**exponent


def evaluate(e: Expr, t: float, constants: Mapping[str, float] | None = None) -> float:
    """IEEE-double evaluation of *e* at parameter value *t*.

    Domain violations (negative sqrt operand, division by zero) raise
    :class:`DomainError` rather than returning NaN.
    """
    consts = constants or {}
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Const):
        try:
            return consts[e.name]
        except KeyError:
            raise UnboundConstantError(f"unbound constant {e.name!r}") from None
    if isinstance(e, Neg):
        return -evaluate(e.arg, t, consts)
    if isinstance(e, Fun):
        v = evaluate(e.arg, t, consts)
        if e.name == "sin":
            return math.sin(v)
        if e.name == "cos":
            return math.cos(v)
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v}")
        return math.sqrt(v)
    left = evaluate(e.left, t, consts)
    right = evaluate(e.right, t, consts)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        if right == 0.0:
            raise DomainError("division by zero")
        return left / right
    return _pow_value(left, right)


def free_constants(e: Expr) -> set[str]:
    if isinstance(e, Const):
        return {e.name}
    if isinstance(e, (Neg, Fun)):
        return free_constants(e.arg)
    if isinstance(e, Bin):
        return free_constants(e.left) | free_constants(e.right)
    return set()


def is_constant(e: Expr) -> bool:
    """True if *e* does not depend on the parameter ``t``."""
    if isinstance(e, Var):
        return False
    if isinstance(e, (Neg, Fun)):
        return is_constant(e.arg)
    if isinstance(e, Bin):
        return is_constant(e.left) and is_constant(e.right)
    return True


def compile_expr(e: Expr, constants: Mapping[str, float] | None = None) -> Callable[[float], float]:
    """Compile *e* into a plain ``t -> float`` callable.

    Named constants are resolved now; an unbound name raises immediately.
    Domain checks are preserved.
    """
    consts = constants or {}
    if isinstance(e, Num):
        v = e.value
        return lambda t: v
    if isinstance(e, Var):
        return lambda t: t
    if isinstance(e, Const):
        try:
            c = float(consts[e.name])
        except KeyError:
            raise UnboundConstantError(f"unbound constant {e.name!r}") from None
        return lambda t: c
    if isinstance(e, Neg):
        f = compile_expr(e.arg, consts)
        return lambda t: -f(t)
    if isinstance(e, Fun):
        f = compile_expr(e.arg, consts)
        if e.name == "sin":
            return lambda t: math.sin(f(t))
        if e.name == "cos":
            return lambda t: math.cos(f(t))

        def _sqrt(t: float) -> float:
            v = f(t)
            if v < 0.0:
                raise DomainError(f"sqrt of negative value {v}")
            return math.sqrt(v)

        return _sqrt
    lf = compile_expr(e.left, consts)
    rf = compile_expr(e.right, consts)
    if e.op == "+":
        return lambda t: lf(t) + rf(t)
    if e.op == "-":
        return lambda t: lf(t) - rf(t)
    if e.op == "*":
        return lambda t: lf(t) * rf(t)
    if e.op == "/":

        def _div(t: float) -> float:
            d = rf(t)
            if d == 0.0:
                raise DomainError("division by zero")
            return lf(t) / d

        return _div
    return lambda t: _pow_value(lf(t), rf(t))


# ---------------------------------------------------------------------------
# Differentiation with constant folding

def _is_num(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Num) and (value is None or e.value == value)


def _add(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Bin("+", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    if _is_num(a, 0.0):
        return _neg(b)
    return Bin("-", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Bin("*", a, b)


def _div_node(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0):
        return Num(0.0)
    if _is_num(b, 1.0):
        return a
    return Bin("/", a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _pow_node(base: Expr, exponent: Expr) -> Expr:
    if _is_num(exponent, 1.0):
        return base
    if _is_num(exponent, 0.0):
        return Num(1.0)
    return Bin("^", base, exponent)


def differentiate(e: Expr, var: str = "t") -> Expr:
    """Symbolic d/dt with constant folding (0*x -> 0, x+0 -> x, 1*x -> x).

    Power nodes must have constant exponents; the derivative of
    ``sqrt(f)`` is ``f'/(2*sqrt(f))`` and is singular where ``f`` vanishes
    (the evaluator reports a domain error there).
    """
    if var != "t":
        raise DifferentiationError(f"unknown variable {var!r}")
    if isinstance(e, (Num, Const)):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0)
    if isinstance(e, Neg):
        return _neg(differentiate(e.arg))
    if isinstance(e, Fun):
        da = differentiate(e.arg)
        if e.name == "sin":
            return _mul(Fun("cos", e.arg), da)
        if e.name == "cos":
            return _neg(_mul(Fun("sin", e.arg), da))
        return _div_node(da, _mul(Num(2.0), Fun("sqrt", e.arg)))
    if e.op in "+-":
        dl, dr = differentiate(e.left), differentiate(e.right)
        return _add(dl, dr) if e.op == "+" else _sub(dl, dr)
    if e.op == "*":
        return _add(
            _mul(differentiate(e.left), e.right),
            _mul(e.left, differentiate(e.right)),
        )
    if e.op == "/":
        num = _sub(
            _mul(differentiate(e.left), e.right),
            _mul(e.left, differentiate(e.right)),
        )
        return _div_node(num, _pow_node(e.right, Num(2.0)))
    # power rule, constant exponent only
    if not is_constant(e.right):
        raise DifferentiationError("non-constant exponent in pow")
    c = e.right
    return _mul(
        _mul(c, _pow_node(e.left, _sub(c, Num(1.0)))),
        differentiate(e.left),
    )


# ---------------------------------------------------------------------------
# Printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_source(e: Expr) -> str:
    """Render *e* back to parseable source (round-trips through parse)."""
    return _render(e, 0)


def _render(e: Expr, parent_prec: int) -> str:
    if isinstance(e, Num):
        if e.value < 0:
            s = repr(e.value)
            return f"({s})" if parent_prec > 0 else s
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Fun):
        return f"{e.name}({_render(e.arg, 0)})"
    if isinstance(e, Neg):
        s = "-" + _render(e.arg, _PREC["neg"])
        return f"({s})" if parent_prec > _PREC["neg"] else s
    prec = _PREC[e.op]
    # left operand of - and / must re-parenthesize at equal precedence on the right
    left = _render(e.left, prec if e.op != "^" else prec + 1)
    right = _render(e.right, prec + 1 if e.op in "-/" else prec)
    s = f"{left}^{right}" if e.op == "^" else f"{left} {e.op} {right}"
    return f"({s})" if parent_prec > prec else s
