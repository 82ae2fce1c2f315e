"""Tiny expression language for forcing terms and measure densities.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

so ``-2^2 == -4`` and ``2^3^2 == 512``.  Evaluation works on floats and on
numpy arrays; leaving the natural domain raises :class:`ExprEvaluationError`
instead of producing ``nan``/``inf``.
"""

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._errors import ExprEvaluationError, ExprSyntaxError, UnknownIdentifierError

__all__ = ["Expr", "Num", "Var", "Const", "Neg", "BinOp", "Call", "parse", "evaluate", "to_source"]

VARIABLE = "t"
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "abs": np.abs,
    "sqrt": np.sqrt,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = VARIABLE


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(src):
    pos = 0
    tokens = []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, value, pos = self.advance()
        if value != text or kind == "end":
            found = "end of input" if kind == "end" else repr(value)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {value!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        if kind == "op" and value == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, value, pos = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value == VARIABLE:
                return Var()
            if value in CONSTANTS:
                return Const(value)
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            raise UnknownIdentifierError(f"unknown identifier {value!r}", pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {found}", pos)


def parse(src):
    """Parse ``src`` into an immutable AST."""
    if not isinstance(src, str):
        raise TypeError(f"expression source must be str, got {type(src).__name__}")
    return _Parser(src).parse()


def _eval(node, t):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, t)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, t))
    left = _eval(node.left, t)
    right = _eval(node.right, t)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if np.any(np.asarray(right) == 0):
            raise FloatingPointError("division by zero")
        return np.true_divide(left, right)
    return np.power(np.asarray(left, dtype=float), right)


def evaluate(node, t):
    """Evaluate ``node`` at ``t`` (float or array) in IEEE double precision."""
    scalar = np.ndim(t) == 0
    arg = float(t) if scalar else np.asarray(t, dtype=float)
    try:
        with np.errstate(all="raise"):
            val = _eval(node, arg)
            val = np.broadcast_to(np.asarray(val, dtype=float), np.shape(arg))
    except (FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        raise ExprEvaluationError(f"cannot evaluate {to_source(node)} at t={t!r}: {exc}") from None
    if not np.all(np.isfinite(val)):
        raise ExprEvaluationError(f"non-finite value of {to_source(node)} at t={t!r}")
    return float(val) if scalar else np.array(val)


def to_source(node):
    """Fully parenthesised text that parses back to an equal AST."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return VARIABLE
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    return f"({to_source(node.left)} {node.op} {to_source(node.right)})"


def as_function(e):
    """Turn text, an AST or a callable into a vectorised ``t -> value`` callable."""
    if isinstance(e, str):
        e = parse(e)
    if isinstance(e, (Num, Var, Const, Neg, BinOp, Call)):
        node = e
        return lambda t: evaluate(node, t)
    if callable(e):
        return e
    raise TypeError(f"cannot interpret {e!r} as a function of t")
