"""Scalar expression language for configuration-defined fields.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and is right associative, so
``-2^2 == -4`` and ``2^3^2 == 512``.  Variables are ``t``, ``x1``, ``x2``,
``x3``, the constant ``pi`` and any parameter names declared at parse time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Expr",
    "ParseError",
    "EvaluationError",
    "FUNCTIONS",
    "VARIABLES",
    "parse",
    "evaluate",
    "compile_expr",
    "pretty",
]

VARIABLES = ("t", "x1", "x2", "x3")
CONSTANTS = {"pi": math.pi}
MAX_DEPTH = 100


def _log(v: float) -> float:
    if v <= 0.0:
        raise ValueError("log of non-positive value")
    return math.log(v)


def _sqrt(v: float) -> float:
    if v < 0.0:
        raise ValueError("sqrt of negative value")
    return math.sqrt(v)


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": _log,
    "sqrt": _sqrt,
    "abs": abs,
}


@dataclass(frozen=True)
class Const:
    value: float
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a FUNCTIONS key
    arg: "Expr"
    pos: int = 0


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"
    pos: int = 0


Expr = Union[Const, Var, Unary, Binary]


class ParseError(ValueError):
    """Malformed expression source.

    ``position`` is a 0-based character offset into the source (equal to
    ``len(src)`` when input ended early); ``expected`` lists what the parser
    would have accepted there.
    """

    def __init__(self, position: int, message: str, expected: Iterable[str] = ()):
        self.position = position
        self.message = message
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"offset {position}: {message}{detail}")


class EvaluationError(ArithmeticError):
    """Domain violation, overflow or unbound name during evaluation."""

    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"offset {position}: {message}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_EXPR_START = ("number", "identifier", "(", "-")


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | name | op | end
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(i, f"unexpected character {src[i]!r}", _EXPR_START)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), i))
        i = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, names: frozenset[str]):
        self.src = src
        self.names = names
        self.toks = _tokenize(src)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(self.tok.pos, "expression nested too deeply")

    def parse(self) -> Expr:
        if not self.src.strip():
            raise ParseError(0, "empty expression", _EXPR_START)
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(
                self.tok.pos, f"unexpected {self.tok.text!r}", ("+", "-", "*", "/", "^", "end of input")
            )
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok
            self.i += 1
            node = Binary(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.tok
            self.i += 1
            node = Binary(op.text, node, self.unary(), op.pos)
        return node

    def unary(self) -> Expr:
        self._enter()
        try:
            if self.tok.kind == "op" and self.tok.text == "-":
                pos = self.tok.pos
                self.i += 1
                return Unary("neg", self.unary(), pos)
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            op = self.tok
            self.i += 1
            return Binary("^", base, self.unary(), op.pos)
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError(tok.pos, f"numeric literal {tok.text!r} overflows")
            return Const(value, tok.pos)
        if tok.kind == "name":
            self.i += 1
            if tok.text in FUNCTIONS:
                self._expect("(")
                self._enter()
                try:
                    arg = self.expr()
                finally:
                    self.depth -= 1
                self._expect(")")
                return Unary(tok.text, arg, tok.pos)
            if tok.text in self.names:
                return Var(tok.text, tok.pos)
            raise ParseError(tok.pos, f"unknown identifier {tok.text!r}", sorted(self.names))
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            self._enter()
            try:
                node = self.expr()
            finally:
                self.depth -= 1
            self._expect(")")
            return node
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(tok.pos, f"expected expression, found {what}", _EXPR_START)

    def _expect(self, text: str):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return
        what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
        raise ParseError(self.tok.pos, f"expected {text!r}, found {what}", (text,))


def parse(src: str, params: Iterable[str] = ()) -> Expr:
    """Parse ``src`` into an expression tree.

    ``params`` declares the extra identifiers that may appear; anything else
    besides the coordinate variables, ``pi`` and function names is rejected
    with a positioned :class:`ParseError`.
    """
    if not isinstance(src, str):
        raise TypeError("expression source must be a string")
    params = frozenset(params)
    clash = params & (set(FUNCTIONS) | set(VARIABLES))
    if clash:
        raise ValueError(f"parameter names shadow built-ins: {sorted(clash)}")
    return _Parser(src, frozenset(VARIABLES) | frozenset(CONSTANTS) | params).parse()


def _pow(a: float, b: float, pos: int) -> float:
    if a == 0.0 and b < 0.0:
        raise EvaluationError(pos, "zero raised to a negative power")
    if a < 0.0 and not float(b).is_integer():
        raise EvaluationError(pos, "negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvaluationError(pos, "overflow in power") from None


def _checked(value: float, pos: int, what: str) -> float:
    if not math.isfinite(value):
        raise EvaluationError(pos, f"non-finite result in {what}")
    return value


def evaluate(e: Expr, t: float, x: Sequence[float], params: Mapping[str, float] | None = None) -> float:
    """Evaluate ``e`` at time ``t`` and point ``x``.

    Raises :class:`EvaluationError` on unbound parameters and on any domain
    violation, so NaN never leaks out.
    """
    env = {"t": float(t), "x1": float(x[0]), "x2": float(x[1]), "x3": float(x[2])}
    env.update(CONSTANTS)
    if params:
        env.update({k: float(v) for k, v in params.items()})
    return _eval(e, env)


def _eval(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvaluationError(e.pos, f"unbound parameter {e.name!r}") from None
    if isinstance(e, Unary):
        a = _eval(e.arg, env)
        if e.op == "neg":
            return -a
        try:
            return _checked(FUNCTIONS[e.op](a), e.pos, e.op)
        except (ValueError, OverflowError) as exc:
            raise EvaluationError(e.pos, f"{e.op}: {exc}") from None
    a = _eval(e.left, env)
    b = _eval(e.right, env)
    op = e.op
    if op == "+":
        return _checked(a + b, e.pos, "+")
    if op == "-":
        return _checked(a - b, e.pos, "-")
    if op == "*":
        return _checked(a * b, e.pos, "*")
    if op == "/":
        if b == 0.0:
            raise EvaluationError(e.pos, "division by zero")
        return _checked(a / b, e.pos, "/")
    return _checked(_pow(a, b, e.pos), e.pos, "^")


def compile_expr(e: Expr, params: Mapping[str, float] | None = None) -> Callable[[float, Sequence[float]], float]:
    """Bind parameters and return a fast ``f(t, x)`` closure with the same
    error semantics as :func:`evaluate`."""
    bound = dict(CONSTANTS)
    if params:
        bound.update({k: float(v) for k, v in params.items()})
    fn = _compile(e, bound)
    return fn


def _compile(e: Expr, bound: Mapping[str, float]):
    if isinstance(e, Const):
        v = e.value
        return lambda t, x: v
    if isinstance(e, Var):
        if e.name == "t":
            return lambda t, x: t
        if e.name in ("x1", "x2", "x3"):
            k = int(e.name[1]) - 1
            return lambda t, x: x[k]
        if e.name not in bound:
            raise EvaluationError(e.pos, f"unbound parameter {e.name!r}")
        v = bound[e.name]
        return lambda t, x: v
    if isinstance(e, Unary):
        f = _compile(e.arg, bound)
        if e.op == "neg":
            return lambda t, x: -f(t, x)
        fn = FUNCTIONS[e.op]
        pos, name = e.pos, e.op

        def call(t, x):
            try:
                return _checked(fn(f(t, x)), pos, name)
            except (ValueError, OverflowError) as exc:
                raise EvaluationError(pos, f"{name}: {exc}") from None

        return call
    lf = _compile(e.left, bound)
    rf = _compile(e.right, bound)
    pos = e.pos
    if e.op == "+":
        return lambda t, x: _checked(lf(t, x) + rf(t, x), pos, "+")
    if e.op == "-":
        return lambda t, x: _checked(lf(t, x) - rf(t, x), pos, "-")
    if e.op == "*":
        return lambda t, x: _checked(lf(t, x) * rf(t, x), pos, "*")
    if e.op == "/":

        def div(t, x):
            b = rf(t, x)
            if b == 0.0:
                raise EvaluationError(pos, "division by zero")
            return _checked(lf(t, x) / b, pos, "/")

        return div
    return lambda t, x: _checked(_pow(lf(t, x), rf(t, x), pos), pos, "^")


def pretty(e: Expr) -> str:
    """Render ``e`` as fully parenthesised source that reparses to the same tree."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{pretty(e.arg)})"
        return f"{e.op}({pretty(e.arg)})"
    return f"({pretty(e.left)} {e.op} {pretty(e.right)})"


def same_structure(a: Expr, b: Expr) -> bool:
    """Structural tree equality ignoring source positions."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Const):
        return a.value == b.value
    if isinstance(a, Var):
        return a.name == b.name
    if isinstance(a, Unary):
        return a.op == b.op and same_structure(a.arg, b.arg)
    return a.op == b.op and same_structure(a.left, b.left) and same_structure(a.right, b.right)
