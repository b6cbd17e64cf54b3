"""Expression front-end: parse, print, differentiate and evaluate test functions.

Grammar (lowest to highest precedence)::

    expr    := expr ('+' | '-') expr          left associative
             | expr ('*' | '/') expr          left associative
             | '-' expr                       unary minus
             | expr '^' const_expr            right associative, exponent free of x
             | number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
    func    := 'exp' | 'ln' | 'abs'

Numbers are decimal literals with an optional exponent (``2``, ``.5``,
``1.5e-3``). There is no implicit multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

__all__ = [
    "Const",
    "Var",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Call",
    "Node",
    "FunctionSpec",
    "ParseError",
    "UnknownIdentifierError",
    "EvaluationError",
    "UnsupportedOperationError",
    "parse",
    "to_text",
    "differentiate",
    "evaluate",
    "abs_power",
]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        self.message = message
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"at byte {offset}: {message}{detail}")


class UnknownIdentifierError(ParseError):
    pass


class UnsupportedOperationError(ValueError):
    pass


class EvaluationError(ArithmeticError):
    def __init__(self, x: float, node: "Node", message: str):
        self.x = x
        self.node = node
        super().__init__(f"{message} at x={x!r} in '{to_text(node)}'")


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite constant {self.value!r}")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.exponent):
            raise ValueError(f"non-finite exponent {self.exponent!r}")


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call]

FUNCTIONS = ("exp", "ln", "abs")
CONSTANTS = {"e": math.e, "pi": math.pi}
X = Var()


# --- smart constructors (identity folding only) ----------------------------


def _is_const(node: Node, value: float | None = None) -> bool:
    return isinstance(node, Const) and (value is None or node.value == value)


def neg(u: Node) -> Node:
    if isinstance(u, Const):
        return Const(-u.value)
    if isinstance(u, Neg):
        return u.operand
    return Neg(u)


def add(u: Node, v: Node) -> Node:
    if _is_const(u, 0.0):
        return v
    if _is_const(v, 0.0):
        return u
    return Add(u, v)


def sub(u: Node, v: Node) -> Node:
    if _is_const(v, 0.0):
        return u
    if _is_const(u, 0.0):
        return neg(v)
    return Sub(u, v)


def mul(u: Node, v: Node) -> Node:
    if _is_const(u, 0.0) or _is_const(v, 0.0):
        return Const(0.0)
    if _is_const(u, 1.0):
        return v
    if _is_const(v, 1.0):
        return u
    return Mul(u, v)


def div(u: Node, v: Node) -> Node:
    if _is_const(v, 1.0):
        return u
    if _is_const(u, 0.0):
        return Const(0.0)
    return Div(u, v)


def power(u: Node, c: float) -> Node:
    if c == 1.0:
        return u
    if c == 0.0:
        return Const(1.0)
    return Pow(u, c)


# --- lexer -----------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # num, ident, op, lparen, rparen, end
    text: str
    offset: int


_OPS = "+-*/^"


def _scan_number(text: str, i: int) -> int:
    n = len(text)
    j = i
    while j < n and text[j].isdigit():
        j += 1
    if j < n and text[j] == ".":
        j += 1
        while j < n and text[j].isdigit():
            j += 1
    if j < n and text[j] in "eE":
        k = j + 1
        if k < n and text[k] in "+-":
            k += 1
        if k < n and text[k].isdigit():
            while k < n and text[k].isdigit():
                k += 1
            j = k
    return j


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    byte = 0  # byte offset of text[i]
    while i < n:
        ch = text[i]
        start_byte = byte
        if ch.isspace():
            j = i + 1
        elif ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = _scan_number(text, i)
            tokens.append(_Token("num", text[i:j], start_byte))
        elif ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], start_byte))
        elif ch in _OPS:
            j = i + 1
            tokens.append(_Token("op", ch, start_byte))
        elif ch == "(":
            j = i + 1
            tokens.append(_Token("lparen", ch, start_byte))
        elif ch == ")":
            j = i + 1
            tokens.append(_Token("rparen", ch, start_byte))
        else:
            raise ParseError(
                f"unexpected character {ch!r}",
                start_byte,
                frozenset({"number", "identifier", "operator", "'('", "')'"}),
            )
        byte += len(text[i:j].encode("utf-8"))
        i = j
    tokens.append(_Token("end", "", byte))
    return tokens


# --- parser (Pratt) --------------------------------------------------------

_BINARY_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_MINUS_BP = 30
_OPERAND_START = frozenset({"number", "identifier", "'('", "'-'"})
_AFTER_OPERAND = frozenset({"'+'", "'-'", "'*'", "'/'", "'^'"})


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def parse(self) -> Node:
        node = self.expression(0)
        if self.tok.kind != "end":
            raise ParseError(
                f"unexpected {self.tok.text!r}",
                self.tok.offset,
                _AFTER_OPERAND | {"end of input"},
            )
        return node

    def expression(self, min_bp: int) -> Node:
        left = self.operand()
        while True:
            t = self.tok
            if t.kind != "op":
                return left
            bp = _BINARY_BP[t.text]
            if bp <= min_bp:
                return left
            self.advance()
            if t.text == "^":
                exp_tok = self.tok
                exponent = self.expression(bp - 1)
                left = Pow(left, _fold_constant(exponent, exp_tok.offset))
                continue
            right = self.expression(bp)
            left = {"+": Add, "-": Sub, "*": Mul, "/": Div}[t.text](left, right)

    def operand(self) -> Node:
        t = self.advance()
        if t.kind == "num":
            return Const(float(t.text))
        if t.kind == "op" and t.text == "-":
            inner = self.expression(_UNARY_MINUS_BP)
            return Const(-inner.value) if isinstance(inner, Const) else Neg(inner)
        if t.kind == "lparen":
            inner = self.expression(0)
            self.expect_rparen()
            return inner
        if t.kind == "ident":
            if t.text == "x":
                return X
            if t.text in CONSTANTS:
                return Const(CONSTANTS[t.text])
            if t.text in FUNCTIONS:
                if self.tok.kind != "lparen":
                    raise ParseError(
                        f"function {t.text!r} requires an argument list",
                        self.tok.offset,
                        frozenset({"'('"}),
                    )
                self.advance()
                arg = self.expression(0)
                self.expect_rparen()
                return Call(t.text, arg)
            raise UnknownIdentifierError(
                f"unknown identifier {t.text!r}",
                t.offset,
                frozenset({"x", "e", "pi", *FUNCTIONS}),
            )
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset, _OPERAND_START)

    def expect_rparen(self) -> None:
        if self.tok.kind != "rparen":
            what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ParseError(f"unexpected {what}", self.tok.offset, _AFTER_OPERAND | {"')'"})
        self.advance()


def _contains_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, (Add, Sub, Mul, Div)):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, Pow):
        return _contains_var(node.base)
    if isinstance(node, Neg):
        return _contains_var(node.operand)
    return _contains_var(node.arg)


def _fold_constant(node: Node, offset: int) -> float:
    if _contains_var(node):
        raise ParseError("exponent must be a constant expression", offset, frozenset({"number"}))
    try:
        value = float(np.broadcast_to(_compile(node)(np.zeros(1)), (1,))[0])
    except EvaluationError as exc:
        raise ParseError(f"exponent is undefined: {exc}", offset) from None
    return value


# --- printing --------------------------------------------------------------


def _fmt(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec(node: Node) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5  # atoms, including negative constants which print parenthesised


_SYMBOL = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}


def to_text(node: Node) -> str:
    """Render ``node`` so that ``parse(to_text(node))`` rebuilds it exactly."""
    if isinstance(node, Const):
        s = _fmt(node.value)
        return f"({s})" if math.copysign(1.0, node.value) < 0 else s
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < 3 else inner)
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) <= 4:
            base = f"({base})"
        e = _fmt(node.exponent)
        if node.exponent < 0 or math.copysign(1.0, node.exponent) < 0:
            e = f"({e})"
        return f"{base}^{e}"
    p = _prec(node)
    left, right = to_text(node.left), to_text(node.right)
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return left + _SYMBOL[type(node)] + right


# --- evaluation ------------------------------------------------------------

Kernel = Callable[[np.ndarray], np.ndarray]


def _first_bad(x: np.ndarray, mask: np.ndarray) -> float:
    shape = np.broadcast_shapes(np.shape(x), np.shape(mask))
    return float(np.broadcast_to(x, shape)[np.broadcast_to(mask, shape)].flat[0])


def _compile(node: Node) -> Kernel:
    """Turn ``node`` into a vectorised kernel that raises EvaluationError on domain faults."""
    if isinstance(node, Const):
        v = np.float64(node.value)
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        f = _compile(node.operand)
        return lambda x: -f(x)
    if isinstance(node, Add):
        f, g = _compile(node.left), _compile(node.right)
        return lambda x: f(x) + g(x)
    if isinstance(node, Sub):
        f, g = _compile(node.left), _compile(node.right)
        return lambda x: f(x) - g(x)
    if isinstance(node, Mul):
        f, g = _compile(node.left), _compile(node.right)
        return lambda x: f(x) * g(x)
    if isinstance(node, Div):
        f, g = _compile(node.left), _compile(node.right)

        def _div(x: np.ndarray) -> np.ndarray:
            den = g(x)
            zero = den == 0.0
            if zero.any():
                raise EvaluationError(_first_bad(x, zero), node, "division by zero")
            return f(x) / den

        return _div
    if isinstance(node, Pow):
        f = _compile(node.base)
        c = node.exponent
        integral = c.is_integer()
        if integral and c >= 0:
            if c == 2.0:
                def _sq(x: np.ndarray) -> np.ndarray:
                    u = f(x)
                    return u * u

                return _sq
            return lambda x: np.power(f(x), c)

        def _pow(x: np.ndarray) -> np.ndarray:
            u = f(x)
            if not integral:
                bad = u < 0.0
                if bad.any():
                    raise EvaluationError(
                        _first_bad(x, bad), node, "negative base with non-integer exponent"
                    )
            if c < 0:
                bad = u == 0.0
                if bad.any():
                    raise EvaluationError(_first_bad(x, bad), node, "zero raised to a negative power")
            return np.power(u, c)

        return _pow
    if isinstance(node, Call):
        f = _compile(node.arg)
        if node.func == "exp":
            return lambda x: np.exp(f(x))
        if node.func == "abs":
            return lambda x: np.abs(f(x))
        if node.func == "ln":
            def _ln(x: np.ndarray) -> np.ndarray:
                u = f(x)
                bad = u <= 0.0
                if bad.any():
                    raise EvaluationError(_first_bad(x, bad), node, "logarithm of a non-positive value")
                return np.log(u)

            return _ln
        raise UnsupportedOperationError(f"unknown function {node.func!r}")
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class FunctionSpec:
    ast: Node
    source_text: str

    @cached_property
    def _kernel(self) -> Kernel:
        return _compile(self.ast)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self) -> str:
        return self.source_text

    def __getstate__(self):
        return {"ast": self.ast, "source_text": self.source_text}

    def __setstate__(self, state) -> None:
        object.__setattr__(self, "ast", state["ast"])
        object.__setattr__(self, "source_text", state["source_text"])


def parse(text: str) -> FunctionSpec:
    if not text or not text.strip():
        raise ParseError("empty expression", 0, _OPERAND_START)
    return FunctionSpec(_Parser(text).parse(), text)


def evaluate(f: FunctionSpec, x):
    """Evaluate ``f`` at a scalar (returns float) or array (returns ndarray).

    Raises EvaluationError for domain violations and non-finite results.
    """
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    # domain faults are raised by the kernels; overflow shows up as non-finite
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        out = np.asarray(f._kernel(xa), dtype=float)
    out = np.broadcast_to(out, xa.shape)
    finite = np.isfinite(out)
    if not finite.all():
        raise EvaluationError(_first_bad(xa, ~finite), f.ast, "non-finite result")
    return float(out) if scalar else np.array(out)


# --- differentiation -------------------------------------------------------


def _diff(node: Node) -> Node:
    if isinstance(node, Const):
        return Const(0.0)
    if isinstance(node, Var):
        return Const(1.0)
    if isinstance(node, Neg):
        return neg(_diff(node.operand))
    if isinstance(node, Add):
        return add(_diff(node.left), _diff(node.right))
    if isinstance(node, Sub):
        return sub(_diff(node.left), _diff(node.right))
    if isinstance(node, Mul):
        u, v = node.left, node.right
        return add(mul(_diff(u), v), mul(u, _diff(v)))
    if isinstance(node, Div):
        u, v = node.left, node.right
        return div(sub(mul(_diff(u), v), mul(u, _diff(v))), power(v, 2.0))
    if isinstance(node, Pow):
        c = node.exponent
        return mul(mul(Const(c), power(node.base, c - 1.0)), _diff(node.base))
    if isinstance(node, Call):
        du = _diff(node.arg)
        if node.func == "exp":
            return mul(du, node)
        if node.func == "ln":
            return div(du, node.arg)
        raise UnsupportedOperationError("abs is not differentiable; |f'| may be evaluated but not differentiated")
    raise TypeError(f"not an expression node: {node!r}")


def differentiate(f: FunctionSpec) -> FunctionSpec:
    ast = _diff(f.ast)
    return FunctionSpec(ast, to_text(ast))


def abs_power(f: FunctionSpec, q: float = 1.0) -> FunctionSpec:
    """|f|^q as a new FunctionSpec."""
    ast = power(Call("abs", f.ast), float(q))
    return FunctionSpec(ast, to_text(ast))
