"""Scalar expression trees on a 3n-dimensional chart with exact differentiation.

Coordinates are partitioned into three blocks x, y, z of equal size n
(position / velocity / acceleration).  Expressions are immutable DAGs:
construction goes through the smart constructors (``add``, ``mul``, ...)
which fold constants and drop neutral elements, evaluation and
differentiation memoise per node, so nested derivatives of shared
subexpressions stay cheap.
"""

from __future__ import annotations

import json
import sys
from typing import Iterable

from .errors import DomainError, SchemaError

BLOCKS = ("x", "y", "z")

# Deep expression DAGs (symbolic linear solves) exceed the default limit.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class Expr:
    """Base node.  Subclasses are immutable; arithmetic builds new nodes."""

    __slots__ = ("_dcache",)

    def diff(self, block: str, i: int) -> "Expr":
        key = (block, i)
        cache = getattr(self, "_dcache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_dcache", cache)
        if key not in cache:
            cache[key] = self._diff(block, i)
        return cache[key]

    def _diff(self, block, i):
        raise NotImplementedError

    # -- arithmetic sugar ------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    __radd__ = __add__

    def __neg__(self):
        return mul(Const(-1.0), self)

    def __sub__(self, other):
        return add(self, -as_expr(other))

    def __rsub__(self, other):
        return add(as_expr(other), -self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, recip(as_expr(other)))

    def __rtruediv__(self, other):
        return mul(as_expr(other), recip(self))

    def __pow__(self, k):
        return pow_(self, k)

    def __repr__(self):
        return f"<{type(self).__name__} {to_ast(self)!r}>"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        object.__setattr__(self, "value", float(value))

    def _diff(self, block, i):
        return ZERO


class Coord(Expr):
    __slots__ = ("block", "i")

    def __init__(self, block: str, i: int):
        if block not in BLOCKS:
            raise ValueError(f"unknown block {block!r}")
        object.__setattr__(self, "block", block)
        object.__setattr__(self, "i", int(i))

    def _diff(self, block, i):
        return ONE if (block, i) == (self.block, self.i) else ZERO


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))

    def _diff(self, block, i):
        return add(*(t.diff(block, i) for t in self.terms))


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def _diff(self, block, i):
        fs = self.factors
        parts = []
        for k, f in enumerate(fs):
            df = f.diff(block, i)
            if isinstance(df, Const) and df.value == 0.0:
                continue
            parts.append(mul(*fs[:k], df, *fs[k + 1:]))
        return add(*parts)


class Pow(Expr):
    """Numeric-exponent power; non-integer exponents require a positive base."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: float):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", float(exponent))

    def _diff(self, block, i):
        k = self.exponent
        return mul(Const(k), pow_(self.base, k - 1), self.base.diff(block, i))


class Recip(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)

    def _diff(self, block, i):
        return mul(Const(-1.0), self.arg.diff(block, i), Pow(Recip(self.arg), 2.0))


class Sqrt(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)

    def _diff(self, block, i):
        return mul(Const(0.5), self.arg.diff(block, i), Recip(Sqrt(self.arg)))


class Exp(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)

    def _diff(self, block, i):
        return mul(self.arg.diff(block, i), self)


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(v)


# -- smart constructors ---------------------------------------------------

def add(*terms: Expr) -> Expr:
    flat = []
    const = 0.0
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    kept = []
    for t in flat:
        if isinstance(t, Const):
            const += t.value
        else:
            kept.append(t)
    if const != 0.0:
        kept.append(Const(const))
    if not kept:
        return ZERO
    if len(kept) == 1:
        return kept[0]
    return Add(kept)


def mul(*factors: Expr) -> Expr:
    flat = []
    const = 1.0
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    kept = []
    for f in flat:
        if isinstance(f, Const):
            const *= f.value
        else:
            kept.append(f)
    if const == 0.0:
        return ZERO
    if const != 1.0:
        kept.insert(0, Const(const))
    if not kept:
        return ONE
    if len(kept) == 1:
        return kept[0]
    return Mul(kept)


def pow_(base: Expr, k: float) -> Expr:
    k = float(k)
    if k == 0.0:
        return ONE
    if k == 1.0:
        return base
    if isinstance(base, Const):
        return Const(base.value ** k)
    return Pow(base, k)


def recip(arg: Expr) -> Expr:
    if isinstance(arg, Const):
        if arg.value == 0.0:
            raise DomainError("reciprocal of the zero constant")
        return Const(1.0 / arg.value)
    return Recip(arg)


def sqrt(arg: Expr) -> Expr:
    if isinstance(arg, Const):
        if arg.value < 0.0:
            raise DomainError("sqrt of a negative constant")
        return Const(arg.value ** 0.5)
    return Sqrt(arg)


def exp(arg: Expr) -> Expr:
    return Exp(arg)


def coord(block: str, i: int) -> Expr:
    return Coord(block, i)


def coord_global(n: int, j: int) -> Expr:
    """Coordinate expression for global index j in a 3n-dimensional chart."""
    return Coord(BLOCKS[j // n], j % n)


def diff_global(e: Expr, n: int, j: int) -> Expr:
    return e.diff(BLOCKS[j // n], j % n)


def is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0.0


# -- evaluation -----------------------------------------------------------

def evaluate(e: Expr, point) -> float:
    """Evaluate at a chart point (sequence of length 3n, blocks x|y|z)."""
    return Evaluator(point)(e)


class Evaluator:
    """Memoised evaluation of many expressions at one fixed point."""

    def __init__(self, point):
        point = list(map(float, point))
        if len(point) % 3 != 0:
            raise DomainError(f"point length {len(point)} is not a multiple of 3")
        self.point = point
        self.n = len(point) // 3
        self._offset = {"x": 0, "y": self.n, "z": 2 * self.n}
        self._memo: dict[int, float] = {}

    def __call__(self, e: Expr) -> float:
        memo = self._memo
        key = id(e)
        hit = memo.get(key)
        if hit is not None:
            return hit
        v = self._eval(e)
        memo[key] = v
        return v

    def _eval(self, e: Expr) -> float:
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Coord):
            if e.i >= self.n:
                raise DomainError(f"coordinate {e.block}[{e.i}] out of range for n={self.n}")
            return self.point[self._offset[e.block] + e.i]
        if isinstance(e, Add):
            return sum(self(t) for t in e.terms)
        if isinstance(e, Mul):
            v = 1.0
            for f in e.factors:
                v *= self(f)
            return v
        if isinstance(e, Pow):
            b = self(e.base)
            k = e.exponent
            if b == 0.0 and k < 0.0:
                raise DomainError("zero base with negative exponent")
            if b < 0.0 and k != int(k):
                raise DomainError("negative base with fractional exponent")
            return b ** k
        if isinstance(e, Recip):
            v = self(e.arg)
            if v == 0.0:
                raise DomainError("reciprocal evaluated at 0")
            return 1.0 / v
        if isinstance(e, Sqrt):
            v = self(e.arg)
            if v < 0.0:
                raise DomainError("sqrt evaluated at a negative value")
            return v ** 0.5
        if isinstance(e, Exp):
            import math

            return math.exp(self(e.arg))
        raise TypeError(f"unknown node {type(e).__name__}")


# -- JSON AST -------------------------------------------------------------
#
# Node layout: {"op": "add"|"mul"|"pow"|"recip"|"sqrt"|"exp"|"const"|"coord",
#               "args": [...], "value": number,
#               "index": {"block": "x"|"y"|"z", "i": int}}
# "const" carries "value", "coord" carries "index" (0-based), "pow" carries
# one child in "args" and the numeric exponent in "value".

def to_ast(e: Expr) -> dict:
    if isinstance(e, Const):
        return {"op": "const", "value": e.value}
    if isinstance(e, Coord):
        return {"op": "coord", "index": {"block": e.block, "i": e.i}}
    if isinstance(e, Add):
        return {"op": "add", "args": [to_ast(t) for t in e.terms]}
    if isinstance(e, Mul):
        return {"op": "mul", "args": [to_ast(f) for f in e.factors]}
    if isinstance(e, Pow):
        return {"op": "pow", "args": [to_ast(e.base)], "value": e.exponent}
    if isinstance(e, Recip):
        return {"op": "recip", "args": [to_ast(e.arg)]}
    if isinstance(e, Sqrt):
        return {"op": "sqrt", "args": [to_ast(e.arg)]}
    if isinstance(e, Exp):
        return {"op": "exp", "args": [to_ast(e.arg)]}
    raise TypeError(f"unknown node {type(e).__name__}")


def from_ast(node, pointer: str = "") -> Expr:
    if not isinstance(node, dict):
        raise SchemaError(f"expected object, got {type(node).__name__}", pointer)
    op = node.get("op")
    if op == "const":
        value = node.get("value")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError("const node needs a numeric 'value'", pointer)
        return Const(value)
    if op == "coord":
        index = node.get("index")
        if not isinstance(index, dict):
            raise SchemaError("coord node needs an 'index' object", pointer)
        block = index.get("block")
        i = index.get("i")
        if block not in BLOCKS:
            raise SchemaError(f"index.block must be one of {BLOCKS}", pointer + "/index")
        if not isinstance(i, int) or isinstance(i, bool) or i < 0:
            raise SchemaError("index.i must be a nonnegative integer", pointer + "/index")
        return Coord(block, i)
    if op in ("add", "mul", "recip", "sqrt", "exp", "pow"):
        args = node.get("args")
        if not isinstance(args, list) or not args:
            raise SchemaError(f"{op} node needs a nonempty 'args' list", pointer)
        children = [from_ast(a, f"{pointer}/args/{k}") for k, a in enumerate(args)]
        if op == "add":
            return Add(children)
        if op == "mul":
            return Mul(children)
        if op == "pow":
            if len(children) != 1:
                raise SchemaError("pow node takes exactly one child", pointer)
            value = node.get("value")
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaError("pow node needs a numeric 'value' exponent", pointer)
            return Pow(children[0], value)
        if len(children) != 1:
            raise SchemaError(f"{op} node takes exactly one child", pointer)
        return {"recip": Recip, "sqrt": Sqrt, "exp": Exp}[op](children[0])
    raise SchemaError(f"unknown op {op!r}", pointer)


def dumps(e: Expr) -> str:
    return json.dumps(to_ast(e), separators=(",", ":"), sort_keys=True)


def loads(s: str) -> Expr:
    try:
        node = json.loads(s)
    except json.JSONDecodeError as exc:  # pragma: no cover - thin wrapper
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_ast(node)


def structurally_equal(a: Expr, b: Expr) -> bool:
    return dumps(a) == dumps(b)


def polynomial(n: int, terms: Iterable[tuple[float, dict]]) -> Expr:
    """Build a polynomial from (coefficient, {(block, i): power}) terms."""
    parts = []
    for c, monomial in terms:
        fs = [Const(c)]
        for (block, i), p in monomial.items():
            fs.append(pow_(Coord(block, i), p))
        parts.append(mul(*fs))
    return add(*parts)
