"""Chart-defined fields and forms on the 3n-dimensional chart of T2M.

Four kinds of objects, all with scalar-expression coefficients:

* ``VectorField`` -- 3n components, a section of TT2M over the chart;
* ``ScalarPForm`` -- alternating p-linear scalar form, p in {0,1,2,3},
  coefficients stored on strictly increasing index tuples;
* ``VectorOneForm`` -- a field of endomorphisms (3n x 3n matrix);
* ``VectorTwoForm`` -- alternating bilinear map into R^{3n}, coefficients
  stored on increasing index pairs.

Indices are global chart indices: 0..n-1 the x block, n..2n-1 the y block,
2n..3n-1 the z block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import ChartMismatch, DegreeError, DomainError


@dataclass(frozen=True)
class Chart:
    """A coordinate chart on T2M: dimension 3n split into x, y, z blocks."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("base dimension n must be >= 1")

    @property
    def dim(self) -> int:
        return 3 * self.n

    def labels(self):
        return tuple(f"{b}{i + 1}" for b in ex.BLOCKS for i in range(self.n))


def _check_same_n(a, b):
    if a.n != b.n:
        raise ChartMismatch(f"chart dimensions differ: n={a.n} vs n={b.n}")


def sort_sign(indices):
    """Sort an index tuple, returning (sorted tuple, sign); sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i - 1] == idx[i]:
            return tuple(idx), 0
    return tuple(idx), sign


class VectorField:
    """A vector field: 3n scalar-expression components."""

    def __init__(self, n: int, components):
        components = tuple(ex.as_expr(c) for c in components)
        if len(components) != 3 * n:
            raise ChartMismatch(f"expected {3 * n} components, got {len(components)}")
        self.n = n
        self.components = components

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls(n, (ex.ZERO,) * (3 * n))

    def evaluate(self, point) -> np.ndarray:
        e = ex.Evaluator(point)
        return np.array([e(c) for c in self.components])

    def diff_global(self, j: int):
        """Componentwise partial derivative along global coordinate j."""
        return [ex.diff_global(c, self.n, j) for c in self.components]

    def __add__(self, other):
        _check_same_n(self, other)
        return VectorField(self.n, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        _check_same_n(self, other)
        return VectorField(self.n, [a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, s):
        s = ex.as_expr(s)
        return VectorField(self.n, [ex.mul(s, c) for c in self.components])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class ScalarPForm:
    """Alternating scalar p-form, p <= 3, coefficients on increasing tuples."""

    MAX_DEGREE = 3

    def __init__(self, n: int, degree: int, coeffs=None):
        if not (0 <= degree <= self.MAX_DEGREE):
            raise DegreeError(f"scalar form degree must be in 0..3, got {degree}")
        self.n = n
        self.degree = degree
        self.coeffs: dict[tuple, ex.Expr] = {}
        if degree == 0:
            body = coeffs if coeffs is not None else {(): ex.ZERO}
            if isinstance(body, ex.Expr):
                body = {(): body}
            self.coeffs = {(): ex.as_expr(body.get((), ex.ZERO))}
            return
        for idx, c in (coeffs or {}).items():
            self.set(idx, c)

    @classmethod
    def function(cls, n: int, f) -> "ScalarPForm":
        return cls(n, 0, {(): ex.as_expr(f)})

    def set(self, indices, c):
        idx, sign = sort_sign(indices)
        if len(idx) != self.degree:
            raise DegreeError(f"index tuple {indices} has wrong length for degree {self.degree}")
        if any(not (0 <= j < 3 * self.n) for j in idx):
            raise ChartMismatch(f"index out of range in {indices}")
        if sign == 0:
            return
        c = ex.mul(ex.Const(float(sign)), ex.as_expr(c))
        prev = self.coeffs.get(idx)
        total = c if prev is None else ex.add(prev, c)
        if ex.is_zero(total):
            self.coeffs.pop(idx, None)
        else:
            self.coeffs[idx] = total

    def coeff(self, indices) -> ex.Expr:
        """Coefficient on an arbitrary (possibly unsorted) index tuple."""
        idx, sign = sort_sign(indices)
        if sign == 0:
            return ex.ZERO
        c = self.coeffs.get(idx)
        if c is None:
            return ex.ZERO
        return ex.mul(ex.Const(float(sign)), c)

    @property
    def body(self) -> ex.Expr:
        if self.degree != 0:
            raise DegreeError("body is only defined for 0-forms")
        return self.coeffs[()]

    def evaluate(self, point, *args) -> float:
        if len(args) != self.degree:
            raise DegreeError(f"degree-{self.degree} form needs {self.degree} arguments")
        e = ex.Evaluator(point)
        if self.degree == 0:
            return e(self.body)
        vs = [np.asarray(a, dtype=float) for a in args]
        total = 0.0
        for idx, c in self.coeffs.items():
            cv = e(c)
            if cv == 0.0:
                continue
            # determinant of the p x p minor picked out by idx
            minor = np.array([[v[j] for j in idx] for v in vs])
            total += cv * np.linalg.det(minor)
        return total

    def __add__(self, other):
        _check_same_n(self, other)
        if self.degree != other.degree:
            raise DegreeError("cannot add forms of different degree")
        out = ScalarPForm(self.n, self.degree, dict(self.coeffs))
        if self.degree == 0:
            return ScalarPForm(self.n, 0, {(): ex.add(self.body, other.body)})
        for idx, c in other.coeffs.items():
            out.set(idx, c)
        return out

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, s):
        s = ex.as_expr(s)
        return ScalarPForm(self.n, self.degree,
                           {idx: ex.mul(s, c) for idx, c in self.coeffs.items()})

    __rmul__ = __mul__


class VectorOneForm:
    """A vector 1-form: a 3n x 3n matrix of scalar expressions (K X)^i = M[i][j] X^j."""

    def __init__(self, n: int, matrix):
        matrix = tuple(tuple(ex.as_expr(c) for c in row) for row in matrix)
        if len(matrix) != 3 * n or any(len(r) != 3 * n for r in matrix):
            raise ChartMismatch(f"matrix must be {3 * n} x {3 * n}")
        self.n = n
        self.matrix = matrix

    @classmethod
    def zero(cls, n: int) -> "VectorOneForm":
        return cls(n, [[ex.ZERO] * (3 * n)] * (3 * n))

    @classmethod
    def identity(cls, n: int) -> "VectorOneForm":
        d = 3 * n
        return cls(n, [[ex.ONE if i == j else ex.ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def from_numeric(cls, n: int, arr) -> "VectorOneForm":
        arr = np.asarray(arr, dtype=float)
        return cls(n, [[ex.Const(v) for v in row] for row in arr])

    def column(self, j: int) -> VectorField:
        return VectorField(self.n, [row[j] for row in self.matrix])

    def apply(self, X: VectorField) -> VectorField:
        _check_same_n(self, X)
        comps = [ex.add(*(ex.mul(row[j], X.components[j]) for j in range(3 * self.n)))
                 for row in self.matrix]
        return VectorField(self.n, comps)

    def apply_exprs(self, comps):
        """Apply to a raw component list, returning a component list."""
        return [ex.add(*(ex.mul(row[j], comps[j]) for j in range(3 * self.n)))
                for row in self.matrix]

    def compose(self, other: "VectorOneForm") -> "VectorOneForm":
        """Matrix product self o other."""
        _check_same_n(self, other)
        d = 3 * self.n
        rows = []
        for i in range(d):
            rows.append([ex.add(*(ex.mul(self.matrix[i][k], other.matrix[k][j])
                                  for k in range(d)))
                         for j in range(d)])
        return VectorOneForm(self.n, rows)

    def evaluate(self, point) -> np.ndarray:
        e = ex.Evaluator(point)
        return np.array([[e(c) for c in row] for row in self.matrix])

    def __add__(self, other):
        _check_same_n(self, other)
        return VectorOneForm(self.n, [[a + b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.matrix, other.matrix)])

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, s):
        s = ex.as_expr(s)
        return VectorOneForm(self.n, [[ex.mul(s, c) for c in row] for row in self.matrix])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class VectorTwoForm:
    """Alternating vector 2-form; stores an R^{3n}-valued coefficient per pair a < b."""

    def __init__(self, n: int, coeffs=None):
        self.n = n
        self.coeffs: dict[tuple[int, int], tuple] = {}
        for (a, b), vec in (coeffs or {}).items():
            self.set(a, b, vec)

    def set(self, a: int, b: int, vec):
        vec = [ex.as_expr(c) for c in vec]
        if len(vec) != 3 * self.n:
            raise ChartMismatch("coefficient vector has wrong length")
        if a == b:
            return
        if a > b:
            a, b = b, a
            vec = [ex.mul(ex.Const(-1.0), c) for c in vec]
        prev = self.coeffs.get((a, b))
        if prev is not None:
            vec = [ex.add(p, c) for p, c in zip(prev, vec)]
        if all(ex.is_zero(c) for c in vec):
            self.coeffs.pop((a, b), None)
        else:
            self.coeffs[(a, b)] = tuple(vec)

    def component(self, a: int, b: int):
        """Value on (e_a, e_b) as a component list (antisymmetric in a, b)."""
        if a == b:
            return [ex.ZERO] * (3 * self.n)
        key, flip = ((a, b), 1.0) if a < b else ((b, a), -1.0)
        vec = self.coeffs.get(key)
        if vec is None:
            return [ex.ZERO] * (3 * self.n)
        if flip == 1.0:
            return list(vec)
        return [ex.mul(ex.Const(-1.0), c) for c in vec]

    def evaluate(self, point, u, v) -> np.ndarray:
        e = ex.Evaluator(point)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.zeros(3 * self.n)
        for (a, b), vec in self.coeffs.items():
            w = u[a] * v[b] - u[b] * v[a]
            if w == 0.0:
                continue
            out += w * np.array([e(c) for c in vec])
        return out

    def __add__(self, other):
        _check_same_n(self, other)
        out = VectorTwoForm(self.n, dict(self.coeffs))
        for (a, b), vec in other.coeffs.items():
            out.set(a, b, vec)
        return out

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, s):
        s = ex.as_expr(s)
        return VectorTwoForm(self.n, {k: [ex.mul(s, c) for c in vec]
                                      for k, vec in self.coeffs.items()})

    __rmul__ = __mul__


def evaluate(obj, point, *args):
    """Evaluate any field or form at a point, with argument vectors as needed.

    VectorField -> R^{3n}; ScalarPForm with p argument vectors -> R;
    VectorOneForm with one argument vector -> R^{3n}; VectorTwoForm with
    two -> R^{3n}.  Raises DomainError if a primitive leaves its domain.
    """
    if isinstance(obj, VectorField):
        return obj.evaluate(point)
    if isinstance(obj, ScalarPForm):
        return obj.evaluate(point, *args)
    if isinstance(obj, VectorOneForm):
        if len(args) == 0:
            return obj.evaluate(point)
        if len(args) == 1:
            return obj.evaluate(point) @ np.asarray(args[0], dtype=float)
        raise DegreeError("vector 1-form takes at most one argument")
    if isinstance(obj, VectorTwoForm):
        if len(args) != 2:
            raise DegreeError("vector 2-form takes exactly two arguments")
        return obj.evaluate(point, *args)
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


def increasing_tuples(dim: int, p: int):
    return itertools.combinations(range(dim), p)
