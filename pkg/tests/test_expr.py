"""Expression trees: arithmetic, exact differentiation, JSON ASTs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from t2geom import expr as ex
from t2geom.errors import DomainError, SchemaError


def test_constant_folding():
    assert ex.add(ex.Const(1.0), ex.Const(2.0)).value == 3.0
    assert ex.mul(ex.Const(2.0), ex.Const(3.0)).value == 6.0
    assert ex.is_zero(ex.mul(ex.ZERO, ex.coord("x", 0)))
    assert ex.add(ex.ZERO, ex.coord("y", 1)) is not None


def test_evaluate_polynomial():
    # p = (x0, y0, z0) = (1, 2, 3); x0*y0 + z0^2 = 11
    e = ex.add(ex.mul(ex.coord("x", 0), ex.coord("y", 0)),
               ex.mul(ex.coord("z", 0), ex.coord("z", 0)))
    assert ex.evaluate(e, np.array([1.0, 2.0, 3.0])) == 11.0


def test_diff_product_rule():
    # d/dy0 (y0^2 z0) = 2 y0 z0
    e = ex.mul(ex.coord("y", 0), ex.coord("y", 0), ex.coord("z", 0))
    d = e.diff("y", 0)
    p = np.array([0.0, 1.5, -2.0])
    assert ex.evaluate(d, p) == pytest.approx(2 * 1.5 * -2.0)


def test_recip_and_sqrt():
    p = np.array([0.0, 4.0, 0.0])
    y = ex.coord("y", 0)
    assert ex.evaluate(ex.Recip(y), p) == 0.25
    assert ex.evaluate(ex.Sqrt(y), p) == 2.0
    # d/dy sqrt(y) = 1/(2 sqrt(y))
    assert ex.evaluate(ex.Sqrt(y).diff("y", 0), p) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        ex.evaluate(ex.Recip(y), np.array([0.0, 0.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.3, 3))
def test_diff_matches_finite_difference(a, b, y0):
    # f = a*x0*y0 + b/y0, df/dy0 = a*x0 - b/y0^2
    x = ex.coord("x", 0)
    y = ex.coord("y", 0)
    f = ex.add(ex.mul(ex.Const(a), x, y), ex.mul(ex.Const(b), ex.Recip(y)))
    h = 1e-6
    p = np.array([1.3, y0, 0.7])
    ph = np.array([1.3, y0 + h, 0.7])
    pm = np.array([1.3, y0 - h, 0.7])
    fd = (ex.evaluate(f, ph) - ex.evaluate(f, pm)) / (2 * h)
    assert ex.evaluate(f.diff("y", 0), p) == pytest.approx(fd, abs=1e-4, rel=1e-4)


def test_pow_exp_derivatives():
    y = ex.coord("y", 0)
    p = np.array([0.0, 2.0, 0.0])
    e = ex.Pow(y, 3)
    assert ex.evaluate(e, p) == 8.0
    assert ex.evaluate(e.diff("y", 0), p) == 12.0
    g = ex.Exp(y)
    assert ex.evaluate(g.diff("y", 0), p) == pytest.approx(math.exp(2.0))


def test_diff_global_block_mapping():
    n = 2
    e = ex.mul(ex.coord("x", 1), ex.coord("z", 0))
    # global index 1 is x1, global index 4 is z0 for n = 2
    p = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    assert ex.evaluate(ex.diff_global(e, n, 1), p) == 5.0
    assert ex.evaluate(ex.diff_global(e, n, 4), p) == 2.0


def test_ast_round_trip():
    y = ex.coord("y", 1)
    e = ex.add(ex.mul(ex.Const(2.0), y, ex.Sqrt(ex.coord("z", 0))),
               ex.Recip(ex.add(y, ex.ONE)))
    back = ex.loads(ex.dumps(e))
    p = np.array([0.3, -0.2, 0.8, 1.4, 2.0, 0.1])
    assert ex.evaluate(back, p) == pytest.approx(ex.evaluate(e, p), rel=1e-15)
    assert ex.structurally_equal(e, back)


def test_ast_schema_errors_carry_pointers():
    with pytest.raises(SchemaError) as err:
        ex.from_ast({"op": "add", "args": [{"op": "nope"}]})
    assert err.value.pointer == "/args/0"
    with pytest.raises(SchemaError) as err:
        ex.from_ast({"op": "coord", "index": {"block": "w", "i": 0}})
    assert err.value.pointer == "/index"
    with pytest.raises(SchemaError):
        ex.from_ast({"op": "const", "value": "three"})
