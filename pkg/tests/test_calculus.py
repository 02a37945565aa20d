"""Brackets, exterior calculus and graded derivations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from t2geom import expr as ex
from t2geom.calculus import (d_K, exterior_derivative, fn_bracket_fv,
                             fn_bracket_vf, interior_product, lie_bracket)
from t2geom.canonical import canonical_pack
from t2geom.errors import DegreeError
from t2geom.fields import ScalarPForm, VectorField, VectorOneForm
from t2geom.sampling import SampleSpec, max_residual, random_polynomial_field, sample_points


def _fields(n, seed, k=3):
    rng = np.random.default_rng(seed)
    return [random_polynomial_field(n, rng) for _ in range(k)]


def _pform_value(w, point, *vecs):
    """Evaluate a scalar p-form on constant numeric vectors."""
    e = ex.Evaluator(point)
    if w.degree == 1:
        (v,) = vecs
        return sum(e(c) * v[idx[0]] for idx, c in w.coeffs.items())
    total = 0.0
    for idx, c in w.coeffs.items():
        a, b = idx
        for u, v in [vecs]:
            total += e(c) * (u[a] * v[b] - u[b] * v[a])
    return total


@pytest.mark.parametrize("n", [1, 2])
def test_lie_bracket_antisymmetry_and_jacobi(n):
    points = sample_points(n, SampleSpec(count=10, seed=3))
    X, Y, Z = _fields(n, seed=n)
    assert max_residual(lie_bracket(X, Y) + lie_bracket(Y, X), points) < 1e-9
    jac = (lie_bracket(X, lie_bracket(Y, Z))
           + lie_bracket(Y, lie_bracket(Z, X))
           + lie_bracket(Z, lie_bracket(X, Y)))
    assert max_residual(jac, points) < 1e-9


def test_lie_bracket_finite_difference(points1):
    # [X,Y]^i = X^j dY^i/dj - Y^j dX^i/dj, cross-checked numerically
    X, Y, _ = _fields(1, seed=11)
    br = lie_bracket(X, Y)
    h = 1e-6
    for p in points1[:5]:
        xv, yv = X.evaluate(p), Y.evaluate(p)
        num = np.zeros(3)
        for j in range(3):
            dp = np.zeros(3)
            dp[j] = h
            num += xv[j] * (Y.evaluate(p + dp) - Y.evaluate(p - dp)) / (2 * h)
            num -= yv[j] * (X.evaluate(p + dp) - X.evaluate(p - dp)) / (2 * h)
        assert np.allclose(br.evaluate(p), num, atol=1e-5)


@pytest.mark.parametrize("n", [1, 2])
def test_d_squared_zero(n):
    points = sample_points(n, SampleSpec(count=10, seed=5))
    y0 = ex.coord("y", 0)
    f = ScalarPForm.function(n, ex.mul(y0, y0, ex.coord("x", 0)))
    assert max_residual(exterior_derivative(exterior_derivative(f)), points) == 0.0
    w = ScalarPForm(n, 1, {(0,): ex.mul(y0, ex.coord("z", 0)), (1,): ex.Exp(y0)})
    assert max_residual(exterior_derivative(exterior_derivative(w)), points) < 1e-12


def test_exterior_derivative_of_function_is_gradient(points1):
    f = ScalarPForm.function(1, ex.mul(ex.coord("x", 0), ex.coord("z", 0)))
    df = exterior_derivative(f)
    p = points1[0]
    e = ex.Evaluator(p)
    assert e(df.coeff((0,))) == pytest.approx(p[2])  # d/dx0 -> z0
    assert e(df.coeff((1,))) == pytest.approx(0.0)
    assert e(df.coeff((2,))) == pytest.approx(p[0])


def test_exterior_derivative_on_one_form_oracle(points1):
    # w = y dx: dw = dy ^ dx = -(dx ^ dy), coefficient at (0,1) is -1
    w = ScalarPForm(1, 1, {(0,): ex.coord("y", 0)})
    dw = exterior_derivative(w)
    for p in points1[:3]:
        e = ex.Evaluator(p)
        assert e(dw.coeff((0, 1))) == pytest.approx(-1.0)
        assert e(dw.coeff((0, 2))) == pytest.approx(0.0)


def test_interior_product_is_contraction(points1):
    X, Y, Z = _fields(1, seed=21)
    w = ScalarPForm(1, 2, {(0, 1): ex.coord("z", 0), (1, 2): ex.coord("x", 0)})
    iw = interior_product(X, w)
    for p in points1[:5]:
        xv, yv = X.evaluate(p), Y.evaluate(p)
        assert _pform_value(iw, p, yv) == pytest.approx(_pform_value(w, p, xv, yv), abs=1e-10)
    with pytest.raises(DegreeError):
        interior_product(X, ScalarPForm.function(1, ex.ONE))


def test_lie_derivative_of_one_form(points1):
    # (d_X w)(Y) = X(w(Y)) - w([X,Y]) for constant Y
    X, _, _ = _fields(1, seed=31)
    w = ScalarPForm(1, 1, {(0,): ex.mul(ex.coord("y", 0), ex.coord("y", 0)),
                           (2,): ex.coord("x", 0)})
    lw = d_K(X, w)
    h = 1e-6
    for p in points1[:5]:
        for j in range(3):
            yv = np.zeros(3)
            yv[j] = 1.0
            Y = VectorField(1, [ex.Const(v) for v in yv])
            wy = ScalarPForm.function(1, ex.add(*(ex.mul(w.coeff((k,)), Y.components[k])
                                                  for k in range(3) if (k,) in w.coeffs)))
            xv = X.evaluate(p)
            grad = np.array([(ex.evaluate(wy.body, p + _e(3, m, h))
                              - ex.evaluate(wy.body, p - _e(3, m, h))) / (2 * h)
                             for m in range(3)])
            expected = float(xv @ grad) - _pform_value(w, p, lie_bracket(X, Y).evaluate(p))
            assert _pform_value(lw, p, yv) == pytest.approx(expected, abs=1e-4)


def _e(d, m, h):
    v = np.zeros(d)
    v[m] = h
    return v


@pytest.mark.parametrize("n", [1, 2])
def test_dJ2_squared_zero(n):
    # [J2, J2] = 0, so d_{J2} composed with itself kills functions and 1-forms
    pack = canonical_pack(n)
    points = sample_points(n, SampleSpec(count=10, seed=7))
    f = ScalarPForm.function(n, ex.mul(ex.coord("y", 0), ex.coord("z", 0)))
    assert max_residual(d_K(pack.J2, d_K(pack.J2, f)), points) < 1e-12
    w = ScalarPForm(n, 1, {(0,): ex.coord("z", 0), (n,): ex.coord("x", 0)})
    assert max_residual(d_K(pack.J2, d_K(pack.J2, w)), points) < 1e-12


def test_fn_bracket_antisymmetry(points1):
    X, _, _ = _fields(1, seed=41)
    pack = canonical_pack(1)
    assert max_residual(fn_bracket_fv(pack.J1, X) + fn_bracket_vf(X, pack.J1),
                        points1) < 1e-12


def test_fn_bracket_vf_matches_lie_derivative(points1):
    # [X, K](Y) = [X, KY] - K[X, Y]
    X, Y, _ = _fields(1, seed=51)
    K = VectorOneForm(1, [[ex.coord("y", 0), ex.ZERO, ex.ZERO],
                          [ex.ZERO, ex.ZERO, ex.coord("x", 0)],
                          [ex.ONE, ex.ZERO, ex.ZERO]])
    lhs = fn_bracket_vf(X, K).apply(Y)
    rhs = lie_bracket(X, K.apply(Y)) - K.apply(lie_bracket(X, Y))
    assert max_residual(lhs - rhs, points1) < 1e-9


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_lie_bracket_bilinear(seed):
    points = sample_points(1, SampleSpec(count=5, seed=1))
    X, Y, Z = _fields(1, seed=seed)
    lhs = lie_bracket(X, Y + Z)
    rhs = lie_bracket(X, Y) + lie_bracket(X, Z)
    assert max_residual(lhs - rhs, points) < 1e-9
