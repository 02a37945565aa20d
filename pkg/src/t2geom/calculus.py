"""Lie brackets, Frolicher-Nijenhuis brackets, exterior calculus and the
derivations d_K on chart-defined objects.

Conventions (pinned by reproducing the canonical-tensor identities):

* [X, K](Y) = [X, KY] - K[X, Y] for a field X and vector 1-form K,
  and [K, X] := -[X, K];
* [K, L](X, Y) = [KX, LY] + [LX, KY] + KL[X,Y] + LK[X,Y]
                 - K[LX, Y] - K[X, LY] - L[KX, Y] - L[X, KY];
* d_X = i_X d + d i_X for a vector field, d_K = i_K d - d i_K for a
  vector 1-form (with i_K := 0 on functions).
"""

from __future__ import annotations

from . import expr as ex
from .errors import ChartMismatch, DegreeError
from .fields import (ScalarPForm, VectorField, VectorOneForm, VectorTwoForm,
                     increasing_tuples)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k."""
    if X.n != Y.n:
        raise ChartMismatch(f"chart dimensions differ: n={X.n} vs n={Y.n}")
    n = X.n
    d = 3 * n
    comps = []
    for k in range(d):
        parts = []
        for i in range(d):
            parts.append(ex.mul(X.components[i], ex.diff_global(Y.components[k], n, i)))
            parts.append(ex.mul(ex.Const(-1.0), Y.components[i],
                                ex.diff_global(X.components[k], n, i)))
        comps.append(ex.add(*parts))
    return VectorField(n, comps)


def _lie_exprs(n, Xc, Yc):
    """lie_bracket on raw component lists."""
    d = 3 * n
    comps = []
    for k in range(d):
        parts = []
        for i in range(d):
            parts.append(ex.mul(Xc[i], ex.diff_global(Yc[k], n, i)))
            parts.append(ex.mul(ex.Const(-1.0), Yc[i], ex.diff_global(Xc[k], n, i)))
        comps.append(ex.add(*parts))
    return comps


def fn_bracket_vf(X: VectorField, K: VectorOneForm) -> VectorOneForm:
    """[X, K]: the Lie derivative of a vector 1-form K along X."""
    if not isinstance(K, VectorOneForm):
        raise DegreeError("fn_bracket_vf needs a vector form of degree 1")
    if X.n != K.n:
        raise ChartMismatch(f"chart dimensions differ: n={X.n} vs n={K.n}")
    n = X.n
    d = 3 * n
    # column j of [X,K]: [X, K e_j] + K (d_j X)
    cols = []
    for j in range(d):
        lie_col = _lie_exprs(n, X.components, [row[j] for row in K.matrix])
        corr = K.apply_exprs(X.diff_global(j))
        cols.append([ex.add(a, b) for a, b in zip(lie_col, corr)])
    return VectorOneForm(n, [[cols[j][i] for j in range(d)] for i in range(d)])


def fn_bracket_fv(K: VectorOneForm, X: VectorField) -> VectorOneForm:
    """[K, X] := -[X, K]."""
    return fn_bracket_vf(X, K) * -1.0


def fn_bracket_vf2(X: VectorField, L: VectorTwoForm) -> VectorTwoForm:
    """Lie derivative of a vector 2-form: [X,L](Y,Z) = [X, L(Y,Z)] - L([X,Y],Z) - L(Y,[X,Z])."""
    n = X.n
    d = 3 * n
    out = VectorTwoForm(n)
    for a in range(d):
        for b in range(a + 1, d):
            vec = _lie_exprs(n, X.components, L.component(a, b))
            dXa = X.diff_global(a)
            dXb = X.diff_global(b)
            # [X, e_a] = -d_a X, so -L([X,e_a], e_b) = +L(d_a X, e_b); same on slot 2.
            for c in range(d):
                col_cb = L.component(c, b)
                col_ac = L.component(a, c)
                vec = [ex.add(v, ex.mul(dXa[c], col_cb[k]), ex.mul(dXb[c], col_ac[k]))
                       for k, v in enumerate(vec)]
            out.set(a, b, vec)
    return out


def fn_bracket_ff(K: VectorOneForm, L: VectorOneForm) -> VectorTwoForm:
    """Frolicher-Nijenhuis bracket of two vector 1-forms (a vector 2-form)."""
    for M in (K, L):
        if not isinstance(M, VectorOneForm):
            raise DegreeError("fn_bracket_ff needs two vector forms of degree 1")
    if K.n != L.n:
        raise ChartMismatch(f"chart dimensions differ: n={K.n} vs n={L.n}")
    n = K.n
    d = 3 * n
    Kcols = [[row[j] for row in K.matrix] for j in range(d)]
    Lcols = [[row[j] for row in L.matrix] for j in range(d)]
    same = K is L
    out = VectorTwoForm(n)
    for a in range(d):
        for b in range(a + 1, d):
            t1 = _lie_exprs(n, Kcols[a], Lcols[b])
            t2 = t1 if same else _lie_exprs(n, Lcols[a], Kcols[b])
            dLa_b = [ex.diff_global(c, n, b) for c in Lcols[a]]
            dLb_a = [ex.diff_global(c, n, a) for c in Lcols[b]]
            t3 = K.apply_exprs(dLa_b)
            t4 = K.apply_exprs(dLb_a)
            if same:
                t5, t6 = t3, t4
            else:
                dKa_b = [ex.diff_global(c, n, b) for c in Kcols[a]]
                dKb_a = [ex.diff_global(c, n, a) for c in Kcols[b]]
                t5 = L.apply_exprs(dKa_b)
                t6 = L.apply_exprs(dKb_a)
            vec = [ex.add(t1[k], t2[k], t3[k], ex.mul(ex.Const(-1.0), t4[k]),
                          t5[k], ex.mul(ex.Const(-1.0), t6[k]))
                   for k in range(d)]
            out.set(a, b, vec)
    return out


def exterior_derivative(omega: ScalarPForm) -> ScalarPForm:
    """Coordinate exterior derivative; defined for p <= 2 (output degree p+1)."""
    if omega.degree >= ScalarPForm.MAX_DEGREE:
        raise DegreeError(f"d of a degree-{omega.degree} form exceeds the stored degrees")
    n = omega.n
    d = 3 * n
    out = ScalarPForm(n, omega.degree + 1)
    items = [((), omega.body)] if omega.degree == 0 else list(omega.coeffs.items())
    for idx, c in items:
        for i in range(d):
            if i in idx:
                continue
            dc = ex.diff_global(c, n, i)
            if ex.is_zero(dc):
                continue
            out.set((i,) + idx, dc)
    return out


def interior_product(K, omega: ScalarPForm) -> ScalarPForm:
    """i_X (slot-1 contraction) for a vector field, i_K (degree-preserving
    derivation of degree 0) for a vector 1-form."""
    if omega.degree == 0:
        raise DegreeError("interior product of a 0-form")
    return _interior(K, omega)


def _interior(K, omega: ScalarPForm) -> ScalarPForm:
    if omega.degree == 0:
        # i_K vanishes on functions for both kinds of K.
        return ScalarPForm(omega.n, 0, {(): ex.ZERO})
    n = omega.n
    d = 3 * n
    if isinstance(K, VectorField):
        out = ScalarPForm(n, omega.degree - 1)
        if omega.degree == 1:
            body = ex.add(*(ex.mul(K.components[j], omega.coeff((j,))) for j in range(d)
                            if (j,) in omega.coeffs))
            return ScalarPForm(n, 0, {(): body})
        for idx, c in omega.coeffs.items():
            for pos, j in enumerate(idx):
                rest = idx[:pos] + idx[pos + 1:]
                sign = -1.0 if pos % 2 else 1.0
                out.set(rest, ex.mul(ex.Const(sign), K.components[j], c))
        return out
    if isinstance(K, VectorOneForm):
        out = ScalarPForm(n, omega.degree)
        p = omega.degree
        for idx in increasing_tuples(d, p):
            parts = []
            for s in range(p):
                for m in range(d):
                    km = K.matrix[m][idx[s]]
                    if ex.is_zero(km):
                        continue
                    c = omega.coeff(idx[:s] + (m,) + idx[s + 1:])
                    if ex.is_zero(c):
                        continue
                    parts.append(ex.mul(km, c))
            if parts:
                out.set(idx, ex.add(*parts))
        return out
    raise DegreeError(f"cannot contract with {type(K).__name__}")


def d_K(K, omega: ScalarPForm) -> ScalarPForm:
    """d_X = i_X d + d i_X (Lie derivative); d_K = i_K d - d i_K for a 1-form K."""
    if isinstance(K, VectorField):
        a = _interior(K, exterior_derivative(omega))
        if omega.degree == 0:
            return a
        return a + exterior_derivative(_interior(K, omega))
    if isinstance(K, VectorOneForm):
        a = _interior(K, exterior_derivative(omega))
        if omega.degree == 0:
            return a
        return a - exterior_derivative(_interior(K, omega))
    raise DegreeError(f"d_K undefined for {type(K).__name__}")


def apply_vector2form(t: VectorTwoForm, S: VectorField) -> VectorOneForm:
    """(i_S t)(X) = t(S, X), a vector 1-form."""
    if not isinstance(t, VectorTwoForm):
        raise DegreeError("apply_vector2form needs a vector 2-form")
    if t.n != S.n:
        raise ChartMismatch(f"chart dimensions differ: n={t.n} vs n={S.n}")
    n = t.n
    d = 3 * n
    cols = [[ex.ZERO] * d for _ in range(d)]
    for (a, b), vec in t.coeffs.items():
        for k in range(d):
            cols[b][k] = ex.add(cols[b][k], ex.mul(S.components[a], vec[k]))
            cols[a][k] = ex.add(cols[a][k], ex.mul(ex.Const(-1.0), S.components[b], vec[k]))
    return VectorOneForm(n, [[cols[j][i] for j in range(d)] for i in range(d)])
