"""Nonlinear connections of types 1 and 2 on T2M: validation, projectors,
weak/strong torsion, the type-1 decomposition, Catz's type-2 decomposition,
and the conjugate pair attached to a spray of type 2.

A connection is a vector 1-form G with G^2 = I satisfying
J1 G = J1, G J2 = -J2 (type 1) or J2 G = J2, G J1 = -J1 (type 2).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from .calculus import apply_vector2form, fn_bracket_ff, fn_bracket_fv, fn_bracket_vf
from .canonical import SemiSpray, canonical_pack, is_semibasic, is_spray, semispray_residual
from .errors import (InvalidConnection, NoSolution,
                     PreconditionFailed, TypeMismatch, ValidationFailed)
from .fields import VectorField, VectorOneForm, VectorTwoForm
from .report import VerificationReport
from .sampling import max_residual


@dataclass(frozen=True)
class Connection:
    form: VectorOneForm
    conn_type: int  # 1 or 2

    @property
    def n(self) -> int:
        return self.form.n


def reference_semispray(n: int, spray_type: int) -> SemiSpray:
    """The flat semi-spray of the requested type: (y,0,0) or (y,z,0)."""
    comps = [ex.coord("y", a) for a in range(n)]
    if spray_type == 1:
        comps += [ex.ZERO] * (2 * n)
    else:
        comps += [ex.coord("z", a) for a in range(n)] + [ex.ZERO] * n
    return SemiSpray(VectorField(n, comps), spray_type)


def validate_connection(form: VectorOneForm, conn_type: int, points,
                        tol: float = 1e-9) -> VerificationReport:
    """Residuals of the defining composites and of G^2 = I."""
    if conn_type not in (1, 2):
        raise InvalidConnection(f"connection type must be 1 or 2, got {conn_type}")
    pack = canonical_pack(form.n)
    rep = VerificationReport(scenario=f"connection-type{conn_type}")
    npts = len(points)
    if conn_type == 1:
        rep.add("conn.J1G-J1", "section 1, connection of type 1",
                max_residual(pack.J1.compose(form) - pack.J1, points), tol, npts)
        rep.add("conn.GJ2+J2", "section 1, connection of type 1",
                max_residual(form.compose(pack.J2) + pack.J2, points), tol, npts)
    else:
        rep.add("conn.J2G-J2", "section 1, connection of type 2",
                max_residual(pack.J2.compose(form) - pack.J2, points), tol, npts)
        rep.add("conn.GJ1+J1", "section 1, connection of type 2",
                max_residual(form.compose(pack.J1) + pack.J1, points), tol, npts)
    rep.add("conn.G2-I", "section 1, involutivity",
            max_residual(form.compose(form) - VectorOneForm.identity(form.n), points),
            tol, npts)
    return rep


def ensure_valid(conn: Connection, points, tol: float = 1e-9):
    rep = validate_connection(conn.form, conn.conn_type, points, tol)
    if not rep.passed:
        worst = max(c.max_residual for c in rep.failures)
        raise InvalidConnection(
            f"not a valid type-{conn.conn_type} connection (residual {worst:.3e})")


def projectors(conn: Connection, points=None, tol: float = 1e-9):
    """h = (I + G)/2, v = (I - G)/2."""
    if points is not None:
        ensure_valid(conn, points, tol)
    ident = VectorOneForm.identity(conn.n)
    h = 0.5 * (ident + conn.form)
    v = 0.5 * (ident - conn.form)
    return h, v


def associated_semispray(conn: Connection, Sprime: SemiSpray,
                         points=None, tol: float = 1e-9) -> SemiSpray:
    """S = h S' for any semi-spray S' of the matching type."""
    if Sprime.spray_type != conn.conn_type:
        raise TypeMismatch(
            f"semi-spray type {Sprime.spray_type} does not match connection type {conn.conn_type}")
    if points is not None and semispray_residual(Sprime.field, Sprime.spray_type, points) > tol:
        raise TypeMismatch("S' is not a semi-spray of the matching type")
    h, _ = projectors(conn)
    return SemiSpray(h.apply(Sprime.field), conn.conn_type)


def weak_torsion(conn: Connection) -> VectorTwoForm:
    """t = [J1, G] for type 1 (and its J2 analogue for type 2)."""
    pack = canonical_pack(conn.n)
    J = pack.J1 if conn.conn_type == 1 else pack.J2
    return fn_bracket_ff(J, conn.form)


def strong_torsion(conn: Connection, S: SemiSpray | None = None) -> VectorOneForm:
    """T = i_S t - [C2, G] with S a semi-spray of the matching type
    (the associated one by default; the value does not depend on the choice)."""
    pack = canonical_pack(conn.n)
    if S is None:
        S = associated_semispray(conn, reference_semispray(conn.n, conn.conn_type))
    elif S.spray_type != conn.conn_type:
        raise TypeMismatch("semi-spray type does not match connection type")
    t = weak_torsion(conn)
    return apply_vector2form(t, S.field) - fn_bracket_vf(pack.C2, conn.form)


def strong_torsion_closed_form(conn: Connection) -> VectorOneForm:
    """Type-1 closed form T = -J2 v + 2[S,J1] + [C1,G] - [C2,G], S = h S'."""
    if conn.conn_type != 1:
        raise InvalidConnection("the closed form applies to type-1 connections")
    pack = canonical_pack(conn.n)
    S = associated_semispray(conn, reference_semispray(conn.n, 1))
    _, v = projectors(conn)
    return (-1.0 * pack.J2.compose(v)
            + 2.0 * fn_bracket_vf(S.field, pack.J1)
            + fn_bracket_vf(pack.C1, conn.form)
            - fn_bracket_vf(pack.C2, conn.form))


def eq17_form(conn: Connection, points, tol: float = 1e-8) -> VectorOneForm:
    """T = (1/2){J2 G - J2 - 4[J1,S]} for homogeneous type-1 connections
    with [C1, G] = 0; both brackets are verified first."""
    if conn.conn_type != 1:
        raise InvalidConnection("the reduced torsion formula applies to type-1 connections")
    pack = canonical_pack(conn.n)
    r2 = max_residual(fn_bracket_vf(pack.C2, conn.form), points)
    if r2 > tol:
        raise PreconditionFailed(f"[C2,G] != 0 (residual {r2:.3e})", r2)
    r1 = max_residual(fn_bracket_vf(pack.C1, conn.form), points)
    if r1 > tol:
        raise PreconditionFailed(f"[C1,G] != 0 (residual {r1:.3e})", r1)
    S = associated_semispray(conn, reference_semispray(conn.n, 1))
    return 0.5 * (pack.J2.compose(conn.form) - pack.J2
                  - 4.0 * fn_bracket_fv(pack.J1, S.field))


def decompose_type1(S: SemiSpray, T: VectorOneForm, points,
                    tol: float = 1e-8) -> Connection:
    """Homogeneous type-1 connection with associated spray S, strong torsion T
    and [C1, G] = 0, determined by J2 G = 2T + J2 + 4[J1, S].

    The defining system pins every block of G except the z-row x-column
    block; that block is completed structurally (from the y-gradient of the
    pinned block) so that [C1, G] = 0 holds, then all postconditions are
    verified.
    """
    n = S.field.n
    pack = canonical_pack(n)
    if S.spray_type != 1:
        raise TypeMismatch("decompose_type1 needs a spray of type 1")
    ok, res = is_spray(S, points, tol)
    if not ok:
        raise PreconditionFailed(f"S is not a spray (residual {res:.3e})", res)
    ok, res = is_semibasic(T, "pi2", points, tol)
    if not ok:
        raise PreconditionFailed(f"T is not pi2-semi-basic (residual {res:.3e})", res)
    res = max_residual(T.apply(S.field), points)
    if res > tol:
        raise PreconditionFailed(f"T(S) != 0 (residual {res:.3e})", res)

    M = fn_bracket_fv(pack.J1, S.field)
    rhs = 2.0 * T + pack.J2 + 4.0 * M
    # J2 G reproduces the x-row of G in its y-row; consistency requires
    # the y-row of the right-hand side to be (I, 0, 0).
    consistency = VectorOneForm(
        n, [[rhs.matrix[n + a][b] - (ex.ONE if a == b else ex.ZERO)
             for b in range(3 * n)] for a in range(n)]
        + [[ex.ZERO] * (3 * n)] * (2 * n))
    res = max_residual(consistency, points)
    if res > tol:
        raise NoSolution(f"J2 G = 2T + J2 + 4[J1,S] is infeasible (residual {res:.3e})")

    # z-row of the RHS is (2A, -2I, 0) with A the pinned y-row x-block of G.
    A = [[ex.mul(ex.Const(0.5), rhs.matrix[2 * n + a][b]) for b in range(n)]
         for a in range(n)]
    # [C1,G] = 0 needs A free of z; B = sum_c (dA/dy_c) z_c then gives
    # y.d_z B = A by Euler homogeneity.
    z_dep = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                dAz = A[a][b].diff("z", c)
                z_dep = max(z_dep, max(abs(ex.evaluate(dAz, p)) for p in points))
    if z_dep > tol:
        raise ValidationFailed(
            f"the pinned block depends on z (residual {z_dep:.3e}); [C1,G] = 0 is unattainable")
    B0 = [[ex.add(*(ex.mul(A[a][b].diff("y", c), ex.coord("z", c)) for c in range(n)))
           for b in range(n)] for a in range(n)]
    # The associated spray h S' = (y, Ay/2, By/2) must be S, so B is pinned
    # along y: B y = 2 S_z.  Correct B0 by a rank-one term supported on y.
    ysq = ex.add(*(ex.mul(ex.coord("y", c), ex.coord("y", c)) for c in range(n)))
    inv_ysq = ex.Recip(ysq)
    defect = [ex.add(ex.mul(ex.Const(2.0), S.field.components[2 * n + a]),
                     *(ex.mul(ex.Const(-1.0), B0[a][c], ex.coord("y", c))
                       for c in range(n)))
              for a in range(n)]
    B = [[ex.add(B0[a][b], ex.mul(defect[a], ex.coord("y", b), inv_ysq))
          for b in range(n)] for a in range(n)]

    d = 3 * n
    rows = []
    for a in range(n):
        rows.append([ex.ONE if b == a else ex.ZERO for b in range(d)])
    for a in range(n):
        rows.append([A[a][b] for b in range(n)]
                    + [ex.Const(-1.0) if b == a else ex.ZERO for b in range(n)]
                    + [ex.ZERO] * n)
    for a in range(n):
        rows.append([B[a][b] for b in range(n)] + [ex.ZERO] * n
                    + [ex.Const(-1.0) if b == a else ex.ZERO for b in range(n)])
    conn = Connection(VectorOneForm(n, rows), 1)

    _validate_decomposition(conn, S, T, rhs, points, tol)
    return conn


def _validate_decomposition(conn: Connection, S: SemiSpray, T: VectorOneForm,
                            rhs: VectorOneForm, points, tol: float):
    pack = canonical_pack(conn.n)
    failures = []

    def check(name, obj):
        r = max_residual(obj, points)
        if r > tol:
            failures.append(f"{name} (residual {r:.3e})")

    rep = validate_connection(conn.form, conn.conn_type, points, tol)
    if not rep.passed:
        failures.append("connection axioms")
    if conn.conn_type == 1:
        check("J2 G equation", pack.J2.compose(conn.form) - rhs)
    check("homogeneity [C2,G]", fn_bracket_vf(pack.C2, conn.form))
    if conn.conn_type == 1:
        check("[C1,G]", fn_bracket_vf(pack.C1, conn.form))
    check("associated spray", associated_semispray(
        conn, reference_semispray(conn.n, conn.conn_type)).field - S.field)
    check("strong torsion", strong_torsion(conn) - T)
    if failures:
        raise ValidationFailed("postconditions failed: " + "; ".join(failures))


def catz_decompose_type2(S: SemiSpray, T: VectorOneForm, points,
                         tol: float = 1e-8) -> Connection:
    """G = (1/3){2[J2,S] + T + I}: the unique homogeneous type-2 connection
    with associated spray S and strong torsion T."""
    n = S.field.n
    pack = canonical_pack(n)
    if S.spray_type != 2:
        raise TypeMismatch("catz_decompose_type2 needs a spray of type 2")
    ok, res = is_spray(S, points, tol)
    if not ok:
        raise PreconditionFailed(f"S is not a spray (residual {res:.3e})", res)
    ok, res = is_semibasic(T, "pi1", points, tol)
    if not ok:
        raise PreconditionFailed(f"T is not pi1-semi-basic (residual {res:.3e})", res)
    res = max_residual(T.apply(S.field), points)
    if res > tol:
        raise PreconditionFailed(f"T(S) != 0 (residual {res:.3e})", res)
    form = (1.0 / 3.0) * (2.0 * fn_bracket_fv(pack.J2, S.field) + T
                          + VectorOneForm.identity(n))
    conn = Connection(form, 2)
    _validate_decomposition(conn, S, T, pack.J2.compose(form), points, tol)
    return conn


def conjugate_pair(S: SemiSpray, points, tol: float = 1e-8):
    """The conjugate connections of a spray of type 2:
    G1 = (1/3){2[J2,S] + 2[[J1,S],S] - I},  G2 = (1/3){2[J2,S] + I}."""
    n = S.field.n
    pack = canonical_pack(n)
    if S.spray_type != 2:
        raise TypeMismatch("conjugate_pair needs a spray of type 2")
    ok, res = is_spray(S, points, tol)
    if not ok:
        raise PreconditionFailed(f"S is not a spray (residual {res:.3e})", res)
    B2 = fn_bracket_fv(pack.J2, S.field)
    B11 = fn_bracket_fv(fn_bracket_fv(pack.J1, S.field), S.field)
    ident = VectorOneForm.identity(n)
    g1 = Connection((1.0 / 3.0) * (2.0 * B2 + 2.0 * B11 - ident), 1)
    g2 = Connection((1.0 / 3.0) * (2.0 * B2 + ident), 2)
    for g in (g1, g2):
        ensure_valid(g, points, tol)
        hres = max_residual(fn_bracket_vf(pack.C2, g.form), points)
        if hres > tol:
            raise ValidationFailed(
                f"conjugate type-{g.conn_type} connection is not homogeneous "
                f"(residual {hres:.3e})")
    return g1, g2
