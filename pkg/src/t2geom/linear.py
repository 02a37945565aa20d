"""Linear connections on T2M given by chart coefficients, the fiber maps
phi = DC1 and psi = DC2 on vertical fields, regularity, and the nonlinear
connections they induce.

A linear connection is D_X Y = X.grad(Y) + Gcoef(X, Y) where Gcoef is
bilinear over functions with expression coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .calculus import fn_bracket_vf
from .canonical import canonical_pack, is_homogeneous
from .connections import (Connection, associated_semispray, reference_semispray,
                          strong_torsion, validate_connection)
from .errors import NotRegular, PreconditionFailed, SchemaError, ValidationFailed
from .fields import VectorField, VectorOneForm
from .linalg import sym_inverse
from .report import VerificationReport
from .sampling import max_residual


@dataclass(frozen=True)
class LinearConnection:
    """Coefficients coef[k][i][j]: the k-th component of Gcoef(e_i, e_j)."""
    n: int
    coef: tuple
    domain: str = ""  # human-readable domain restriction, e.g. "y nonzero"

    @classmethod
    def from_lists(cls, n: int, coef, domain: str = "") -> "LinearConnection":
        d = 3 * n
        frozen = tuple(tuple(tuple(coef[k][i][j] for j in range(d))
                             for i in range(d)) for k in range(d))
        return cls(n, frozen, domain)

    @classmethod
    def flat(cls, n: int) -> "LinearConnection":
        d = 3 * n
        zero = [[[ex.ZERO] * d for _ in range(d)] for _ in range(d)]
        return cls.from_lists(n, zero)

    def to_dict(self) -> dict:
        d = 3 * self.n
        return {
            "n": self.n,
            "domain": self.domain,
            "coef": [[[ex.to_ast(self.coef[k][i][j]) for j in range(d)]
                      for i in range(d)] for k in range(d)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearConnection":
        try:
            n = int(data["n"])
            raw = data["coef"]
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"malformed linear connection: {e}", "/") from e
        d = 3 * n
        if len(raw) != d or any(len(r) != d for r in raw):
            raise SchemaError("coefficient array must be 3n x 3n x 3n", "/coef")
        coef = [[[ex.from_ast(raw[k][i][j]) for j in range(d)]
                 for i in range(d)] for k in range(d)]
        return cls.from_lists(n, coef, str(data.get("domain", "")))


@dataclass(frozen=True)
class RegularityCertificate:
    kind: str                       # "J1" or "J2"
    parallel_residual: float
    min_abs_det: float
    condition_numbers: tuple = field(default_factory=tuple)
    det_floor: float = 1e-8
    parallel_tol: float = 1e-9

    @property
    def verdict(self) -> bool:
        return (self.parallel_residual < self.parallel_tol
                and self.min_abs_det > self.det_floor
                and all(np.isfinite(c) for c in self.condition_numbers))


def covariant_derivative(D: LinearConnection, X: VectorField,
                         Y: VectorField) -> VectorField:
    """D_X Y = X.grad(Y) + Gcoef(X, Y)."""
    n = D.n
    d = 3 * n
    comps = []
    for k in range(d):
        terms = [ex.mul(X.components[i], ex.diff_global(Y.components[k], n, i))
                 for i in range(d)]
        terms += [ex.mul(D.coef[k][i][j], X.components[i], Y.components[j])
                  for i in range(d) for j in range(d)]
        comps.append(ex.add(*terms))
    return VectorField(n, comps)


def dc_matrix(D: LinearConnection, C: VectorField) -> VectorOneForm:
    """The vector 1-form X -> D_X C (function-linear in X)."""
    n = D.n
    d = 3 * n
    mat = [[ex.add(ex.diff_global(C.components[k], n, i),
                   *(ex.mul(D.coef[k][i][j], C.components[j]) for j in range(d)))
            for i in range(d)] for k in range(d)]
    return VectorOneForm(n, mat)


def _covariant_tensor_derivative(D: LinearConnection, K: VectorOneForm):
    """(DK)^k_{ij} = d_i K^k_j + sum_m coef[k][i][m] K^m_j - K^k_m coef[m][i][j]."""
    n = D.n
    d = 3 * n
    out = []
    for k in range(d):
        rows = []
        for i in range(d):
            cols = []
            for j in range(d):
                terms = [ex.diff_global(K.matrix[k][j], n, i)]
                terms += [ex.mul(D.coef[k][i][m], K.matrix[m][j]) for m in range(d)]
                terms += [ex.mul(ex.Const(-1.0), K.matrix[k][m], D.coef[m][i][j])
                          for m in range(d)]
                cols.append(ex.add(*terms))
            rows.append(cols)
        out.append(rows)
    return out


def parallel_residual(D: LinearConnection, K: VectorOneForm, points) -> float:
    """max |(DK)(e_i, e_j)| over sample points and basis pairs."""
    dk = _covariant_tensor_derivative(D, K)
    d = 3 * D.n
    worst = 0.0
    for k in range(d):
        for i in range(d):
            for j in range(d):
                e = dk[k][i][j]
                if ex.is_zero(e):
                    continue
                worst = max(worst, max(abs(ex.evaluate(e, p)) for p in points))
    return worst


def parallel_check(D: LinearConnection, K: VectorOneForm, points,
                   tol: float = 1e-9, label: str = "K") -> VerificationReport:
    rep = VerificationReport(scenario="parallelism")
    rep.add(f"linear.D{label}", "section 3, parallel tensor test",
            parallel_residual(D, K, points), tol, len(points))
    return rep


def fiber_maps(D: LinearConnection, points=None, tol: float = 1e-9):
    """(phi, psi) as expression matrices: phi is D_.C1 on the z-block (n x n),
    psi is D_.C2 on the (y, z)-block (2n x 2n).

    With points given, verifies that the image of each restriction stays in
    the matching vertical block (the containment that DJ = 0 guarantees).
    """
    n = D.n
    pack = canonical_pack(n)
    M1 = dc_matrix(D, pack.C1)
    M2 = dc_matrix(D, pack.C2)
    if points is not None:
        leak1 = max((max(abs(ex.evaluate(M1.matrix[k][2 * n + b], p)) for p in points)
                     for k in range(2 * n) for b in range(n)
                     if not ex.is_zero(M1.matrix[k][2 * n + b])), default=0.0)
        if leak1 > tol:
            raise PreconditionFailed(
                f"D_X C1 leaves the pi1-vertical block for vertical X "
                f"(residual {leak1:.3e}); DJ1 = 0 fails", leak1)
        leak2 = max((max(abs(ex.evaluate(M2.matrix[k][n + b], p)) for p in points)
                     for k in range(n) for b in range(2 * n)
                     if not ex.is_zero(M2.matrix[k][n + b])), default=0.0)
        if leak2 > tol:
            raise PreconditionFailed(
                f"D_X C2 leaves the pi2-vertical block for vertical X "
                f"(residual {leak2:.3e}); DJ2 = 0 fails", leak2)
    phi = [[M1.matrix[2 * n + a][2 * n + b] for b in range(n)] for a in range(n)]
    psi = [[M2.matrix[n + a][n + b] for b in range(2 * n)] for a in range(2 * n)]
    return phi, psi


def _fiber_matrix_at(mat, point):
    return np.array([[ex.evaluate(e, point) for e in row] for row in mat])


def is_regular(D: LinearConnection, kind: str, points,
               tol: float = 1e-9, det_floor: float = 1e-8) -> RegularityCertificate:
    """Certificate combining the parallel test with fiber-map invertibility."""
    if kind not in ("J1", "J2"):
        raise ValueError(f"kind must be 'J1' or 'J2', got {kind!r}")
    pack = canonical_pack(D.n)
    J = pack.J1 if kind == "J1" else pack.J2
    pres = parallel_residual(D, J, points)
    try:
        phi, psi = fiber_maps(D, points, tol)
    except PreconditionFailed:
        return RegularityCertificate(kind, pres, 0.0, (), det_floor, tol)
    mat = phi if kind == "J1" else psi
    dets, conds = [], []
    for p in points:
        m = _fiber_matrix_at(mat, p)
        dets.append(abs(np.linalg.det(m)))
        conds.append(np.linalg.cond(m) if dets[-1] > 0 else np.inf)
    return RegularityCertificate(kind, pres, min(dets), tuple(conds), det_floor, tol)


def induced_connection(D: LinearConnection, kind: str, points,
                       tol: float = 1e-9) -> Connection:
    """G2 = I - 2 phi^{-1} o DC1 (kind J1) or G1 = I - 2 psi^{-1} o DC2 (kind J2)."""
    cert = is_regular(D, kind, points, tol)
    if not cert.verdict:
        raise NotRegular(
            f"connection is not {kind}-regular (parallel residual "
            f"{cert.parallel_residual:.3e}, min |det| {cert.min_abs_det:.3e})")
    n = D.n
    d = 3 * n
    pack = canonical_pack(n)
    phi, psi = fiber_maps(D)
    if kind == "J1":
        M = dc_matrix(D, pack.C1)
        inv = sym_inverse(phi)
        off, size, conn_type = 2 * n, n, 2
    else:
        M = dc_matrix(D, pack.C2)
        inv = sym_inverse(psi)
        off, size, conn_type = n, 2 * n, 1
    # the image of DC lies in the vertical block, so inv acts on those rows
    rows = [[ex.ONE if i == j else ex.ZERO for j in range(d)] for i in range(d)]
    for a in range(size):
        for j in range(d):
            corr = ex.add(*(ex.mul(inv[a][b], M.matrix[off + b][j])
                            for b in range(size)))
            rows[off + a][j] = ex.add(rows[off + a][j],
                                      ex.mul(ex.Const(-2.0), corr))
    conn = Connection(VectorOneForm(n, rows), conn_type)
    rep = validate_connection(conn.form, conn_type, points, max(tol, 1e-9))
    if not rep.passed:
        worst = max(c.max_residual for c in rep.failures)
        raise ValidationFailed(
            f"induced form fails the type-{conn_type} connection axioms "
            f"(residual {worst:.3e})")
    return conn


def homogeneity_criterion(D: LinearConnection, kind: str, points,
                          tol: float = 1e-8):
    """Evaluates both sides of the homogeneity equivalence for the induced
    connection: ([C2, DC] = 0, [C2, G] = 0).  The two booleans must agree."""
    conn = induced_connection(D, kind, points)  # raises NotRegular when not
    pack = canonical_pack(D.n)
    C = pack.C1 if kind == "J1" else pack.C2
    crit = max_residual(fn_bracket_vf(pack.C2, dc_matrix(D, C)), points) <= tol
    homog, _ = is_homogeneous(conn.form, 1, points, tol)
    return crit, homog


def torsion_residual(D: LinearConnection, points) -> float:
    """max |Gcoef(X,Y) - Gcoef(Y,X)| on basis pairs: the torsion of D
    evaluated on coordinate fields (whose Lie bracket vanishes)."""
    d = 3 * D.n
    worst = 0.0
    for k in range(d):
        for i in range(d):
            for j in range(i + 1, d):
                e = ex.add(D.coef[k][i][j],
                           ex.mul(ex.Const(-1.0), D.coef[k][j][i]))
                if ex.is_zero(e):
                    continue
                worst = max(worst, max(abs(ex.evaluate(e, p)) for p in points))
    return worst


def prop3_obstruction(D: LinearConnection, points,
                      tol: float = 1e-9) -> VerificationReport:
    """For a torsion-free D with DJ1 = 0, the fiber map vanishes on the whole
    pi1-vertical block, so D cannot be J1-regular."""
    tres = torsion_residual(D, points)
    if tres > tol:
        raise PreconditionFailed(f"D has torsion (residual {tres:.3e})", tres)
    pack = canonical_pack(D.n)
    pres = parallel_residual(D, pack.J1, points)
    if pres > tol:
        raise PreconditionFailed(f"DJ1 != 0 (residual {pres:.3e})", pres)
    rep = VerificationReport(scenario="no-torsion obstruction")
    rep.add("linear.phi-J1", "section 3, vanishing of the fiber map",
            max_residual(dc_matrix(D, pack.C1).compose(pack.J1), points),
            tol, len(points))
    cert = is_regular(D, "J1", points, tol)
    rep.add("linear.not-J1-regular", "section 3, no torsion-free regularity",
            0.0 if not cert.verdict else 1.0, tol, len(points))
    return rep


def prop4_relation(D: LinearConnection, points, tol: float = 1e-8):
    """For a J1-regular D with [C2, DC1] = 0: the induced G2, the spray-built
    G2bar, the strong torsion T of G2, and the residual of T - 3(G2 - G2bar).

    When T vanishes the two connections coincide and the closed form
    DC1 = (1/3) phi o (I - [J2,S]) is verified as well.
    """
    pack = canonical_pack(D.n)
    conn = induced_connection(D, "J1", points)
    crit = max_residual(fn_bracket_vf(pack.C2, dc_matrix(D, pack.C1)), points)
    if crit > tol:
        raise PreconditionFailed(f"[C2, DC1] != 0 (residual {crit:.3e})", crit)
    from .calculus import fn_bracket_fv
    S = associated_semispray(conn, reference_semispray(D.n, 2))
    bar = Connection((1.0 / 3.0) * (2.0 * fn_bracket_fv(pack.J2, S.field)
                                    + VectorOneForm.identity(D.n)), 2)
    T = strong_torsion(conn)
    rep = VerificationReport(scenario="induced vs spray-built connection")
    npts = len(points)
    rep.add("linear.T-3(G2-G2bar)", "section 3, torsion difference formula",
            max_residual(T - 3.0 * (conn.form - bar.form), points), tol, npts)
    rep.add("linear.G2S-S", "section 3, shared associated spray",
            max_residual(conn.form.apply(S.field) - S.field, points), tol, npts)
    rep.add("linear.G2barS-S", "section 3, shared associated spray",
            max_residual(bar.form.apply(S.field) - S.field, points), tol, npts)
    t_res = max_residual(T, points)
    if t_res <= tol:
        phi, _ = fiber_maps(D)
        n = D.n
        lhs = dc_matrix(D, pack.C1)
        br = fn_bracket_fv(pack.J2, S.field)
        diff = VectorOneForm.identity(n) - br
        # (1/3) phi o (I - [J2,S]): phi acts on the z-rows of its argument
        rows = [[ex.ZERO] * (3 * n) for _ in range(3 * n)]
        for a in range(n):
            for j in range(3 * n):
                rows[2 * n + a][j] = ex.mul(
                    ex.Const(1.0 / 3.0),
                    ex.add(*(ex.mul(phi[a][b], diff.matrix[2 * n + b][j])
                             for b in range(n))))
        rep.add("linear.DC1-closed-form", "section 3, coincidence closed form",
                max_residual(lhs - VectorOneForm(n, rows), points), tol, npts)
    return conn, bar, T, rep


def _per_index_coef(n: int, x_weight: float, y_weight: float) -> LinearConnection:
    """Family member: Gcoef(X,Y)^{x_a} = w(X)_a Y_{x_a} / y_a and
    ^{z_a} = w(X)_a Y_{z_a} / y_a with w(X) = x_weight X_z + y_weight X_y."""
    d = 3 * n
    coef = [[[ex.ZERO] * d for _ in range(d)] for _ in range(d)]
    for a in range(n):
        inv_y = ex.Recip(ex.coord("y", a))
        for (i_block, w) in ((2, x_weight), (1, y_weight)):
            if w == 0.0:
                continue
            scale = ex.mul(ex.Const(w), inv_y)
            coef[a][i_block * n + a][a] = scale
            coef[2 * n + a][i_block * n + a][2 * n + a] = scale
    return LinearConnection.from_lists(n, coef, domain="y nonzero")


def search_prop4_witness(n: int, points, tol: float = 1e-8) -> LinearConnection:
    """Scan a small coefficient family for a J1-regular member whose induced
    connection is homogeneous ([C2, DC1] = 0)."""
    pack = canonical_pack(n)
    for xw in (1.0, -1.0, 2.0):
        for yw in (-1.0, 0.0, 1.0, -2.0):
            D = _per_index_coef(n, xw, yw)
            cert = is_regular(D, "J1", points, tol)
            if not cert.verdict:
                continue
            crit = max_residual(fn_bracket_vf(pack.C2, dc_matrix(D, pack.C1)),
                                points)
            if crit <= tol:
                return D
    raise ValidationFailed("no eligible member found in the searched family")


def catalog(n: int, points) -> dict:
    """Named linear connections used by the built-in scenarios."""
    return {
        "flat": LinearConnection.flat(n),
        "sample": _per_index_coef(n, 1.0, 0.0),
        "prop4-witness": search_prop4_witness(n, points),
    }
