"""Finslerian 2-forms on T2M: validation, the induced fiber metric, the
energy function, the homogeneous exactness machinery, the canonical spray
defined by i_G O = -dE, the decomposition O = d d_{J2} E + Theta, and the
canonical pair of connections attached to the spray.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .calculus import (d_K, exterior_derivative, fn_bracket_vf,
                       interior_product, lie_bracket)
from .calculus import _interior
from .canonical import (SemiSpray, canonical_pack, is_homogeneous,
                        is_semibasic, is_spray)
from .connections import conjugate_pair, reference_semispray, strong_torsion
from .errors import (ClosednessFailed, InvalidForm, NotSpray,
                     PreconditionFailed, SchemaError, SingularForm,
                     ValidationFailed)
from .fields import ScalarPForm, VectorField, VectorOneForm
from .linalg import sym_solve
from .report import VerificationReport
from .sampling import max_residual


@dataclass(frozen=True)
class FinslerianForm:
    """A scalar 2-form of maximal rank 3n, homogeneous of degree 1, with
    i_{J2} O = 0.  Maximal rank of a skew matrix needs even dimension, so n
    must be even (3n even iff n even)."""
    omega: ScalarPForm
    domain: str = ""

    def __post_init__(self):
        if self.omega.degree != 2:
            raise InvalidForm(f"a Finslerian form has degree 2, got {self.omega.degree}")
        if self.omega.n % 2 != 0:
            raise InvalidForm(
                f"n = {self.omega.n} is odd, so the chart dimension 3n = "
                f"{3 * self.omega.n} is odd and a skew form cannot have "
                f"maximal rank; n must be even")

    @property
    def n(self) -> int:
        return self.omega.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "domain": self.domain,
            "coeffs": {f"{a},{b}": ex.to_ast(c)
                       for (a, b), c in sorted(self.omega.coeffs.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FinslerianForm":
        try:
            n = int(data["n"])
            raw = data["coeffs"]
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"malformed Finslerian form: {e}", "/") from e
        coeffs = {}
        for key, ast in raw.items():
            try:
                a, b = (int(s) for s in key.split(","))
            except ValueError as e:
                raise SchemaError(f"bad coefficient key {key!r}", f"/coeffs/{key}") from e
            coeffs[(a, b)] = ex.from_ast(ast)
        return cls(ScalarPForm(n, 2, coeffs), str(data.get("domain", "")))


def skew_matrix(omega: ScalarPForm, point) -> np.ndarray:
    """The matrix O(e_a, e_b) at a point."""
    d = 3 * omega.n
    e = ex.Evaluator(point)
    m = np.zeros((d, d))
    for (a, b), c in omega.coeffs.items():
        v = e(c)
        m[a, b] = v
        m[b, a] = -v
    return m


def validate_finslerian(F: FinslerianForm, points, tol: float = 1e-9) -> VerificationReport:
    """Per-point rank, homogeneity d_{C2} O = O, and i_{J2} O = 0."""
    omega = F.omega
    n = omega.n
    pack = canonical_pack(n)
    rep = VerificationReport(scenario="finslerian-form")
    npts = len(points)
    worst_defect = 0
    for p in points:
        r = np.linalg.matrix_rank(skew_matrix(omega, p), tol=1e-8)
        worst_defect = max(worst_defect, 3 * n - r)
    rep.add("finsler.rank", "section 4, maximal rank", float(worst_defect), 0.0, npts)
    rep.add("finsler.homogeneity", "section 4, degree-1 homogeneity",
            max_residual(d_K(pack.C2, omega) - omega, points), tol, npts)
    rep.add("finsler.iJ2", "section 4, vanishing J2 contraction",
            max_residual(interior_product(pack.J2, omega), points), tol, npts)
    return rep


def ensure_finslerian(F: FinslerianForm, points, tol: float = 1e-9):
    rep = validate_finslerian(F, points, tol)
    if not rep.passed:
        bad = ", ".join(c.check_id for c in rep.failures)
        raise InvalidForm(f"not a Finslerian form (failed: {bad})")


def induced_metric(F: FinslerianForm, X, Y, point) -> float:
    """g(J2 X, J2 Y) = O(J2 X, Y) for argument vectors X, Y at a point."""
    pack = canonical_pack(F.n)
    j2x = pack.J2.evaluate(point) @ np.asarray(X, dtype=float)
    return F.omega.evaluate(point, j2x, np.asarray(Y, dtype=float))


def metric_symmetry_residual(F: FinslerianForm, points, pairs: int = 20,
                             seed: int = 0) -> float:
    """max |g(J2X, J2Y) - g(J2Y, J2X)| over random argument pairs."""
    rng = np.random.default_rng(seed)
    d = 3 * F.n
    worst = 0.0
    for p in points:
        for _ in range(max(1, pairs // len(points))):
            X = rng.uniform(-1, 1, d)
            Y = rng.uniform(-1, 1, d)
            worst = max(worst, abs(induced_metric(F, X, Y, p)
                                   - induced_metric(F, Y, X, p)))
    return worst


def energy(F: FinslerianForm, S: SemiSpray, points, tol: float = 1e-9) -> ex.Expr:
    """E = (1/2) O(C2, S) = (1/2) i_S i_{C2} O; checks that S is a spray of
    type 2 and that E comes out homogeneous of degree 2."""
    if S.spray_type != 2:
        raise NotSpray("the energy needs a spray of type 2")
    ok, res = is_spray(S, points, tol)
    if not ok:
        raise NotSpray(f"not a spray (residual {res:.3e})")
    pack = canonical_pack(F.n)
    alpha = _interior(pack.C2, F.omega)
    E = ex.mul(ex.Const(0.5), _interior(S.field, alpha).body)
    form = ScalarPForm.function(F.n, E)
    hres = max_residual(d_K(pack.C2, form) - 2.0 * form, points)
    if hres > tol:
        raise ValidationFailed(f"energy is not homogeneous of degree 2 "
                               f"(residual {hres:.3e})")
    return E


def homogeneous_exactness(omega: ScalarPForm, r: int, S: SemiSpray,
                          which: str, points, tol: float = 1e-9):
    """For a semi-basic form of degree p, homogeneous of degree r, with a
    type-2 semi-spray S: checks the commutator identity
    i_S d_{J2} w + d_{J2} i_S w = (r+p) w and the contraction identity
    i_{[S,J2]} w = -p w; when w is d_{J2}-closed and r + p != 0, returns
    the reconstruction (1/(r+p)) d_{J2} i_S w together with the report."""
    p = omega.degree
    n = omega.n
    pack = canonical_pack(n)
    if S.spray_type != 2:
        raise PreconditionFailed("a semi-spray of type 2 is required", 0.0)
    if r + p == 0:
        raise PreconditionFailed(f"degree r = {r} equals -p; the reconstruction "
                                 f"factor 1/(r+p) is undefined", 0.0)
    ok, res = is_semibasic(omega, which, points, tol)
    if not ok:
        raise PreconditionFailed(f"form is not {which}-semi-basic "
                                 f"(residual {res:.3e})", res)
    ok, res = is_homogeneous(omega, r, points, tol)
    if not ok:
        raise PreconditionFailed(f"form is not homogeneous of degree {r} "
                                 f"(residual {res:.3e})", res)

    rep = VerificationReport(scenario="homogeneous exactness")
    npts = len(points)
    dj2 = d_K(pack.J2, omega)
    iS_d = _interior(S.field, dj2)
    d_iS = d_K(pack.J2, _interior(S.field, omega)) if p >= 1 else \
        ScalarPForm(n, 0, {(): ex.ZERO})
    lhs = iS_d + d_iS if p >= 1 else iS_d
    rep.add("exactness.commutator", "section 4, insertion-derivation commutator",
            max_residual(lhs - float(r + p) * omega, points), tol, npts)
    if p >= 1:
        SJ2 = fn_bracket_vf(S.field, pack.J2)
        rep.add("exactness.contraction", "section 4, bracket contraction",
                max_residual(_interior(SJ2, omega) + float(p) * omega, points),
                tol, npts)

    recon = None
    closed = max_residual(dj2, points) <= tol
    if closed and p >= 1:
        recon = (1.0 / (r + p)) * d_K(pack.J2, _interior(S.field, omega))
        rep.add("exactness.reconstruction", "section 4, exactness formula",
                max_residual(recon - omega, points), tol, npts)
    return recon, rep


def canonical_spray(F: FinslerianForm, points, tol: float = 1e-8):
    """The spray G with i_G O = -dE, solved symbolically so that G stays
    differentiable; every point is cross-checked with a dense numeric solve.

    Returns (G, E, report).  Requires i_{C2} O to be d_{J2}-closed.
    """
    n = F.n
    d = 3 * n
    pack = canonical_pack(n)
    omega = F.omega
    ensure_finslerian(F, points, tol)
    ic2 = _interior(pack.C2, omega)
    cres = max_residual(d_K(pack.J2, ic2), points)
    if cres > tol:
        raise ClosednessFailed(f"i_C2 O is not d_J2-closed (residual {cres:.3e})")

    E = energy(F, reference_semispray(n, 2), points, tol)
    dE = exterior_derivative(ScalarPForm.function(n, E))
    # equations: sum_a O(e_a, e_b) G^a = -d_b E for each b
    mat = [[omega.coeff((a, b)) for a in range(d)] for b in range(d)]
    rhs = [ex.mul(ex.Const(-1.0), dE.coeff((b,))) for b in range(d)]
    G = VectorField(n, sym_solve(mat, rhs))

    # numeric dual route, point by point
    worst = 0.0
    for p in points:
        m = skew_matrix(omega, p)
        if abs(np.linalg.det(m)) < 1e-12:
            raise SingularForm(f"skew matrix is singular at a sample point")
        b = np.array([ex.evaluate(r, p) for r in rhs])
        num = np.linalg.solve(m.T, b)
        worst = max(worst, float(np.max(np.abs(num - G.evaluate(p)))))

    rep = VerificationReport(scenario="canonical spray")
    npts = len(points)
    rep.add("spray.dual-route", "section 4, spray solve cross-check",
            worst, tol, npts)
    rep.add("spray.J2G-C2", "section 4, type-2 semi-spray property",
            max_residual(pack.J2.apply(G) - pack.C2, points), tol, npts)
    rep.add("spray.[C2,G]-G", "section 4, degree-2 homogeneity",
            max_residual(lie_bracket(pack.C2, G) - G, points), tol, npts)
    Eform = ScalarPForm.function(n, E)
    rep.add("spray.iC2O-dJ2E", "section 4, contraction equals the energy differential",
            max_residual(ic2 - d_K(pack.J2, Eform), points), tol, npts)
    rep.add("spray.iGO+dE", "section 4, defining equation",
            max_residual(_interior(G, omega) + dE, points), tol, npts)
    rep.add("spray.dGE", "section 4, energy conservation",
            max_residual(d_K(G, Eform), points), tol, npts)
    if not rep.passed:
        bad = ", ".join(c.check_id for c in rep.failures)
        raise ValidationFailed(f"canonical spray postconditions failed: {bad}")
    return G, E, rep


def decompose_omega(F: FinslerianForm, points, tol: float = 1e-8):
    """O = d d_{J2} E + Theta with Theta = i_{C2} dO; returns the two terms
    and a report with the reconstruction residual."""
    n = F.n
    pack = canonical_pack(n)
    ensure_finslerian(F, points, tol)
    E = energy(F, reference_semispray(n, 2), points, tol)
    lead = exterior_derivative(d_K(pack.J2, ScalarPForm.function(n, E)))
    dO = exterior_derivative(F.omega)
    theta = _interior(pack.C2, dO)
    rep = VerificationReport(scenario="form decomposition")
    npts = len(points)
    rep.add("decomp.sum", "section 4, energy-term decomposition",
            max_residual(lead + theta - F.omega, points), tol, npts)
    if max_residual(dO, points) <= tol:
        rep.add("decomp.closed-theta", "section 4, closed case",
                max_residual(theta, points), tol, npts)
    return lead, theta, rep


def canonical_connections(F: FinslerianForm, points, tol: float = 1e-8):
    """The conjugate pair attached to the canonical spray; the type-2 member
    must be torsion free.  Returns (G2, G1, G, report)."""
    G, _, _ = canonical_spray(F, points, tol)
    g1, g2 = conjugate_pair(SemiSpray(G, 2), points, tol)
    rep = VerificationReport(scenario="canonical connections")
    npts = len(points)
    rep.add("conn.G2-torsion", "section 4, torsion-free canonical connection",
            max_residual(strong_torsion(g2), points), tol, npts)
    rep.add("conn.G2-spray", "section 4, associated spray",
            max_residual(g2.form.apply(G) - G, points), tol, npts)
    # the type-1 member does not fix G; its associated spray is h1 G
    h1 = 0.5 * (VectorOneForm.identity(F.n) + g1.form)
    S1 = h1.apply(G)
    pack = canonical_pack(F.n)
    rep.add("conn.G1-spray.J1S-C1", "section 4, type-1 associated spray",
            max_residual(pack.J1.apply(S1) - pack.C1, points), tol, npts)
    rep.add("conn.G1-spray.homogeneous", "section 4, type-1 associated spray",
            max_residual(lie_bracket(pack.C2, S1) - S1, points), tol, npts)
    if not rep.passed:
        bad = ", ".join(c.check_id for c in rep.failures)
        raise ValidationFailed(f"canonical connection postconditions failed: {bad}")
    return g2, g1, G, rep


def prop8_and_remark5(F: FinslerianForm, G: VectorField, points,
                      tol: float = 1e-8) -> VerificationReport:
    """Conservation d_G E = 0; d_G O = 0 when O is closed; the vanishing of
    i_{C1} O whenever it is d_{J2}-closed; and O(C1, S) = 0."""
    n = F.n
    pack = canonical_pack(n)
    omega = F.omega
    rep = VerificationReport(scenario="spray conservation laws")
    npts = len(points)
    E = energy(F, reference_semispray(n, 2), points, tol)
    Eform = ScalarPForm.function(n, E)
    rep.add("prop8.dGE", "section 4, energy conservation",
            max_residual(d_K(G, Eform), points), tol, npts)
    dO = exterior_derivative(omega)
    if max_residual(dO, points) <= tol:
        rep.add("prop8.dGO", "section 4, conservation of a closed form",
                max_residual(d_K(G, omega), points), tol, npts)
    ic1 = _interior(pack.C1, omega)
    if max_residual(d_K(pack.J2, ic1), points) <= tol:
        rep.add("remark5.iC1O", "section 4, vanishing C1 contraction",
                max_residual(ic1, points), tol, npts)
    S = reference_semispray(n, 2)
    rep.add("remark5.O(C1,S)", "section 4, orthogonality of C1 and sprays",
            max_residual(_interior(S.field, ic1), points), tol, npts)
    return rep


def _witness_member(beta: float, gamma: float, alpha: float) -> FinslerianForm:
    """One member of the n = 2 witness family.

    The skew matrix of any 2-form with i_{J2} O = 0 has the block shape
    [[A, B, -D/2], [-B, D, 0], [-D/2, 0, 0]] with B symmetric and D skew;
    degree-1 homogeneity grades the blocks h(1), h(0), h(-1).  The blocks
    here are derived from the energy candidate

        E = (beta/2)|y|^2 - (1/2)(gamma u/s + alpha u^2/s^4),
        u = z_1 y_2 - z_2 y_1,  s = |y|,

    by solving i_{C2} O = d_{J2} E exactly: D = w J with w = -2 dE/du and
    J the standard symplectic 2x2 block, and B the symmetric solution of
    B y = D z - dE/dy.  That makes d_{J2} i_{C2} O = d_{J2}^2 E = 0 hold
    identically, which the canonical spray construction needs.
    """
    n = 2
    y = [ex.coord("y", a) for a in range(n)]
    z = [ex.coord("z", a) for a in range(n)]
    ysq = ex.add(*(ex.mul(c, c) for c in y))
    inv_ysq = ex.Recip(ysq)
    s = ex.Sqrt(ysq)
    u = ex.add(ex.mul(z[0], y[1]), ex.mul(ex.Const(-1.0), z[1], y[0]))
    w = ex.add(ex.mul(ex.Const(gamma), ex.Recip(s)),
               ex.mul(ex.Const(2.0 * alpha), u, inv_ysq, inv_ysq))
    Jz = [z[1], ex.mul(ex.Const(-1.0), z[0])]
    # v = D z - dE/dy = (w/2) J z - beta y - (gamma u / 2 s^3) y
    #                   - (2 alpha u^2 / |y|^6) y
    ycoef = ex.add(ex.Const(-beta),
                   ex.mul(ex.Const(-0.5 * gamma), u, ex.Recip(ex.mul(s, ysq))),
                   ex.mul(ex.Const(-2.0 * alpha), u, u, inv_ysq, inv_ysq, inv_ysq))
    v = [ex.add(ex.mul(ex.Const(0.5), w, Jz[a]), ex.mul(ycoef, y[a]))
         for a in range(n)]
    vy = ex.add(*(ex.mul(v[a], y[a]) for a in range(n)))
    # symmetric B with B y = v: (v y^T + y v^T)/|y|^2 - (v.y) y y^T/|y|^4
    B = [[ex.add(ex.mul(ex.add(ex.mul(v[a], y[b]), ex.mul(y[a], v[b])), inv_ysq),
                 ex.mul(ex.Const(-1.0), vy, y[a], y[b], inv_ysq, inv_ysq))
          for b in range(n)] for a in range(n)]
    om = ScalarPForm(n, 2)
    for a in range(n):
        for b in range(n):
            om.set((a, n + b), B[a][b])          # dx_a ^ dy_b block
    om.set((n, n + 1), w)                        # dy_1 ^ dy_2: D = w J
    half_w = ex.mul(ex.Const(-0.5), w)
    om.set((0, 2 * n + 1), half_w)               # dx ^ dz block: C = -D/2
    om.set((1, 2 * n), ex.mul(ex.Const(-1.0), half_w))
    return FinslerianForm(om, domain="y nonzero")


def finsler_witness(n: int = 2, points=None, tol: float = 1e-8,
                    grid=((1.0, 1.0, 0.1), (1.0, 0.7, 0.05), (1.0, 1.5, 0.2),
                          (2.0, 1.0, 0.1), (1.0, 0.5, 0.0))) -> FinslerianForm:
    """A Finslerian form on n = 2 searched over the parameterized family of
    _witness_member, accepting the first member of maximal rank at every
    sample point (the other two defining conditions hold by construction)."""
    if n != 2:
        raise InvalidForm("the built-in witness family is defined for n = 2")
    if points is None:
        raise ValueError("sample points are required for the rank search")
    for beta, gamma, alpha in grid:
        F = _witness_member(beta, gamma, alpha)
        if validate_finslerian(F, points, tol).passed:
            return F
    raise ValidationFailed("no member of the witness family reached maximal rank")
