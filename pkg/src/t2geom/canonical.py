"""Canonical tensors J1, J2, canonical fields C1, C2, homogeneity and
semi-basic predicates, semi-sprays/sprays, and the identity suite for the
structure equations of the canonical objects.

Coordinate realizations (blockwise per index i):
    J1 (p,q,r) = (0,0,p)      J2 (p,q,r) = (0,p,2q)
    C1 = (0,0,y)              C2 = (0,y,2z)
The factor 2 in J2's z block and in C2 is pinned by J2^2 = 2 J1 and
J2 C2 = 2 C1; nothing else satisfies the structure equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .calculus import (fn_bracket_ff, fn_bracket_fv, fn_bracket_vf,
                       fn_bracket_vf2, d_K, lie_bracket)
from .errors import ConstraintError, DegreeError
from .fields import (ScalarPForm, VectorField, VectorOneForm, VectorTwoForm,
                     increasing_tuples)
from .linalg import kernel_basis, subspace_distance
from .report import VerificationReport
from .sampling import max_residual


@dataclass(frozen=True)
class CanonicalPack:
    n: int
    J1: VectorOneForm
    J2: VectorOneForm
    C1: VectorField
    C2: VectorField


def canonical_pack(n: int) -> CanonicalPack:
    if n < 1:
        raise ValueError("n must be >= 1")
    d = 3 * n
    j1 = [[ex.ZERO] * d for _ in range(d)]
    j2 = [[ex.ZERO] * d for _ in range(d)]
    for a in range(n):
        j1[2 * n + a][a] = ex.ONE
        j2[n + a][a] = ex.ONE
        j2[2 * n + a][n + a] = ex.Const(2.0)
    c1 = [ex.ZERO] * d
    c2 = [ex.ZERO] * d
    for a in range(n):
        c1[2 * n + a] = ex.coord("y", a)
        c2[n + a] = ex.coord("y", a)
        c2[2 * n + a] = ex.mul(ex.Const(2.0), ex.coord("z", a))
    return CanonicalPack(n, VectorOneForm(n, j1), VectorOneForm(n, j2),
                         VectorField(n, c1), VectorField(n, c2))


@dataclass(frozen=True)
class SemiSpray:
    field: VectorField
    spray_type: int  # 1 or 2


def make_semispray(n: int, spray_type: int, completion: dict) -> SemiSpray:
    """Build a semi-spray from the non-forced component blocks.

    Type 1 forces the x block to y (completion supplies "y" and "z");
    type 2 forces x to y and y to z (completion supplies "z").  A forced
    block may be supplied redundantly but must match exactly.
    """
    if spray_type not in (1, 2):
        raise ConstraintError(f"spray type must be 1 or 2, got {spray_type}")
    forced = {"x": [ex.coord("y", a) for a in range(n)]}
    free = ["y", "z"]
    if spray_type == 2:
        forced["y"] = [ex.coord("z", a) for a in range(n)]
        free = ["z"]
    comps = []
    for block in ("x", "y", "z"):
        if block in forced:
            got = completion.get(block)
            if got is not None:
                got = [ex.as_expr(c) for c in got]
                for a, (u, v) in enumerate(zip(got, forced[block])):
                    if not ex.structurally_equal(u, v):
                        raise ConstraintError(
                            f"{block}[{a}] is forced by the semi-spray constraint")
            comps.extend(forced[block])
        else:
            got = completion.get(block)
            if got is None:
                raise ConstraintError(f"completion must supply the {block} block")
            if len(got) != n:
                raise ConstraintError(f"{block} block must have {n} components")
            comps.extend(ex.as_expr(c) for c in got)
    assert set(completion) <= {"x", "y", "z"}
    del free
    return SemiSpray(VectorField(n, comps), spray_type)


def is_spray(S: SemiSpray, points, tol: float = 1e-9):
    """S is a spray iff [C2, S] = S; returns (verdict, max residual)."""
    pack = canonical_pack(S.field.n)
    res = max_residual(lie_bracket(pack.C2, S.field) - S.field, points)
    return res <= tol, res


def semispray_residual(S: VectorField, spray_type: int, points) -> float:
    """Residual of J_k S = C_k for the given type."""
    pack = canonical_pack(S.n)
    if spray_type == 1:
        return max_residual(pack.J1.apply(S) - pack.C1, points)
    return max_residual(pack.J2.apply(S) - pack.C2, points)


def is_homogeneous(obj, r: int, points, tol: float = 1e-9):
    """Homogeneity of degree r: d_{C2} w = r w for scalar forms,
    [C2, L] = (r-1) L for vector forms.  Returns (verdict, max residual)."""
    if isinstance(obj, ScalarPForm):
        pack = canonical_pack(obj.n)
        res = max_residual(d_K(pack.C2, obj) - float(r) * obj, points)
        return res <= tol, res
    if isinstance(obj, VectorField):
        pack = canonical_pack(obj.n)
        res = max_residual(lie_bracket(pack.C2, obj) - float(r - 1) * obj, points)
        return res <= tol, res
    if isinstance(obj, VectorOneForm):
        pack = canonical_pack(obj.n)
        res = max_residual(fn_bracket_vf(pack.C2, obj) - float(r - 1) * obj, points)
        return res <= tol, res
    if isinstance(obj, VectorTwoForm):
        pack = canonical_pack(obj.n)
        res = max_residual(fn_bracket_vf2(pack.C2, obj) - float(r - 1) * obj, points)
        return res <= tol, res
    raise DegreeError(f"homogeneity undefined for {type(obj).__name__}")


def _insertion_residual(obj, J: VectorOneForm, points) -> float:
    """Max residual of inserting J e_a into the first slot of obj."""
    n = obj.n
    d = 3 * n
    worst = 0.0
    if isinstance(obj, ScalarPForm):
        if obj.degree == 0:
            return 0.0
        for p in points:
            e = ex.Evaluator(p)
            jm = J.evaluate(p)
            for a in range(d):
                v = jm[:, a]
                if not np.any(v):
                    continue
                for rest in increasing_tuples(d, obj.degree - 1):
                    total = 0.0
                    for c in range(d):
                        if v[c] == 0.0:
                            continue
                        coeff = obj.coeff((c,) + rest)
                        if ex.is_zero(coeff):
                            continue
                        total += v[c] * e(coeff)
                    worst = max(worst, abs(total))
        return worst
    if isinstance(obj, VectorOneForm):
        return max_residual(obj.compose(J), points)
    if isinstance(obj, VectorTwoForm):
        for p in points:
            e = ex.Evaluator(p)
            jm = J.evaluate(p)
            for a in range(d):
                v = jm[:, a]
                if not np.any(v):
                    continue
                for b in range(d):
                    total = np.zeros(d)
                    for c in range(d):
                        if v[c] == 0.0:
                            continue
                        total += v[c] * np.array([e(u) for u in obj.component(c, b)])
                    worst = max(worst, float(np.max(np.abs(total))))
        return worst
    raise DegreeError(f"semi-basic test undefined for {type(obj).__name__}")


def is_semibasic(obj, which: str, points, tol: float = 1e-9):
    """which = "pi1" or "pi2".  Scalar forms: i_{J1 X} w = 0 (resp. J2).
    Vector forms: J2 L = 0 and i_{J1 X} L = 0 (resp. J1 L = 0, i_{J2 X} L = 0).
    Returns (verdict, max residual)."""
    if which not in ("pi1", "pi2"):
        raise ValueError("which must be 'pi1' or 'pi2'")
    pack = canonical_pack(obj.n)
    J_ins = pack.J1 if which == "pi1" else pack.J2
    res = _insertion_residual(obj, J_ins, points)
    if isinstance(obj, (VectorOneForm, VectorTwoForm)):
        J_post = pack.J2 if which == "pi1" else pack.J1
        if isinstance(obj, VectorOneForm):
            res = max(res, max_residual(J_post.compose(obj), points))
        else:
            post = VectorTwoForm(obj.n, {k: J_post.apply_exprs(list(vec))
                                         for k, vec in obj.coeffs.items()})
            res = max(res, max_residual(post, points))
    return res <= tol, res


def random_semispray(n: int, spray_type: int, rng, max_terms: int = 3) -> SemiSpray:
    """Semi-spray with random polynomial completion blocks."""
    d = 3 * n

    def poly():
        terms = [ex.Const(float(rng.integers(-2, 3)))]
        for _ in range(max_terms):
            c = float(rng.integers(-2, 3))
            j = int(rng.integers(0, d))
            k = int(rng.integers(0, d))
            terms.append(ex.mul(ex.Const(c), ex.coord_global(n, j), ex.coord_global(n, k)))
        return ex.add(*terms)

    completion = {"z": [poly() for _ in range(n)]}
    if spray_type == 1:
        completion["y"] = [poly() for _ in range(n)]
    return make_semispray(n, spray_type, completion)


def verify_identity_suite(n: int, points, tol: float = 1e-9, seed: int = 0,
                          spray_samples: int = 5) -> VerificationReport:
    """Check Eqs (1)-(5) unconditionally (exact zero for the constant
    objects), Eq (6) on sampled type-1 semi-sprays and Eqs (6)-(8) on
    sampled type-2 semi-sprays."""
    pack = canonical_pack(n)
    J1, J2, C1, C2 = pack.J1, pack.J2, pack.C1, pack.C2
    rep = VerificationReport(scenario=f"identity-suite-n{n}")
    npts = len(points)

    def check(cid, anchor, obj, exact=False):
        res = max_residual(obj, points)
        rep.add(cid, anchor, res, 0.0 if exact else tol, npts)

    # Eq (1): ranks and Ker/Im coincidences (numeric, per point)
    worst_rank = 0.0
    worst_sub = 0.0
    for p in points:
        m1 = J1.evaluate(p)
        m2 = J2.evaluate(p)
        worst_rank = max(worst_rank,
                         abs(np.linalg.matrix_rank(m1) - n),
                         abs(np.linalg.matrix_rank(m2) - 2 * n))
        worst_sub = max(worst_sub,
                        subspace_distance(kernel_basis(m1), m2[:, [j for j in range(3 * n)
                                                                   if np.any(m2[:, j])]]),
                        subspace_distance(kernel_basis(m2), m1[:, :n]))
    rep.add("eq1.rank", "Eq (1)", worst_rank, 0.0, npts)
    rep.add("eq1.ker-im", "Eq (1)", worst_sub, tol, npts)

    # Eq (2): algebra of J1, J2 (constant objects, exact)
    check("eq2.J1J1", "Eq (2)", J1.compose(J1), exact=True)
    check("eq2.J2J2-2J1", "Eq (2)", J2.compose(J2) - 2.0 * J1, exact=True)
    check("eq2.J1J2", "Eq (2)", J1.compose(J2), exact=True)
    check("eq2.J2J1", "Eq (2)", J2.compose(J1), exact=True)
    check("eq2.J1cubed", "Eq (2)", J1.compose(J1).compose(J1), exact=True)

    # Eq (3): FN brackets of the canonical tensors
    check("eq3.[J1,J1]", "Eq (3)", fn_bracket_ff(J1, J1), exact=True)
    check("eq3.[J2,J2]", "Eq (3)", fn_bracket_ff(J2, J2), exact=True)
    check("eq3.[J1,J2]", "Eq (3)", fn_bracket_ff(J1, J2), exact=True)

    # Eq (4): canonical fields
    check("eq4.J1C1", "Eq (4)", J1.apply(C1), exact=True)
    check("eq4.J2C1", "Eq (4)", J2.apply(C1), exact=True)
    check("eq4.J1C2", "Eq (4)", J1.apply(C2), exact=True)
    check("eq4.J2C2-2C1", "Eq (4)", J2.apply(C2) - 2.0 * C1, exact=True)
    check("eq4.[C1,C2]-C1", "Eq (4)", lie_bracket(C1, C2) - C1, exact=True)

    # Eq (5): Lie derivatives of the canonical tensors
    check("eq5.[C1,J1]", "Eq (5)", fn_bracket_vf(C1, J1), exact=True)
    check("eq5.[C1,J2]+J1", "Eq (5)", fn_bracket_vf(C1, J2) + J1, exact=True)
    check("eq5.[C2,J1]+2J1", "Eq (5)", fn_bracket_vf(C2, J1) + 2.0 * J1, exact=True)
    check("eq5.[C2,J2]+J2", "Eq (5)", fn_bracket_vf(C2, J2) + J2, exact=True)

    rng = np.random.default_rng(seed)
    for k in range(spray_samples):
        S1 = random_semispray(n, 1, rng).field
        B1 = fn_bracket_fv(J1, S1)
        B2 = fn_bracket_fv(J2, S1)
        check(f"eq6.s{k}.J1[J1,S]", "Eq (6)", J1.compose(B1))
        check(f"eq6.s{k}.J1[J2,S]-J1", "Eq (6)", J1.compose(B2) - J1)
    for k in range(spray_samples):
        S2 = random_semispray(n, 2, rng).field
        B1 = fn_bracket_fv(J1, S2)
        B2 = fn_bracket_fv(J2, S2)
        check(f"eq7.s{k}.J1[J1,S]", "Eq (7)", J1.compose(B1))
        check(f"eq7.s{k}.J1[J2,S]-J1", "Eq (7)", J1.compose(B2) - J1)
        check(f"eq7.s{k}.J2[J1,S]-2J1", "Eq (7)", J2.compose(B1) - 2.0 * J1)
        check(f"eq7.s{k}.J2[J2,S]-J2", "Eq (7)", J2.compose(B2) - J2)
        check(f"eq8.s{k}.[J2,S]J1+2J1", "Eq (8)", B2.compose(J1) + 2.0 * J1)
        check(f"eq8.s{k}.[J2,S]J2-2[J1,S]+J2", "Eq (8)",
              B2.compose(J2) - 2.0 * B1 + J2)
    return rep
