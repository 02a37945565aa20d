"""Scenario catalog and verification suites.

A scenario bundles a chart dimension, a sampling spec, a suite selection and
tolerance overrides; running it produces a deterministic report.  The four
suites cover the identity set of the canonical objects (eq1-8), torsion and
decomposition of nonlinear connections (sec2), linear connections and the
nonlinear connections they induce (sec3), and Finslerian forms (sec4).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import expr as ex
from .calculus import d_K, fn_bracket_fv, fn_bracket_vf, lie_bracket
from .calculus import _interior
from .canonical import (canonical_pack, is_semibasic, make_semispray,
                        verify_identity_suite)
from .connections import (Connection, associated_semispray, catz_decompose_type2,
                          conjugate_pair, decompose_type1, projectors,
                          reference_semispray, strong_torsion,
                          strong_torsion_closed_form, eq17_form,
                          validate_connection)
from .errors import SchemaError
from .fields import ScalarPForm, VectorOneForm
from .finsler import (canonical_connections, canonical_spray, decompose_omega,
                      energy, finsler_witness, homogeneous_exactness,
                      induced_metric, metric_symmetry_residual,
                      prop8_and_remark5, validate_finslerian)
from .linear import (catalog as linear_catalog, homogeneity_criterion,
                     induced_connection, is_regular, parallel_residual,
                     prop3_obstruction, prop4_relation)
from .report import VerificationReport
from .sampling import SampleSpec, max_residual, sample_points

SUITES = ("eq1-8", "sec2", "sec3", "sec4")

# anchors that the built-in scenarios must cover, audited by a test
REQUIRED_ANCHORS = (
    ["Eq (1)", "Eq (2)", "Eq (3)", "Eq (4)", "Eq (5)", "Eq (6)", "Eq (7)",
     "Eq (8)", "Eq (9)", "Eq (10)", "Eq (11)", "Eq (12)", "Eq (13)",
     "Eq (17)", "Eq (18)", "Eq (19)"]
    + ["Prop 1", "Theorem 1", "Def 2", "Theorem 2", "Prop 2", "Prop 3",
       "Prop 4", "Remark 4"]
    + ["Lemma 1", "Prop 5", "Cor 1", "Theorem 3", "Def 3", "Prop 6", "Prop 7",
       "Def 5", "Theorem 4", "Theorem 5", "Prop 8", "Remark 5", "Theorem 6",
       "Theorem 7"]
)


@dataclass(frozen=True)
class Scenario:
    name: str
    n: int
    suites: tuple = ()
    sample: SampleSpec = SampleSpec()
    tol: float = 1e-8

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "suites": list(self.suites),
            "sample": {
                "count": self.sample.count,
                "seed": self.sample.seed,
                "x_bounds": list(self.sample.x_bounds),
                "y_mag_bounds": list(self.sample.y_mag_bounds),
                "z_bounds": list(self.sample.z_bounds),
            },
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise SchemaError("scenario must be a JSON object", "/")
        for key in ("name", "n"):
            if key not in data:
                raise SchemaError(f"missing required field {key!r}", f"/{key}")
        if not isinstance(data["name"], str):
            raise SchemaError("name must be a string", "/name")
        if not isinstance(data["n"], int) or data["n"] < 1:
            raise SchemaError("n must be a positive integer", "/n")
        suites = data.get("suites", [])
        if not isinstance(suites, list):
            raise SchemaError("suites must be a list", "/suites")
        for i, s in enumerate(suites):
            if s not in SUITES:
                raise SchemaError(f"unknown suite {s!r}", f"/suites/{i}")
        raw = data.get("sample", {})
        if not isinstance(raw, dict):
            raise SchemaError("sample must be an object", "/sample")
        try:
            sample = SampleSpec(
                count=int(raw.get("count", 25)),
                seed=int(raw.get("seed", 0)),
                x_bounds=tuple(raw.get("x_bounds", (-2.0, 2.0))),
                y_mag_bounds=tuple(raw.get("y_mag_bounds", (0.5, 2.0))),
                z_bounds=tuple(raw.get("z_bounds", (-2.0, 2.0))),
            )
        except (TypeError, ValueError) as e:
            raise SchemaError(f"bad sampling spec: {e}", "/sample") from e
        tol = data.get("tol", 1e-8)
        if not isinstance(tol, (int, float)) or tol <= 0:
            raise SchemaError("tol must be a positive number", "/tol")
        return cls(str(data["name"]), data["n"], tuple(suites), sample, float(tol))


BUILTIN_SCENARIOS = {
    "flat-n1": Scenario("flat-n1", 1, ("eq1-8", "sec2")),
    "linear-sample-n1": Scenario("linear-sample-n1", 1, ("sec3",)),
    "finsler-n2": Scenario("finsler-n2", 2, ("sec4",)),
}


def list_scenarios() -> list:
    return sorted(BUILTIN_SCENARIOS)


def load_definition(path: str) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}", "/") from e
    return Scenario.from_dict(data)


# -- object serialization for the check subcommand -------------------------

def connection_to_dict(conn: Connection) -> dict:
    return {
        "kind": "connection",
        "n": conn.n,
        "type": conn.conn_type,
        "matrix": [[ex.to_ast(c) for c in row] for row in conn.form.matrix],
    }


def connection_from_dict(data: dict) -> Connection:
    for key in ("n", "type", "matrix"):
        if key not in data:
            raise SchemaError(f"missing required field {key!r}", f"/{key}")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("n must be a positive integer", "/n")
    if data["type"] not in (1, 2):
        raise SchemaError("type must be 1 or 2", "/type")
    raw = data["matrix"]
    d = 3 * n
    if not isinstance(raw, list) or len(raw) != d or any(len(r) != d for r in raw):
        raise SchemaError("matrix must be 3n x 3n", "/matrix")
    mat = []
    for i, row in enumerate(raw):
        out = []
        for j, node in enumerate(row):
            out.append(ex.from_ast(node, f"/matrix/{i}/{j}"))
        mat.append(out)
    return Connection(VectorOneForm(n, mat), data["type"])


# -- suites -----------------------------------------------------------------

def _random_homogeneous_type1(n: int, rng) -> Connection:
    """Block form [[I,0,0],[A,-I,0],[B,0,-I]] with A linear in y and
    B = sum_c (dA/dy_c) z_c, which makes the connection homogeneous with a
    vanishing C1 bracket."""
    A = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            A[a][b] = ex.add(*(ex.mul(ex.Const(float(rng.integers(-2, 3)) / 2.0),
                                      ex.coord("y", c)) for c in range(n)))
    B = [[ex.add(*(ex.mul(A[a][b].diff("y", c), ex.coord("z", c))
                   for c in range(n))) for b in range(n)] for a in range(n)]
    d = 3 * n
    rows = [[ex.ONE if i == j else ex.ZERO for j in range(d)] for i in range(n)]
    neg = ex.Const(-1.0)
    for a in range(n):
        rows.append([A[a][b] for b in range(n)]
                    + [neg if b == a else ex.ZERO for b in range(n)]
                    + [ex.ZERO] * n)
    for a in range(n):
        rows.append([B[a][b] for b in range(n)] + [ex.ZERO] * n
                    + [neg if b == a else ex.ZERO for b in range(n)])
    return Connection(VectorOneForm(n, rows), 1)


def suite_eq1_8(n: int, points, tol: float, seed: int) -> VerificationReport:
    return verify_identity_suite(n, points, tol=min(tol, 1e-9), seed=seed)


def suite_sec2(n: int, points, tol: float, seed: int) -> VerificationReport:
    pack = canonical_pack(n)
    rep = VerificationReport(scenario="sec2")
    npts = len(points)
    rng = np.random.default_rng(seed)

    def add(cid, anchor, obj, t=tol):
        rep.add(cid, anchor, max_residual(obj, points), t, npts)

    S0 = reference_semispray(n, 2)
    g1, g2 = conjugate_pair(S0, points, tol)
    vr1 = validate_connection(g1.form, 1, points, tol)
    vr2 = validate_connection(g2.form, 2, points, tol)
    rep.add("sec2.G1-axioms", "Eq (11)",
            max(c.max_residual for c in vr1.checks), tol, npts)
    rep.add("sec2.G2-axioms", "Eq (12)",
            max(c.max_residual for c in vr2.checks), tol, npts)
    if n == 1:
        # hand-expanded matrices for the flat semi-spray (y, z, 0)
        add("sec2.reg.[J2,S0]", "Eq (11)",
            fn_bracket_fv(pack.J2, S0.field)
            - VectorOneForm.from_numeric(1, np.diag([1.0, 1.0, -2.0])), 1e-12)
        add("sec2.reg.[J1,S0]", "Eq (11)",
            fn_bracket_fv(pack.J1, S0.field)
            - VectorOneForm.from_numeric(1, [[0, 0, 0], [1, 0, 0], [0, -1, 0]]),
            1e-12)
        add("sec2.reg.[[J1,S0],S0]", "Eq (11)",
            fn_bracket_fv(fn_bracket_fv(pack.J1, S0.field), S0.field)
            - VectorOneForm.from_numeric(1, np.diag([1.0, -2.0, 1.0])), 1e-12)
        add("sec2.reg.G1", "Eq (11)",
            g1.form - VectorOneForm.from_numeric(1, np.diag([1.0, -1.0, -1.0])),
            1e-12)
        add("sec2.reg.G2", "Eq (12)",
            g2.form - VectorOneForm.from_numeric(1, np.diag([1.0, 1.0, -1.0])),
            1e-12)

    # projector identities for both types
    h1, v1 = projectors(g1)
    add("sec2.eq9.J1h-J1", "Eq (9)", pack.J1.compose(h1) - pack.J1)
    add("sec2.eq9.J1v", "Eq (9)", pack.J1.compose(v1))
    add("sec2.eq9.hJ2", "Eq (9)", h1.compose(pack.J2))
    add("sec2.eq9.vJ2-J2", "Eq (9)", v1.compose(pack.J2) - pack.J2)
    h2, v2 = projectors(g2)
    add("sec2.eq10.J2h-J2", "Eq (10)", pack.J2.compose(h2) - pack.J2)
    add("sec2.eq10.J2v", "Eq (10)", pack.J2.compose(v2))
    add("sec2.eq10.hJ1", "Eq (10)", h2.compose(pack.J1))
    add("sec2.eq10.vJ1-J1", "Eq (10)", v2.compose(pack.J1) - pack.J1)

    # torsion formulas on randomized homogeneous type-1 connections
    for k in range(3):
        conn = _random_homogeneous_type1(n, rng)
        T = strong_torsion(conn)
        ok, res = is_semibasic(T, "pi2", points, tol)
        rep.add(f"sec2.s{k}.T-semibasic", "Prop 1", res, tol, npts)
        S = associated_semispray(conn, reference_semispray(n, 1))
        _, v = projectors(conn)
        add(f"sec2.s{k}.T(S)+2v[C2,S]", "Prop 1",
            T.apply(S.field) + 2.0 * v.apply(lie_bracket(pack.C2, S.field)))
        add(f"sec2.s{k}.def-vs-closed", "Eq (13)",
            T - strong_torsion_closed_form(conn))
        add(f"sec2.s{k}.def-vs-reduced", "Eq (17)", T - eq17_form(conn, points, tol))
        conn2 = decompose_type1(S, T, points, tol)
        add(f"sec2.s{k}.roundtrip", "Theorem 1", conn.form - conn2.form)

    # flat decomposition regressions
    flat1 = decompose_type1(reference_semispray(n, 1),
                            VectorOneForm.zero(n), points, tol)
    target = np.diag([1.0] * n + [-1.0] * (2 * n))
    add("sec2.eq18.flat", "Eq (18)",
        flat1.form - VectorOneForm.from_numeric(n, target), 1e-12)
    catz = catz_decompose_type2(S0, VectorOneForm.zero(n), points, tol)
    add("sec2.catz-flat", "Eq (12)", catz.form - g2.form, 1e-12)
    return rep


def suite_sec3(n: int, points, tol: float, seed: int) -> VerificationReport:
    rep = VerificationReport(scenario="sec3")
    npts = len(points)
    cat = linear_catalog(n, points)
    pack = canonical_pack(n)

    cert = is_regular(cat["flat"], "J1", points)
    rep.add("sec3.flat-not-J1-regular", "Def 2",
            1.0 if cert.verdict else 0.0, tol, npts)
    rep.add("sec3.flat-phi", "Prop 3", cert.min_abs_det, tol, npts)
    cert2 = is_regular(cat["flat"], "J2", points)
    rep.add("sec3.flat-J2-regular", "Def 2",
            0.0 if cert2.verdict else 1.0, tol, npts)
    cert3 = is_regular(cat["sample"], "J1", points)
    rep.add("sec3.sample-J1-regular", "Def 2",
            0.0 if cert3.verdict else 1.0, tol, npts)

    g2 = induced_connection(cat["sample"], "J1", points)
    if n == 1:
        rep.add("sec3.sample-G2", "Theorem 2",
                max_residual(g2.form - VectorOneForm.from_numeric(
                    1, [[1, 0, 0], [0, 1, 0], [0, -2, -1]]), points),
                1e-10, npts)
    vr = validate_connection(g2.form, 2, points, tol)
    rep.add("sec3.sample-G2-axioms", "Theorem 2",
            max(c.max_residual for c in vr.checks), tol, npts)
    g1 = induced_connection(cat["flat"], "J2", points)
    vr1 = validate_connection(g1.form, 1, points, max(tol, 1e-9))
    rep.add("sec3.flat-G1-axioms", "Theorem 2",
            max(c.max_residual for c in vr1.checks), max(tol, 1e-9), npts)

    for name in ("flat", "sample", "prop4-witness"):
        D = cat[name]
        kind = "J2" if name == "flat" else "J1"
        if not is_regular(D, kind, points).verdict:
            continue
        crit, homog = homogeneity_criterion(D, kind, points, tol)
        rep.add(f"sec3.prop2.{name}", "Prop 2",
                0.0 if crit == homog else 1.0, tol, npts)

    rep.extend(prop3_obstruction(cat["flat"], points))
    rep.add("sec3.prop3", "Prop 3", 0.0 if not cert.verdict else 1.0, tol, npts)

    # implication: whenever DJ2 = 0, DJ1 = 0 as well
    worst = 0.0
    for name, D in cat.items():
        if parallel_residual(D, pack.J2, points) <= tol:
            worst = max(worst, parallel_residual(D, pack.J1, points))
    rep.add("sec3.DJ2-implies-DJ1", "section 3, parallel implication",
            worst, tol, npts)

    conn, bar, T, prep = prop4_relation(cat["prop4-witness"], points, tol)
    rep.extend(prep)
    rep.add("sec3.eq19.bar-axioms", "Eq (19)",
            max(c.max_residual for c in
                validate_connection(bar.form, 2, points, tol).checks), tol, npts)
    rep.add("sec3.prop4.T-3diff", "Prop 4",
            max_residual(T - 3.0 * (conn.form - bar.form), points), tol, npts)
    S = associated_semispray(conn, reference_semispray(n, 2))
    bar1, _ = conjugate_pair(S, points, tol)
    rep.add("sec3.remark4.G1bar-axioms", "Remark 4",
            max(c.max_residual for c in
                validate_connection(bar1.form, 1, points, tol).checks), tol, npts)
    return rep


def suite_sec4(n: int, points, tol: float, seed: int) -> VerificationReport:
    rep = VerificationReport(scenario="sec4")
    npts = len(points)
    pack = canonical_pack(n)

    F = finsler_witness(n, points, tol)
    vrep = validate_finslerian(F, points, min(tol, 1e-9))
    rep.extend(vrep)
    rep.add("sec4.def3", "Def 3",
            max(c.max_residual for c in vrep.checks), tol, npts)

    rep.add("sec4.prop6.symmetry", "Prop 6",
            metric_symmetry_residual(F, points), tol, npts)
    S0 = reference_semispray(n, 2)
    E = energy(F, S0, points, tol)
    worst = 0.0
    for p in points:
        s = S0.field.evaluate(p)
        worst = max(worst, abs(induced_metric(F, s, s, p) - 2.0 * ex.evaluate(E, p)))
    rep.add("sec4.prop6.g-energy", "Prop 6", worst, tol, npts)

    # energy independence of the spray choice: perturb by a pi2-vertical h(2) field
    bump = {"z": [ex.mul(ex.Const(0.3), ex.coord("y", a), ex.coord("z", (a + 1) % n))
                  for a in range(n)]}
    S1 = make_semispray(n, 2, bump)
    E1 = energy(F, S1, points, tol)
    rep.add("sec4.def5.independence", "Def 5",
            max(abs(ex.evaluate(E, p) - ex.evaluate(E1, p)) for p in points),
            tol, npts)
    Eform = ScalarPForm.function(n, E)
    rep.add("sec4.def5.homogeneity", "Def 5",
            max_residual(d_K(pack.C2, Eform) - 2.0 * Eform, points), tol, npts)

    # i_C2 O is h(1) and pi1-semi-basic
    ic2 = _interior(pack.C2, F.omega)
    rep.add("sec4.thm4.iC2O-h1", "Theorem 4",
            max_residual(d_K(pack.C2, ic2) - ic2, points), tol, npts)
    _, sres = is_semibasic(ic2, "pi1", points, tol)
    rep.add("sec4.thm4.iC2O-semibasic", "Theorem 4", sres, tol, npts)

    G, _, srep = canonical_spray(F, points, tol)
    rep.extend(srep)
    rep.add("sec4.thm4", "Theorem 4",
            max(c.max_residual for c in srep.checks), tol, npts)
    rep.add("sec4.prop7", "Prop 7",
            next(c.max_residual for c in srep.checks
                 if c.check_id == "spray.dual-route"), tol, npts)

    lead, theta, drep = decompose_omega(F, points, tol)
    rep.extend(drep)
    rep.add("sec4.thm5", "Theorem 5",
            max_residual(lead + theta - F.omega, points), tol, npts)

    g2, g1, _, crep = canonical_connections(F, points, tol)
    rep.extend(crep)
    rep.add("sec4.thm6", "Theorem 6",
            max_residual(strong_torsion(g2), points), tol, npts)
    rep.add("sec4.thm7", "Theorem 7",
            max(c.max_residual for c in
                validate_connection(g1.form, 1, points, tol).checks), tol, npts)
    prep = prop8_and_remark5(F, G, points, tol)
    rep.extend(prep)
    rep.add("sec4.prop8", "Prop 8",
            next(c.max_residual for c in prep.checks if c.check_id == "prop8.dGE"),
            tol, npts)
    rep.add("sec4.remark5", "Remark 5",
            next(c.max_residual for c in prep.checks
                 if c.check_id == "remark5.O(C1,S)"), tol, npts)

    # homogeneous exactness sweep over (degree r, form degree p)
    y1, y2 = ex.coord("y", 0), ex.coord("y", 1)
    sweep = [
        ("r1p1", 1, ScalarPForm(n, 1, {(0,): y1, (1,): y2})),
        ("r2p1", 2, ScalarPForm(n, 1, {(0,): ex.mul(y1, y1), (1,): ex.mul(y1, y2)})),
        ("r1p2", 1, ScalarPForm(n, 2, {(0, 1): y1})),
        ("r0p2", 0, ScalarPForm(n, 2, {(0, 1): ex.ONE})),
    ]
    for label, r, w in sweep:
        recon, erep = homogeneous_exactness(w, r, S0, "pi1", points, tol)
        for c in erep.checks:
            anchor = {"exactness.commutator": "Prop 5",
                      "exactness.contraction": "Cor 1",
                      "exactness.reconstruction": "Theorem 3"}[c.check_id]
            rep.add(f"sec4.{label}.{c.check_id}", anchor, c.max_residual,
                    c.tol, c.points)

    # the commutator identity with no semi-basic hypothesis
    for k, w in enumerate([ScalarPForm.function(n, ex.mul(y1, ex.coord("z", 1))),
                           ScalarPForm(n, 1, {(2,): ex.coord("x", 0), (4,): y2}),
                           ScalarPForm(n, 2, {(1, 3): ex.coord("z", 0),
                                              (2, 5): ex.ONE})]):
        lhs = _interior(S0.field, d_K(pack.J2, w))
        if w.degree >= 1:
            lhs = lhs + d_K(pack.J2, _interior(S0.field, w))
        rhs = d_K(pack.C2, w)
        if w.degree >= 1:
            SJ2 = fn_bracket_vf(S0.field, pack.J2)
            rhs = rhs - _interior(SJ2, w)
        rep.add(f"sec4.lemma1.deg{w.degree}", "Lemma 1",
                max_residual(lhs - rhs, points), tol, npts)
    return rep


SUITE_RUNNERS = {
    "eq1-8": suite_eq1_8,
    "sec2": suite_sec2,
    "sec3": suite_sec3,
    "sec4": suite_sec4,
}


def run_scenario(scenario: Scenario, suites=None, count=None, seed=None,
                 tol=None) -> VerificationReport:
    """Execute the selected suites and assemble one report."""
    sample = scenario.sample
    if count is not None or seed is not None:
        sample = replace(sample,
                         count=count if count is not None else sample.count,
                         seed=seed if seed is not None else sample.seed)
    use_tol = tol if tol is not None else scenario.tol
    selected = scenario.suites if suites is None else tuple(suites)
    points = sample_points(scenario.n, sample)
    rep = VerificationReport(scenario=scenario.name, config={
        "n": scenario.n,
        "count": sample.count,
        "seed": sample.seed,
        "tol": use_tol,
        "suites": list(selected),
    })
    for s in selected:
        if s not in SUITE_RUNNERS:
            raise SchemaError(f"unknown suite {s!r}", "/suites")
        rep.extend(SUITE_RUNNERS[s](scenario.n, points, use_tol, sample.seed))
    return rep
