"""Acceptance gate: seven criteria, one printed pass/fail line each."""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from t2geom import expr as ex
from t2geom.calculus import d_K, fn_bracket_fv, fn_bracket_vf, lie_bracket
from t2geom.calculus import _interior
from t2geom.canonical import (canonical_pack, is_spray, make_semispray,
                              verify_identity_suite)
from t2geom.connections import (associated_semispray, conjugate_pair,
                                decompose_type1, eq17_form, reference_semispray,
                                strong_torsion, strong_torsion_closed_form,
                                validate_connection)
from t2geom.errors import InvalidForm
from t2geom.fields import ScalarPForm, VectorOneForm
from t2geom.finsler import FinslerianForm, skew_matrix, validate_finslerian
from t2geom.linear import catalog, fiber_maps, induced_connection, is_regular
from t2geom.sampling import SampleSpec, max_residual, sample_points
from t2geom.scenarios import _random_homogeneous_type1


def _verdict(num, ok, detail=""):
    line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_criterion_1_identity_suite():
    start = time.perf_counter()
    ok = True
    for n in (1, 2, 3):
        points = sample_points(n, SampleSpec(count=25, seed=0))
        rep = verify_identity_suite(n, points, tol=1e-9, seed=0, spray_samples=5)
        ok = ok and rep.passed
        # the constant-object identities must be exactly zero
        for c in rep.checks:
            if c.check_id.split(".")[0] in ("eq1", "eq2", "eq3", "eq4", "eq5"):
                ok = ok and c.max_residual == 0.0
    elapsed = time.perf_counter() - start
    _verdict(1, ok and elapsed < 10.0, f"runtime {elapsed:.2f}s")


def test_criterion_2_regression_matrices(points1):
    pack = canonical_pack(1)
    S0 = reference_semispray(1, 2).field  # S0 = (y, z, 0)
    # [J2,S0](e) = [e, J2 S0] - J2[e, S0]; with J2 S0 = C2 = (0, y, 2z):
    #   columns e_x: (0,0,0)-J2(0,0,0)=0 plus dC2 column -> diag entries
    #   d(0,y,2z)/d(x,y,z) = [[0,0,0],[0,1,0],[0,0,2]] and
    #   J2 dS0 = J2 [[0,1,0],[0,0,1],[0,0,0]] = [[0,0,0],[0,1,0],[0,0,2]];
    #   full expansion collapses to diag(1, 1, -2)
    m = fn_bracket_fv(pack.J2, S0)
    ok = max_residual(m - VectorOneForm.from_numeric(1, np.diag([1.0, 1.0, -2.0])),
                      points1) <= 1e-12
    # [J1,S0]: J1 S0 = C1 = (0, 0, y); same expansion gives the shift matrix
    #   [[0,0,0],[1,0,0],[0,-1,0]]
    j1s = fn_bracket_fv(pack.J1, S0)
    ok = ok and max_residual(
        j1s - VectorOneForm.from_numeric(1, [[0, 0, 0], [1, 0, 0], [0, -1, 0]]),
        points1) <= 1e-12
    # iterating once more: [[J1,S0],S0] = diag(1, -2, 1)
    ok = ok and max_residual(
        fn_bracket_fv(j1s, S0)
        - VectorOneForm.from_numeric(1, np.diag([1.0, -2.0, 1.0])),
        points1) <= 1e-12
    g1, g2 = conjugate_pair(reference_semispray(1, 2), points1)
    ok = ok and max_residual(
        g2.form - VectorOneForm.from_numeric(1, np.diag([1.0, 1.0, -1.0])),
        points1) <= 1e-12
    ok = ok and max_residual(
        g1.form - VectorOneForm.from_numeric(1, np.diag([1.0, -1.0, -1.0])),
        points1) <= 1e-12
    _verdict(2, ok)


def test_criterion_3_strong_torsion_and_decomposition(points1):
    rng = np.random.default_rng(2024)
    ok = True
    worst = 0.0
    for _ in range(5):
        conn = _random_homogeneous_type1(1, rng)
        T = strong_torsion(conn)
        worst = max(worst,
                    max_residual(T - strong_torsion_closed_form(conn), points1),
                    max_residual(T - eq17_form(conn, points1), points1))
    ok = ok and worst < 1e-8
    flat = decompose_type1(reference_semispray(1, 1), VectorOneForm.zero(1),
                           points1)
    ok = ok and max_residual(
        flat.form - VectorOneForm.from_numeric(1, np.diag([1.0, -1.0, -1.0])),
        points1) == 0.0
    S = associated_semispray(flat, reference_semispray(1, 1))
    ok = ok and max_residual(S.field - reference_semispray(1, 1).field,
                             points1) == 0.0
    ok = ok and max_residual(strong_torsion(flat), points1) == 0.0
    _verdict(3, ok, f"max def-vs-closed residual {worst:.2e}")


def test_criterion_4_linear_catalog(points1):
    cat = catalog(1, points1)
    phi, _ = fiber_maps(cat["flat"], points1)
    ok = all(ex.evaluate(phi[0][0], p) == 0.0 for p in points1)
    ok = ok and not is_regular(cat["flat"], "J1", points1).verdict
    ok = ok and is_regular(cat["sample"], "J1", points1).verdict
    g2 = induced_connection(cat["sample"], "J1", points1)
    ok = ok and max_residual(
        g2.form - VectorOneForm.from_numeric(1, [[1, 0, 0], [0, 1, 0], [0, -2, -1]]),
        points1) <= 1e-10
    from t2geom.linear import homogeneity_criterion
    for name, D in cat.items():
        kind = "J2" if name == "flat" else "J1"
        if is_regular(D, kind, points1).verdict:
            crit, homog = homogeneity_criterion(D, kind, points1)
            ok = ok and crit == homog
    ok = ok and is_regular(cat["flat"], "J2", points1).verdict
    g1 = induced_connection(cat["flat"], "J2", points1)
    rep = validate_connection(g1.form, 1, points1, tol=1e-9)
    ok = ok and rep.passed
    _verdict(4, ok)


def test_criterion_5_finsler_witness(witness, witness_spray,
                                     witness_connections, points2):
    pack = canonical_pack(2)
    ok = all(np.linalg.matrix_rank(skew_matrix(witness.omega, p), tol=1e-8) == 6
             for p in points2)
    rep = validate_finslerian(witness, points2, tol=1e-9)
    ok = ok and rep.passed

    G, E = witness_spray
    Eform = ScalarPForm.function(2, E)
    ok = ok and max_residual(pack.J2.apply(G) - pack.C2, points2) < 1e-8
    ok = ok and max_residual(lie_bracket(pack.C2, G) - G, points2) < 1e-8
    ok = ok and max_residual(d_K(G, Eform), points2) < 1e-8

    g2, _, _ = witness_connections
    ok = ok and max_residual(strong_torsion(g2), points2) < 1e-8

    from t2geom.calculus import exterior_derivative
    lead = exterior_derivative(d_K(pack.J2, Eform))
    theta = _interior(pack.C2, exterior_derivative(witness.omega))
    ok = ok and max_residual(lead + theta - witness.omega, points2) < 1e-8

    from t2geom.finsler import homogeneous_exactness
    w = ScalarPForm(2, 1, {(0,): ex.coord("y", 0), (1,): ex.coord("y", 1)})
    S0 = reference_semispray(2, 2)
    recon, _ = homogeneous_exactness(w, 1, S0, "pi1", points2)
    ok = ok and max_residual(recon - w, points2) <= 1e-10

    # the insertion-derivation commutator on forms of each degree <= 2
    worst = 0.0
    y0 = ex.coord("y", 0)
    forms = [ScalarPForm.function(2, ex.mul(y0, ex.coord("z", 1))),
             ScalarPForm(2, 1, {(2,): ex.coord("x", 0), (4,): y0}),
             ScalarPForm(2, 2, {(1, 3): ex.coord("z", 0), (2, 5): ex.ONE})]
    for form in forms:
        lhs = _interior(S0.field, d_K(pack.J2, form))
        rhs = d_K(pack.C2, form)
        if form.degree >= 1:
            lhs = lhs + d_K(pack.J2, _interior(S0.field, form))
            rhs = rhs - _interior(fn_bracket_vf(S0.field, pack.J2), form)
        worst = max(worst, max_residual(lhs - rhs, points2))
    ok = ok and worst < 1e-9
    _verdict(5, ok, f"commutator residual {worst:.2e}")


def test_criterion_6_negative_controls(points1):
    try:
        FinslerianForm(ScalarPForm(1, 2, {(0, 1): ex.ONE}))
        parity_ok = False
    except InvalidForm as e:
        parity_ok = "odd" in str(e)
    bad = make_semispray(1, 2, {"z": [ex.ONE]})
    spray_ok = not is_spray(bad, points1)[0]
    conn_ok = not validate_connection(VectorOneForm.identity(1), 1, points1).passed
    _verdict(6, parity_ok and spray_ok and conn_ok)


def test_criterion_7_determinism():
    cmd = [sys.executable, "-m", "t2geom.cli", "run",
           "--scenario", "flat-n1", "--seed", "7"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    report = json.loads(first)
    _verdict(7, first == second and report["summary"]["failed"] == 0,
             f"{report['summary']['total']} checks")
