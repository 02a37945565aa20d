"""Nonlinear connections: validation, torsions, decompositions."""

import numpy as np
import pytest

from t2geom import expr as ex
from t2geom.canonical import canonical_pack, is_semibasic, make_semispray
from t2geom.connections import (Connection, associated_semispray,
                                catz_decompose_type2, conjugate_pair,
                                decompose_type1, eq17_form, projectors,
                                reference_semispray, strong_torsion,
                                strong_torsion_closed_form,
                                validate_connection, weak_torsion)
from t2geom.calculus import lie_bracket
from t2geom.errors import PreconditionFailed, ValidationFailed
from t2geom.fields import VectorOneForm
from t2geom.sampling import SampleSpec, max_residual, sample_points
from t2geom.scenarios import _random_homogeneous_type1


def test_identity_is_not_a_connection(points1):
    rep = validate_connection(VectorOneForm.identity(1), 1, points1)
    assert not rep.passed
    rep = validate_connection(VectorOneForm.identity(1), 2, points1)
    assert not rep.passed


def test_flat_conjugate_pair_regression(points1):
    # hand expansion for S0 = (y, z, 0):
    #   G1 = -[J1, S0] J2 + [[J1, S0], S0] = diag(1, -1, -1)
    #   G2 = [J2, S0] - 2 J1 K for the flat completion = diag(1, 1, -1)
    S0 = reference_semispray(1, 2)
    g1, g2 = conjugate_pair(S0, points1)
    assert max_residual(
        g1.form - VectorOneForm.from_numeric(1, np.diag([1.0, -1.0, -1.0])),
        points1) < 1e-12
    assert max_residual(
        g2.form - VectorOneForm.from_numeric(1, np.diag([1.0, 1.0, -1.0])),
        points1) < 1e-12
    assert validate_connection(g1.form, 1, points1).passed
    assert validate_connection(g2.form, 2, points1).passed


def test_projectors_are_complementary(points1):
    S0 = reference_semispray(1, 2)
    g1, _ = conjugate_pair(S0, points1)
    h, v = projectors(g1)
    assert max_residual(h.compose(h) - h, points1) < 1e-12
    assert max_residual(v.compose(v) - v, points1) < 1e-12
    assert max_residual(h.compose(v), points1) < 1e-12
    assert max_residual(h + v - VectorOneForm.identity(1), points1) < 1e-12


def test_associated_semispray_flat(points1):
    S0 = reference_semispray(1, 2)
    g1, _ = conjugate_pair(S0, points1)
    S = associated_semispray(g1, reference_semispray(1, 1))
    # flat type-1 connection has the associated spray (y, 0, 0)
    for p in points1[:5]:
        assert np.allclose(S.field.evaluate(p), [p[1], 0.0, 0.0])


def test_flat_torsions_vanish(points1):
    S0 = reference_semispray(1, 2)
    g1, _ = conjugate_pair(S0, points1)
    assert max_residual(weak_torsion(g1), points1) < 1e-12
    assert max_residual(strong_torsion(g1), points1) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_strong_torsion_definition_vs_closed_form(n):
    points = sample_points(n, SampleSpec(count=15, seed=9))
    rng = np.random.default_rng(17)
    pack = canonical_pack(n)
    for _ in range(5):
        conn = _random_homogeneous_type1(n, rng)
        assert validate_connection(conn.form, 1, points).passed
        T = strong_torsion(conn)
        assert max_residual(T - strong_torsion_closed_form(conn), points) < 1e-8
        assert max_residual(T - eq17_form(conn, points), points) < 1e-8
        ok, _ = is_semibasic(T, "pi2", points, 1e-8)
        assert ok
        S = associated_semispray(conn, reference_semispray(n, 1))
        _, v = projectors(conn)
        rel = T.apply(S.field) + 2.0 * v.apply(lie_bracket(pack.C2, S.field))
        assert max_residual(rel, points) < 1e-8


def test_eq17_guard_rejects_inhomogeneous(points1):
    # perturb the flat connection with an x-dependent block entry
    rows = [[ex.ONE, ex.ZERO, ex.ZERO],
            [ex.coord("x", 0), ex.Const(-1.0), ex.ZERO],
            [ex.ZERO, ex.ZERO, ex.Const(-1.0)]]
    conn = Connection(VectorOneForm(1, rows), 1)
    with pytest.raises(PreconditionFailed):
        eq17_form(conn, points1)


def test_decompose_type1_flat_regression(points1):
    conn = decompose_type1(reference_semispray(1, 1), VectorOneForm.zero(1),
                           points1)
    assert max_residual(
        conn.form - VectorOneForm.from_numeric(1, np.diag([1.0, -1.0, -1.0])),
        points1) == 0.0


@pytest.mark.parametrize("n", [1, 2])
def test_decompose_type1_round_trip(n):
    points = sample_points(n, SampleSpec(count=15, seed=23))
    rng = np.random.default_rng(5)
    for _ in range(3):
        conn = _random_homogeneous_type1(n, rng)
        S = associated_semispray(conn, reference_semispray(n, 1))
        T = strong_torsion(conn)
        back = decompose_type1(S, T, points)
        assert max_residual(back.form - conn.form, points) < 1e-10
        S2 = associated_semispray(back, reference_semispray(n, 1))
        assert max_residual(S2.field - S.field, points) < 1e-10
        assert max_residual(strong_torsion(back) - T, points) < 1e-10


def test_decompose_type1_rejects_incompatible_spray(points1):
    # y-block y^2 is homogeneous but lies outside the image of the
    # associated-spray map, so the reconstruction cannot reproduce it
    S = make_semispray(1, 1, {"y": [ex.mul(ex.coord("y", 0), ex.coord("y", 0))],
                              "z": [ex.ZERO]})
    with pytest.raises(ValidationFailed):
        decompose_type1(S, VectorOneForm.zero(1), points1)


def test_decompose_type1_rejects_bad_torsion(points1):
    S = reference_semispray(1, 1)
    # a dz-column entry is not pi2-semi-basic
    T = VectorOneForm(1, [[ex.ZERO] * 3, [ex.ZERO] * 3,
                          [ex.ZERO, ex.ZERO, ex.coord("y", 0)]])
    with pytest.raises(PreconditionFailed):
        decompose_type1(S, T, points1)


def test_catz_decompose_type2(points1):
    S0 = reference_semispray(1, 2)
    _, g2 = conjugate_pair(S0, points1)
    flat = catz_decompose_type2(S0, VectorOneForm.zero(1), points1)
    assert max_residual(flat.form - g2.form, points1) < 1e-12
    # nonzero eligible torsion: T is pi1-semi-basic, h(1), T(S0) = 0
    T = VectorOneForm(1, [[ex.ZERO] * 3, [ex.ZERO] * 3,
                          [ex.coord("z", 0), -ex.coord("y", 0), ex.ZERO]])
    conn = catz_decompose_type2(S0, T, points1)
    assert validate_connection(conn.form, 2, points1).passed
    assert max_residual(strong_torsion(conn, S0) - T, points1) < 1e-8
    S2 = associated_semispray(conn, S0)
    assert max_residual(S2.field - S0.field, points1) < 1e-8
