"""Canonical structures: J1, J2, C1, C2, semi-sprays, predicates."""

import numpy as np
import pytest

from t2geom import expr as ex
from t2geom.canonical import (canonical_pack, is_homogeneous, is_semibasic,
                              is_spray, make_semispray, random_semispray,
                              semispray_residual, verify_identity_suite)
from t2geom.errors import ConstraintError
from t2geom.fields import ScalarPForm
from t2geom.sampling import SampleSpec, sample_points


def test_pack_matrices_n1(points1):
    pack = canonical_pack(1)
    p = points1[0]
    assert np.array_equal(pack.J1.evaluate(p),
                          [[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    assert np.array_equal(pack.J2.evaluate(p),
                          [[0, 0, 0], [1, 0, 0], [0, 2, 0]])
    assert np.array_equal(pack.C1.evaluate(p), [0, 0, p[1]])
    assert np.array_equal(pack.C2.evaluate(p), [0, p[1], 2 * p[2]])


@pytest.mark.parametrize("n", [1, 2])
def test_nilpotency(n):
    pack = canonical_pack(n)
    p = np.zeros(3 * n)
    j1 = pack.J1.evaluate(p)
    j2 = pack.J2.evaluate(p)
    assert not np.any(j1 @ j1)
    assert not np.any(j2 @ j1)
    assert not np.any(j1 @ j2)
    assert not np.any(j2 @ j2 @ j2)
    # J2^2 = 2 J1
    assert np.array_equal(j2 @ j2, 2 * j1)


@pytest.mark.parametrize("n", [1, 2])
def test_identity_suite_green(n):
    points = sample_points(n, SampleSpec(count=10, seed=2))
    rep = verify_identity_suite(n, points, tol=1e-9, seed=4, spray_samples=2)
    assert rep.passed, rep.to_text()


def test_make_semispray_forced_blocks():
    S = make_semispray(1, 2, {"z": [ex.coord("x", 0)]})
    p = np.array([3.0, 5.0, 7.0])
    assert np.array_equal(S.field.evaluate(p), [5.0, 7.0, 3.0])
    with pytest.raises(ConstraintError):
        make_semispray(1, 2, {"y": [ex.coord("x", 0)], "z": [ex.ZERO]})
    with pytest.raises(ConstraintError):
        make_semispray(1, 3, {"z": [ex.ZERO]})


def test_semispray_residual_detects_type(points1):
    S2 = make_semispray(1, 2, {"z": [ex.ZERO]})
    assert semispray_residual(S2.field, 2, points1) == 0.0
    # every type-2 semi-spray is also type-1
    assert semispray_residual(S2.field, 1, points1) == 0.0
    # but not conversely: a constant y block breaks J2 S = C2
    S1 = make_semispray(1, 1, {"y": [ex.ONE], "z": [ex.ZERO]})
    assert semispray_residual(S1.field, 1, points1) == 0.0
    assert semispray_residual(S1.field, 2, points1) > 0.1


def test_is_spray_flat_and_negative_control(points1):
    flat = make_semispray(1, 2, {"z": [ex.ZERO]})
    ok, res = is_spray(flat, points1)
    assert ok and res < 1e-12
    # constant completion breaks degree-2 homogeneity
    bad = make_semispray(1, 2, {"z": [ex.ONE]})
    ok, res = is_spray(bad, points1)
    assert not ok and res > 0.5
    rng = np.random.default_rng(0)
    ok, _ = is_spray(random_semispray(1, 2, rng), points1)
    assert not ok


def test_is_homogeneous_scalar(points1):
    y = ex.coord("y", 0)
    w = ScalarPForm.function(1, ex.mul(y, y))
    ok, _ = is_homogeneous(w, 2, points1)
    assert ok
    ok, _ = is_homogeneous(w, 1, points1)
    assert not ok
    # z carries weight 2
    wz = ScalarPForm.function(1, ex.coord("z", 0))
    ok, _ = is_homogeneous(wz, 2, points1)
    assert ok


def test_is_semibasic_scalar(points1):
    dx = ScalarPForm(1, 1, {(0,): ex.ONE})
    dz = ScalarPForm(1, 1, {(2,): ex.coord("y", 0)})
    for which in ("pi1", "pi2"):
        ok, _ = is_semibasic(dx, which, points1)
        assert ok
        ok, _ = is_semibasic(dz, which, points1)
        assert not ok
    # dy vanishes on the J1 image but not on the J2 image
    dy = ScalarPForm(1, 1, {(1,): ex.ONE})
    ok, _ = is_semibasic(dy, "pi1", points1)
    assert ok
    ok, _ = is_semibasic(dy, "pi2", points1)
    assert not ok
