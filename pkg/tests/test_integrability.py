import numpy as np
import pytest

from holonomy2.generators import chart_bubble, hemisphere_cover, sphere_cover
from holonomy2.holonomy import hol_matrix
from holonomy2.integrability import (NO_OBSTRUCTION, OBSTRUCTION, ASphere, IntegrabilityError,
                                     periods, transgression, type0_equivalence_check, type0_period,
                                     type1_identity_check)
from holonomy2.models import builtin_model
from holonomy2.paths import constant_path, thin_reparam_homotopy
from holonomy2.scenarios import fixture, point_sphere

PRE, PREP = builtin_model("prequantization_s2")
TAN, TREP = builtin_model("tangent_sphere_type1")


@pytest.fixture(scope="module")
def full_sphere():
    return ASphere(sphere_cover(PRE, 400, 400))


def test_full_sphere_period_is_4pi(full_sphere):
    pr = periods(PREP, [full_sphere])
    assert abs(pr.norms[0] - 4 * np.pi) <= 1e-3
    assert pr.verdict == OBSTRUCTION
    assert abs(float(type0_period(PREP, full_sphere.homotopy)[0, 0]) - 4 * np.pi) <= 1e-3


def test_hemisphere_period_is_2pi():
    h = hemisphere_cover(PRE, 200, 200)
    assert abs(float(type0_period(PREP, h)[0, 0]) - 2 * np.pi) <= 1e-3


def test_type0_period_equals_holonomy(full_sphere):
    h = full_sphere.homotopy
    assert np.max(np.abs(type0_period(PREP, h) - hol_matrix(PREP, h))) <= 1e-10


def test_transgression(full_sphere):
    k = transgression(PREP, full_sphere, [1.0])
    assert abs(k.c[0] - 4 * np.pi) <= 1e-3 and k.e[0] == 1.0
    z = transgression(PREP, full_sphere, [0.0])
    assert z.c[0] == 0.0
    k2 = transgression(PREP, full_sphere, [2.5])
    assert k2.c[0] == 2.5 * k.c[0]
    with pytest.raises(IntegrabilityError, match="dimension"):
        transgression(PREP, full_sphere, [1.0, 2.0])


def test_type0_equivalence(full_sphere):
    u = full_sphere.homotopy.s_V
    e = np.array([1.0])
    ok = type0_equivalence_check(PREP, [0.0], u, [4 * np.pi], u, e, full_sphere.homotopy, 1e-3)
    assert ok["verdict"] and ok["consistent_with_equivalent"]
    off = type0_equivalence_check(PREP, [0.0], u, [4 * np.pi + 1], u, e, full_sphere.homotopy, 1e-3)
    assert not off["verdict"] and off["consistent_with_equivalent"]


def test_type0_rejects_nontrivial_representation():
    fx = fixture(TAN, TREP, 100, 20, 1e-2)
    with pytest.raises(IntegrabilityError, match="type-0"):
        type0_period(TREP, fx.h1)


def test_tangent_bubble_has_no_period():
    b = ASphere(chart_bubble(TAN, [-0.6, -0.4], 0.8, 200, 100))
    pr = periods(TREP, [b])
    assert pr.norms[0] <= pr.thresholds[0] and pr.verdict == NO_OBSTRUCTION


def test_type1_identity_generic_and_thin():
    fx = fixture(TAN, TREP, 200, 100, 1e-3)
    assert type1_identity_check(TREP, fx.h1) <= 1e-5
    thin = thin_reparam_homotopy(constant_path(TAN, [0.0, 0.0], [0.5, 0.5], 200))
    assert type1_identity_check(TREP, thin) <= 1e-8


def test_type1_check_needs_invertible_boundary():
    so3, rep = builtin_model("so3_string")
    fx = fixture(so3, rep, 100, 20, 1e-2)
    with pytest.raises(IntegrabilityError, match="invertible"):
        type1_identity_check(rep, fx.h1)


def test_abelian_zero_omega_period_exact():
    ab, rep = builtin_model("abelian")
    s = ASphere(point_sphere(ab, 100, 100, 1e-3))
    assert not np.any(hol_matrix(rep, s.homotopy))


def test_abelian_period_is_signed_area():
    ab, rep = builtin_model("abelian", {"scale": 1.0})
    s = ASphere(point_sphere(ab, 200, 200, 1e-3))
    P = float(hol_matrix(rep, s.homotopy)[0, 0])
    # a(t, s) = pi cos(pi t) A(s), b = sin(pi t) B(s), with
    # A = 0.7 (1 - cos 2 pi s)/(2 pi) e0 - 0.4 (1 - cos 4 pi s)/(4 pi) e1 and
    # B = 0.7 sin(2 pi s) e0 - 0.4 sin(4 pi s) e1; the t-integral of pi cos sin vanishes
    assert abs(P) <= 1e-8


def test_vertical_inverse_sphere_negates(full_sphere):
    from holonomy2.paths import vinv

    h = full_sphere.homotopy
    assert abs(float(hol_matrix(PREP, vinv(h))[0, 0] + hol_matrix(PREP, h)[0, 0])) <= 1e-10


def test_sphere_faces_must_be_units():
    fx = fixture(TAN, TREP, 100, 20, 1e-2)
    with pytest.raises(IntegrabilityError, match="unit"):
        ASphere(fx.h1)
