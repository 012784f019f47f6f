import numpy as np
import pytest

from holonomy2.generators import point_homotopy, sinusoidal_variation
from holonomy2.holonomy import transport
from holonomy2.models import builtin_model
from holonomy2.paths import constant_path, generate_homotopy, horizontal_unit, unit_path
from holonomy2.scenarios import fixture, rodrigues
from holonomy2.transformation import (TransformationError, TransOneMor, TransTwoMor, compare_hinv,
                                      equivalent, one_close, one_inv, one_mult, one_src, one_tgt,
                                      one_unit, truncation_composition_check, two_hcomp, two_hinv,
                                      two_hsrc, two_htgt, two_hunit, two_vcomp, two_vinv, two_vsrc,
                                      two_vtgt, two_vunit)

SO3, REP = builtin_model("so3_string")
TAN, TREP = builtin_model("tangent_sphere_type1")
AB, AREP = builtin_model("abelian", {"scale": 1.0})


def gap(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def test_unit_target_is_source():
    e = np.array([1.0, -2.0, 0.5])
    m = one_unit(REP, [0.0], e, 20)
    assert np.array_equal(one_tgt(m), e) and np.array_equal(one_src(m), e)


def test_so3_target_is_coadjoint_transport():
    xi = np.array([0.3, -0.7, 0.4])
    e = np.array([1.0, 0.5, -0.2])
    m = TransOneMor(REP, [0.3], constant_path(SO3, [0.0], xi, 100), e)
    assert gap(one_tgt(m), rodrigues(xi) @ e) < 1e-8


def test_identity_boundary_target():
    e, c = np.array([0.2, 0.4]), np.array([1.0, -1.0])
    m = TransOneMor(TREP, c, unit_path(TAN, [0.1, 0.2], 20), e)
    assert gap(one_tgt(m), e + c) == 0.0


def test_mult_inverse_and_target_consistency():
    fx = fixture(TAN, TREP, 200, 100, 1e-3)
    m = TransOneMor(TREP, [0.3, -0.2], fx.a0, [1.0, 0.4])
    r = one_mult(one_inv(m), m)
    assert gap(r.c, 0.0) <= 1e-8
    assert gap(one_tgt(r), m.e) <= 1e-6
    back = one_inv(one_inv(m))
    assert gap(back.c, m.c) <= 1e-8 and gap(back.path.a, m.path.a) == 0.0
    m1 = TransOneMor(TREP, [0.5, 0.5], fx.a1, one_tgt(m))
    assert gap(one_tgt(one_mult(m1, m)), one_tgt(m1)) <= 1e-6


def test_mult_of_units_is_unit():
    e = np.array([1.0, 2.0, 3.0])
    u = one_unit(REP, [0.0], e, 20)
    uu = one_mult(u, u)
    assert not np.any(uu.c) and not np.any(uu.path.a)


def test_abelian_c_components_add():
    p = constant_path(AB, [0.0], [1.0, 0.0], 20)
    m0 = TransOneMor(AREP, [0.25], p, [2.0])
    m1 = TransOneMor(AREP, [0.5], p, [2.0])
    assert gap(one_mult(m1, m0).c, [0.75]) == 0.0


def test_mult_rejects_noncomposable():
    u = one_unit(REP, [0.0], [1.0, 0, 0], 20)
    v = one_unit(REP, [0.0], [0, 1.0, 0], 20)
    with pytest.raises(TransformationError, match="composable"):
        one_mult(v, u)


def test_two_arrow_faces_and_units():
    h = horizontal_unit(SO3, [0.0], 20, 8)
    w = TransTwoMor(REP, [0.3], h, [1.0, 0, 0])
    assert one_close(two_vsrc(w), two_vtgt(w), 0.0)
    vu = two_vunit(one_unit(REP, [0.0], [1.0, 0, 0], 20), 8)
    assert np.array_equal(two_vtgt(vu).c, vu.c)
    hu = two_hunit(REP, [0.0], [1.0, 0, 0], 20, 8)
    assert np.array_equal(two_htgt(hu), two_hsrc(hu))


def test_vertical_inverse_composes_to_unit():
    fx = fixture(SO3, REP, 200, 100, 1e-3)
    w = TransTwoMor(REP, [0.3], fx.h1, [1.0, 0.5, -0.2])
    comp = two_vcomp(two_vinv(w), w)
    assert gap(two_vtgt(comp).c, w.c) <= 1e-6
    assert np.linalg.norm(comp.hol, 2) <= 1e-6


def test_vertical_composition_requires_shift():
    fx = fixture(SO3, REP, 200, 100, 1e-3)
    e = np.array([1.0, 0.5, -0.2])
    w1 = TransTwoMor(REP, [0.3], fx.h1, e)
    good = TransTwoMor(REP, two_vtgt(w1).c, fx.h2, e)
    assert two_vcomp(good, w1).homotopy.M == 2 * fx.h1.M
    bad = TransTwoMor(REP, [0.3], fx.h2, e)
    with pytest.raises(TransformationError, match="vertically composable"):
        two_vcomp(bad, w1)


def test_interchange_on_a_generated_block():
    fx = fixture(TAN, TREP, 200, 100, 1e-3)
    e = np.array([0.7, -0.3])
    s1, s2 = fx.h1, fx.h2
    t1 = fx.h3
    t2 = generate_homotopy(t1.t_V, sinusoidal_variation([0.3, 0.2], 0.2), 100)
    w1 = TransTwoMor(TREP, [0.1, 0.2], s1, e)
    w2 = TransTwoMor(TREP, two_vtgt(w1).c, s2, e)
    f = two_htgt(w1)
    v1 = TransTwoMor(TREP, [0.4, -0.1], t1, f)
    v2 = TransTwoMor(TREP, two_vtgt(v1).c, t2, f)
    lhs = two_hcomp(two_vcomp(v2, v1), two_vcomp(w2, w1))
    rhs = two_vcomp(two_hcomp(v2, w2, tol=1e-4), two_hcomp(v1, w1))
    assert gap(lhs.c, rhs.c) <= 1e-5 and gap(lhs.e, rhs.e) <= 1e-5
    assert np.linalg.norm(lhs.hol - rhs.hol, 2) <= 1e-5


def test_horizontal_inverse_axiom_and_printed_formula():
    fx = fixture(TAN, TREP, 200, 100, 1e-3)
    w = TransTwoMor(TREP, [0.3, -0.4], fx.h1, [1.0, 0.2])
    cmp = compare_hinv(w)
    assert cmp.axiom_residual <= 1e-6
    # the alternative formula is not composable with w: its base slot is e, not htgt(w)
    assert cmp.printed_composable_gap > 1e-3
    comp = two_hcomp(two_hinv(w), w)
    assert gap(comp.c, 0.0) <= 1e-6


def test_equivalence_basic_cases():
    fx = fixture(SO3, REP, 200, 100, 1e-3)
    e = np.array([1.0, 0.5, -0.2])
    m0 = TransOneMor(REP, [0.3], fx.a0, e)
    assert equivalent(m0, m0, generate_homotopy(fx.a0, lambda t, s: np.zeros((t.size, 3)), 8)).verdict
    m1 = two_vtgt(TransTwoMor(REP, [0.3], fx.h1, e))
    eq = equivalent(m0, m1, fx.h1)
    assert eq.verdict and eq.sign == "vertical-target"
    bumped = TransOneMor(REP, m1.c + 1e-4, m1.path, m1.e)
    assert not equivalent(m0, bumped, fx.h1, tol=1e-5).verdict
    # opposite orientation is recognized
    flipped = TransOneMor(REP, 2 * m0.c - m1.c, m1.path, e)
    assert equivalent(m0, flipped, fx.h1).sign == "opposite"


def test_equivalence_scales_linearly_in_e():
    fx = fixture(SO3, REP, 200, 100, 1e-3)
    e = np.array([1.0, 0.5, -0.2])
    m0 = TransOneMor(REP, [0.0], fx.a0, e)
    m1 = two_vtgt(TransTwoMor(REP, [0.0], fx.h1, e))
    r1 = equivalent(m0, m1, fx.h1)
    lam = 4.0  # power of two: scaling is exact
    n0 = TransOneMor(REP, lam * m0.c, fx.a0, lam * e)
    n1 = TransOneMor(REP, lam * m1.c, m1.path, lam * e)
    r2 = equivalent(n0, n1, fx.h1)
    assert r1.verdict == r2.verdict and r2.residual == lam * r1.residual


def test_truncation_of_units_is_zero():
    e = np.array([1.0, 0, 0])
    u = one_unit(REP, [0.0], e, 20)
    h = horizontal_unit(SO3, [0.0], 20, 8)
    rep = truncation_composition_check(u, u, u, u, (h, h))
    assert rep.residual == 0.0 and rep.verdict
