import dataclasses

import numpy as np
import pytest

from holonomy2.algebroid import ModelError, bracket_at, curvature, sample_points, validate_ruth
from holonomy2.models import REGISTRY, builtin_model, cross_matrix


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_builtin_models_validate(name):
    model, rep = builtin_model(name)
    vr = validate_ruth(model, rep)
    assert vr.ok, vr.residuals


def test_oracle_and_fd_curvature_agree():
    model, rep = builtin_model("tangent_sphere_type1")
    x = np.array([0.4, -0.7])
    a, b = np.array([1.0, 0.3]), np.array([-0.2, 0.8])
    fd = curvature(model, rep.GE, x, a, b)
    exact = curvature(model, rep.GE, x, a, b, oracle=rep.derivatives["gammaE"])
    assert np.max(np.abs(fd - exact)) < 1e-7
    assert validate_ruth(model, rep, use_oracles=True).ok


def test_riemann_tensor_of_round_sphere():
    # Gauss curvature 1: R(a, b) b = lam^2 |b|^2 a for orthogonal a, b in the chart metric
    model, rep = builtin_model("tangent_sphere_type1")
    x = np.zeros(2)
    a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    R = curvature(model, rep.GE, x, a, b, oracle=rep.derivatives["gammaE"])
    lam2 = 4.0
    assert np.allclose(R @ b, lam2 * a, atol=1e-12)


def test_wrong_omega_sign_is_detected():
    model, rep = builtin_model("tangent_sphere_type1")
    bad = dataclasses.replace(rep, omega=lambda x, a, b: -rep.omega(x, a, b))
    vr = validate_ruth(model, bad)
    assert not vr.passed["d_omega_E"] and not vr.passed["omega_d_C"]


def test_broken_jacobi_is_detected():
    model, rep = builtin_model("so3_string")
    c = np.random.default_rng(0).standard_normal((3, 3, 3))
    c = c - np.swapaxes(c, 1, 2)  # antisymmetric but generically not Jacobi
    broken = dataclasses.replace(model, structure=lambda x: np.broadcast_to(c, np.shape(x)[:-1] + c.shape))
    vr = validate_ruth(broken, dataclasses.replace(rep, algebroid=broken))
    assert not vr.passed["jacobi"]


def test_bracket_outside_chart():
    model, _ = builtin_model("tangent_sphere_type1")
    with pytest.raises(ModelError, match="outside"):
        bracket_at(model, [10.0, 0.0], [1, 0], [0, 1])


def test_so3_bracket_is_cross_product():
    model, _ = builtin_model("so3_string")
    a, b = np.array([1.0, 2.0, 3.0]), np.array([-1.0, 0.5, 2.0])
    assert np.allclose(bracket_at(model, [0.0], a, b), np.cross(a, b))
    assert np.allclose(cross_matrix(a) @ b, np.cross(a, b))


def test_prequantization_domain_excludes_origin():
    model, _ = builtin_model("prequantization_s2")
    assert not model.contains([0.0, 0.0, 0.1])
    assert model.contains([0.0, 0.0, -1.0])
    pts = sample_points(model, 10, seed=4)
    assert np.all(model.contains(pts))


@pytest.mark.parametrize("name,params", [("constant_coeff", {"lam": 0}), ("abelian", {"rank": 1}),
                                         ("so3_string", {"bogus": 1}),
                                         ("prequantization_s2", {"r_min": 1.2})])
def test_bad_parameters(name, params):
    with pytest.raises(ModelError):
        builtin_model(name, params)


def test_unknown_model():
    with pytest.raises(ModelError, match="unknown model"):
        builtin_model("s4_string")
