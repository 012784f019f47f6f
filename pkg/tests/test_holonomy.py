import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import expm

from holonomy2.complexes import ComplexError
from holonomy2.config import RunConfig
from holonomy2.generators import chart_family, point_homotopy, sinusoidal_variation
from holonomy2.holonomy import (HolonomyError, check_horizontal_functoriality,
                                check_transport_concat, check_transport_inverse,
                                check_vertical_functoriality, check_vertical_inverse,
                                curvature_transport_check, curvature_transport_sides, hol_matrix,
                                holonomy_data, homotopy_holonomy, table_multiplicativity_residual,
                                transport, transport_table)
from holonomy2.models import builtin_model, cross_matrix
from holonomy2.paths import (constant_path, generate_homotopy, horizontal_unit,
                             thin_reparam_homotopy, unit_path, vertical_unit, vinv)
from holonomy2.scenarios import fixture, rodrigues

SO3, REP = builtin_model("so3_string")
TAN, TREP = builtin_model("tangent_sphere_type1")


def test_unit_path_transport_is_identity():
    T = transport(REP, unit_path(SO3, [0.0], 16))
    assert np.array_equal(T.A_E, np.eye(3)) and np.array_equal(T.A_C, np.eye(1))


@pytest.mark.parametrize("xi", [[0.0, 0.0, 1.0], [0.3, -0.7, 0.4], [2.0, 1.0, -1.5]])
def test_constant_path_matches_matrix_exponential(xi):
    T = transport(REP, constant_path(SO3, [0.0], xi, 100))
    ref = expm(-cross_matrix(np.array(xi)))
    assert np.max(np.abs(T.A_E - ref)) < 1e-8
    # the closed form used by the scenarios is the same oracle
    assert np.max(np.abs(rodrigues(xi) - ref)) < 1e-14


def test_transport_concat_converges_at_fourth_order():
    res = []
    for n in (50, 100):
        a = constant_path(TAN, [-0.5, 0.0], [0.8, 0.3], n)
        b = constant_path(TAN, a.target, [-0.2, 0.9], n)
        res.append(check_transport_concat(TREP, b, a))
    assert res[1] < 1e-6 and res[0] / res[1] > 2**3.5


def test_transport_inverse():
    a = constant_path(TAN, [-0.5, 0.0], [0.8, 0.3], 100)
    assert check_transport_inverse(TREP, a) < 1e-12


def test_table_identity_row_and_restart():
    res = []
    for n in (100, 200):
        h = chart_family(TAN, [-1, -0.5], [1.5, 1.0], [0.3, -0.6], n, 20)
        tab = transport_table(TREP, h)
        assert np.array_equal(tab.forwardE[0], np.broadcast_to(np.eye(2), tab.forwardE[0].shape))
        res.append(table_multiplicativity_residual(TREP, tab))
    assert res[1] < 1e-8 and res[0] / res[1] > 2**3.5


def test_thin_homotopy_has_zero_holonomy():
    p = constant_path(SO3, [0.0], [0.3, -0.7, 0.4], 200)
    assert np.max(np.abs(hol_matrix(REP, thin_reparam_homotopy(p)))) <= 1e-10


def test_units_have_exactly_zero_holonomy():
    assert not np.any(hol_matrix(REP, horizontal_unit(SO3, [0.0], 20, 8)))
    p = constant_path(SO3, [0.0], [0.3, -0.7, 0.4], 50)
    assert not np.any(hol_matrix(REP, vertical_unit(p, 8)))


def test_functoriality_on_units_is_exact():
    u = horizontal_unit(SO3, [0.0], 20, 8)
    assert check_vertical_functoriality(REP, u, u) == 0.0
    assert check_horizontal_functoriality(REP, u, u) == 0.0


def test_vertical_inverse_negates():
    h = point_homotopy(SO3, [0.3, -0.7, 0.4], [0.5, 0.1, -0.4], 200, 100)
    assert check_vertical_inverse(REP, h) <= 1e-8
    hv = generate_homotopy(h.t_V, lambda t, s: -np.zeros((t.size, 3)), 100)
    assert check_vertical_functoriality(REP, hv, h) < 5e-5


def test_homotopy_holonomy_is_a_chain_homotopy():
    model, rep = builtin_model("constant_coeff")
    fx = fixture(model, rep, 200, 100, 1e-3)
    ch = homotopy_holonomy(rep, fx.h1)
    assert ch.residual <= 1e-5
    with pytest.raises(ComplexError):
        homotopy_holonomy(rep, fx.h1, tol_hol=1e-14)


def test_curvature_transport_with_zero_variation():
    p = constant_path(SO3, [0.0], [0.3, -0.7, 0.4], 100)
    h = generate_homotopy(p, lambda t, s: np.zeros((t.size, 3)), 20)
    lhs, rhs = curvature_transport_sides(REP, h, 10)
    assert np.max(np.abs(lhs)) <= 1e-10 and np.max(np.abs(rhs)) <= 1e-10
    thin = thin_reparam_homotopy(p, M=20)
    lhs, rhs = curvature_transport_sides(REP, thin, 10)
    assert np.max(np.abs(rhs)) <= 1e-8
    with pytest.raises(HolonomyError, match="interior"):
        curvature_transport_check(REP, h, 0)


def test_curvature_transport_nontrivial_model():
    model, rep = builtin_model("constant_coeff")
    fx = fixture(model, rep, 200, 100, 1e-3)
    lhs, rhs = curvature_transport_sides(rep, fx.h1, 50)
    assert np.linalg.norm(lhs, 2) > 0.05
    assert np.linalg.norm(lhs - rhs, 2) < 1e-4


def test_error_estimate_needs_divisible_grids():
    h = point_homotopy(SO3, [0.3, -0.7, 0.4], [0.5, 0.1, -0.4], 102, 50)
    assert np.isnan(holonomy_data(REP, h).error_estimate)


def test_model_mismatch_rejected():
    with pytest.raises(HolonomyError, match="different models"):
        transport(TREP, unit_path(SO3, [0.0], 10))


SNIPPET = """
import numpy as np
from holonomy2.models import builtin_model
from holonomy2.scenarios import fixture
from holonomy2.holonomy import hol_matrix
m, r = builtin_model("tangent_sphere_type1")
fx = fixture(m, r, 200, 100, 1e-3)
print(hol_matrix(r, fx.h1).tobytes().hex())
"""


def test_holonomy_bitwise_independent_of_threads():
    outs = set()
    for n in ("1", "3"):
        env = dict(os.environ, HOLONOMY2_THREADS=n)
        outs.add(subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True,
                                text=True, check=True).stdout)
    assert len(outs) == 1
