"""Scenario drivers: fixed test fixtures per built-in model and the check suites run on them.

Every driver takes a :class:`RunConfig` and returns a :class:`Report`; checks
are appended in a fixed order so reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidModel, RepUpToHomotopy, validate_ruth
from .config import RunConfig
from .generators import (SOUTH_POLE, chart_bubble, hemisphere_cover, sinusoidal_variation,
                         sphere_cover)
from .holonomy import (chain_homotopy_residuals, check_horizontal_functoriality,
                       check_transport_concat, check_transport_inverse, check_vertical_functoriality,
                       check_vertical_inverse, curvature_transport_check, hol_matrix, holonomy_data,
                       table_multiplicativity_residual, transport)
from .integrability import (ASphere, periods, transgression, type0_equivalence_check,
                            type0_period, type1_identity_check)
from .models import builtin_model, cross_matrix
from .paths import (AHomotopy, APath, PathError, constant_path, generate_homotopy, horizontal_unit,
                    reparametrize_homotopy, thin_reparam_homotopy, unit_path, vconcat, vinv)
from .report import Report
from .transformation import (TransOneMor, TransTwoMor, equivalent, one_tgt, two_vtgt,
                             truncation_composition_check)

# acceptance-level tolerances that are not run-config knobs
TOL_FUNCTOR = 5e-5
TOL_CHAIN_HOMOTOPY = 1e-4
TOL_CURVATURE = 1e-4
TOL_TRUNCATION = 1e-4
TOL_VINV = 1e-8
TOL_CONCAT = 1e-6
TOL_PERIOD = 1e-3
SPHERE_GRID = 400

BASE_POINTS = {
    "tangent_sphere_type1": np.array([-0.6, -0.4]),
    "prequantization_s2": SOUTH_POLE,
}


def rodrigues(xi) -> np.ndarray:
    """Closed-form ``exp(-[xi]_x)`` (the so(3) transport along a constant path)."""
    xi = np.asarray(xi, dtype=float)
    th = float(np.linalg.norm(xi))
    K = -cross_matrix(xi)
    if th == 0.0:
        return np.eye(3)
    return np.eye(3) + (np.sin(th) / th) * K + ((1.0 - np.cos(th)) / th**2) * (K @ K)


@dataclass
class Fixture:
    """Composable homotopies on one model.

    ``h1: a0 => .``, ``h2: t_V(h1) => .`` (vertically composable) and
    ``h3: a1 => .`` with ``a1`` starting at the target of ``a0``
    (horizontally composable as ``h3 •_H h1``).
    """

    model: AlgebroidModel
    rep: RepUpToHomotopy
    x0: np.ndarray
    a0: APath
    a1: APath
    h1: AHomotopy
    h2: AHomotopy
    h3: AHomotopy


def base_point(model: AlgebroidModel) -> np.ndarray:
    if model.name in BASE_POINTS:
        return BASE_POINTS[model.name]
    return 0.5 * (model.chart_lo + model.chart_hi)


def fixture(model: AlgebroidModel, rep: RepUpToHomotopy, N: int, M: int, tol_path: float,
            seed: int = 7) -> Fixture:
    rng = np.random.default_rng(seed)
    r = model.rank
    xi0, xi1, eta1, eta2, eta3 = (rng.uniform(-0.6, 0.6, r) for _ in range(5))
    x0 = base_point(model)
    a0 = constant_path(model, x0, xi0, N, tol_path)
    a1 = constant_path(model, a0.target, xi1, N, tol_path)
    h1 = generate_homotopy(a0, sinusoidal_variation(eta1, 0.5), M)
    h2 = generate_homotopy(h1.t_V, sinusoidal_variation(eta2, -0.3), M)
    h3 = generate_homotopy(a1, sinusoidal_variation(eta3, 0.8), M)
    return Fixture(model, rep, x0, a0, a1, h1, h2, h3)


def _opn(X) -> float:
    X = np.asarray(X)
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def _cfg_model(cfg: RunConfig):
    return builtin_model(cfg.name, cfg.params)


# individual suites


def validation_checks(report: Report, model, rep, cfg: RunConfig) -> None:
    vr = validate_ruth(model, rep, tol=cfg.tol_model)
    for k, v in vr.residuals.items():
        tol = 1e-12 if k == "gamma_linear" else (0.0 if k in ("bracket_antisym", "omega_antisym") else cfg.tol_model)
        report.add(f"model.{k}", v, tol)


def laws_checks(report: Report, fx: Fixture, cfg: RunConfig) -> None:
    """Transport and holonomy laws on the fixture."""
    rep = fx.rep
    report.add("transport.chain_condition", _chain_res(rep, fx.a0), cfg.tol_transport)
    report.add("transport.concat", check_transport_concat(rep, fx.a1, fx.a0), TOL_CONCAT)
    report.add("transport.inverse", check_transport_inverse(rep, fx.a0), TOL_CONCAT)
    d1 = holonomy_data(rep, fx.h1)
    report.add("transport.table_restart", table_multiplicativity_residual(rep, d1.table), TOL_CONCAT)
    rC, rE = chain_homotopy_residuals(rep, fx.h1)
    report.add("holonomy.chain_homotopy_C", rC, TOL_CHAIN_HOMOTOPY)
    report.add("holonomy.chain_homotopy_E", rE, TOL_CHAIN_HOMOTOPY)
    report.add("holonomy.vertical_additivity", check_vertical_functoriality(rep, fx.h2, fx.h1), TOL_FUNCTOR)
    report.add("holonomy.horizontal_identity", check_horizontal_functoriality(rep, fx.h3, fx.h1), TOL_FUNCTOR)
    report.add("holonomy.vertical_inverse", check_vertical_inverse(rep, fx.h1), TOL_VINV)
    thin = thin_reparam_homotopy(fx.a0, "smoothstep", fx.h1.M)
    report.add("holonomy.thin_vanishing", _opn(hol_matrix(rep, thin)), cfg.tol_thin)
    hr = reparametrize_homotopy(fx.h1)
    report.add("holonomy.reparametrization", _opn(hol_matrix(rep, hr) - d1.phi), cfg.tol_hol)
    hu = horizontal_unit(fx.model, fx.x0, fx.h1.N, fx.h1.M)
    report.add("holonomy.unit", _opn(hol_matrix(rep, hu)), 0.0)
    report.add("holonomy.curvature_transport",
               curvature_transport_check(rep, fx.h1, fx.h1.M // 2), TOL_CURVATURE)


def _chain_res(rep, p) -> float:
    T = transport(rep, p, tol_transport=float("inf"))
    D = rep.complex.d
    return float(np.max(np.abs(T.A_E @ D(p.source) - D(p.target) @ T.A_C), initial=0.0))


def truncation_checks(report: Report, fx: Fixture, cfg: RunConfig) -> None:
    rep = fx.rep
    rng = np.random.default_rng(11)
    cx = rep.complex
    e0 = rng.uniform(-1, 1, cx.dim_E)
    c0 = rng.uniform(-1, 1, cx.dim_C)
    c1 = rng.uniform(-1, 1, cx.dim_C)
    m0 = TransOneMor(rep, c0, fx.a0, e0)
    m0p = two_vtgt(TransTwoMor(rep, c0, fx.h1, e0))
    m1 = TransOneMor(rep, c1, fx.a1, one_tgt(m0))
    m1p = two_vtgt(TransTwoMor(rep, c1, fx.h3, m1.e))
    tr = truncation_composition_check(m0, m1, m0p, m1p, (fx.h1, fx.h3), cfg.tol_hol)
    report.add("truncation.composition", tr.residual, TOL_TRUNCATION, sign=tr.sign)
    report.add("truncation.factors_equivalent", 0.0 if tr.verdict else 1.0, 0.0)
    # a 10x tolerance perturbation of c must flip the verdict
    bump = np.zeros(cx.dim_C)
    if cx.dim_C:
        bump[0] = 10.0 * cfg.tol_hol
    pert = TransOneMor(rep, m0p.c + bump, m0p.path, m0p.e)
    base = equivalent(m0, m0p, fx.h1, cfg.tol_hol).verdict
    flipped = equivalent(m0, pert, fx.h1, cfg.tol_hol).verdict
    report.add("truncation.perturbation_flips", 0.0 if (base and not flipped) else 1.0, 0.0)


def default_spheres(model: AlgebroidModel, rep: RepUpToHomotopy, N: int, M: int, tol_path: float):
    """Built-in A-sphere generators for ``periods``."""
    if model.name == "prequantization_s2":
        return [ASphere(sphere_cover(model, N, M, tol_path))]
    if model.name == "tangent_sphere_type1":
        return [ASphere(chart_bubble(model, base_point(model), 0.8, N, M, tol_path))]
    return [ASphere(point_sphere(model, N, M, tol_path))]


def point_sphere(model: AlgebroidModel, N: int, M: int, tol_path: float) -> AHomotopy:
    """Sphere on a point algebroid: ``h •_V h^{-1_V}`` shape for non-abelian brackets.

    For an abelian bracket a genuine two-mode sphere is generated instead;
    otherwise the generated family from the unit path is closed up with its
    vertical inverse, which is a sphere with vanishing period.
    """
    x0 = base_point(model)
    u = unit_path(model, x0, N, tol_path)
    eta1 = np.zeros(model.rank)
    eta2 = np.zeros(model.rank)
    eta1[0], eta2[1] = 0.7, -0.4
    if not np.any(model.c(x0)):
        def b(t, s):
            st = np.sin(np.pi * t)[:, None]
            return st * (np.sin(2 * np.pi * s) * eta1 + np.sin(4 * np.pi * s) * eta2)

        h = generate_homotopy(u, b, M)
    else:
        # h: unit => loop, closed by vinv: loop => unit
        h0 = generate_homotopy(u, sinusoidal_variation(eta1 + eta2, 0.0), M // 2)
        h = vconcat(vinv(h0), h0)
        if h.M != M:
            raise PathError("point sphere grid mismatch")
    from .generators import _pin_unit_faces

    return _pin_unit_faces(h)


def periods_checks(report: Report, model, rep, spheres, expected=None) -> None:
    pr = periods(rep, spheres)
    for k, (n, est, thr) in enumerate(zip(pr.norms, pr.error_estimates, pr.thresholds)):
        report.add(f"periods.sphere{k}.inverse_negation",
                   _opn(hol_matrix(rep, vinv(spheres[k].homotopy)) + pr.periods[k]), 1e-10)
        report.info[f"periods.sphere{k}.norm"] = n
        report.info[f"periods.sphere{k}.error_estimate"] = est
        report.info[f"periods.sphere{k}.threshold"] = thr
        report.info[f"periods.sphere{k}.matrix"] = np.asarray(pr.periods[k]).tolist()
    report.info["periods.verdict"] = pr.verdict
    if expected is not None:
        for k, val in enumerate(expected):
            if val is None:
                continue
            d = holonomy_data(rep, spheres[k].homotopy)
            report.add(f"periods.sphere{k}.value", abs(pr.norms[k] - val), TOL_PERIOD,
                       error_estimate=d.error_estimate, expected=val)
    return pr


# scenario drivers


def string_so3_scenario(cfg: RunConfig) -> Report:
    model, rep = builtin_model("so3_string")
    rpt = Report("scenario", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    xi = np.array([0.3, -0.7, 0.4])
    p = constant_path(model, np.zeros(1), xi, 100, cfg.tol_path)
    rpt.add("transport.expm_oracle_N100", _opn(transport(rep, p).A_E - rodrigues(xi)), 1e-8)
    # the C-side connection is trivial: hol^C is the identity
    rpt.add("transport.C_identity", _opn(transport(rep, p).A_C - np.eye(1)), 1e-14)
    fx = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path)
    laws_checks(rpt, fx, cfg)
    truncation_checks(rpt, fx, cfg)
    return rpt


def tangent_scenario(cfg: RunConfig) -> Report:
    model, rep = builtin_model("tangent_sphere_type1", cfg.params if cfg.name == "tangent_sphere_type1" else None)
    rpt = Report("scenario", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    fx = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path)
    laws_checks(rpt, fx, cfg)
    for name, h in (("h1", fx.h1), ("h2", fx.h2), ("h3", fx.h3)):
        rpt.add(f"type1.identity_{name}", type1_identity_check(rep, h), cfg.tol_hol)
    thin = thin_reparam_homotopy(fx.a0, "smoothstep", cfg.M)
    rpt.add("type1.identity_thin", type1_identity_check(rep, thin), 1e-8)
    spheres = default_spheres(model, rep, cfg.N, cfg.M, cfg.tol_path)
    pr = periods_checks(rpt, model, rep, spheres)
    for k, (n, thr) in enumerate(zip(pr.norms, pr.thresholds)):
        rpt.add(f"type1.period{k}_vanishes", n, thr)
    truncation_checks(rpt, fx, cfg)
    return rpt


def prequantization_scenario(cfg: RunConfig) -> Report:
    model, rep = builtin_model("prequantization_s2", cfg.params if cfg.name == "prequantization_s2" else None)
    rpt = Report("scenario", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    fx = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path)
    laws_checks(rpt, fx, cfg)
    n = SPHERE_GRID
    full = ASphere(sphere_cover(model, n, n, cfg.tol_path))
    hemi = hemisphere_cover(model, n, n, cfg.tol_path)
    periods_checks(rpt, model, rep, [full], expected=[4 * np.pi])
    rpt.add("type0.hemisphere", abs(float(type0_period(rep, hemi)[0, 0]) - 2 * np.pi), TOL_PERIOD,
            error_estimate=holonomy_data(rep, hemi).error_estimate)
    rpt.add("type0.period_matches_holonomy", _opn(type0_period(rep, full.homotopy) - hol_matrix(rep, full.homotopy)), 1e-10)
    rpt.add("periods.obstruction_verdict", 0.0 if rpt.info["periods.verdict"] == "obstruction found" else 1.0, 0.0)
    tg = transgression(rep, full, [1.0])
    rpt.add("transgression.full_sphere", abs(float(tg.c[0]) - 4 * np.pi), TOL_PERIOD)
    # prescribed shift c1 = c0 + 4 pi e through the full-sphere witness
    u = full.homotopy.s_V
    c0, e = np.array([0.25]), np.array([1.0])
    res = type0_equivalence_check(rep, c0, u, c0 + 4 * np.pi * e, u, e, full.homotopy, TOL_PERIOD)
    rpt.add("type0.equivalence_4pi", res["residual"], TOL_PERIOD, sign=res["sign"])
    rpt.add("type0.equivalence_consistent", 0.0 if res["consistent_with_equivalent"] else 1.0, 0.0)
    wrong = type0_equivalence_check(rep, c0, u, c0 + 4 * np.pi * e + 1.0, u, e, full.homotopy, TOL_PERIOD)
    rpt.add("type0.equivalence_mismatch_rejected", 0.0 if not wrong["verdict"] else 1.0, 0.0)
    vt = two_vtgt(TransTwoMor(rep, c0, full.homotopy, e))
    rpt.add("transformation.vtgt_shift_4pi", abs(float(c0[0] - vt.c[0]) - 4 * np.pi), TOL_PERIOD)
    return rpt


def constant_coeff_scenario(cfg: RunConfig) -> Report:
    model, rep = builtin_model("constant_coeff", cfg.params if cfg.name == "constant_coeff" else None)
    rpt = Report("scenario", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    fx = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path)
    laws_checks(rpt, fx, cfg)
    rpt.add("type1.identity_h1", type1_identity_check(rep, fx.h1), cfg.tol_hol)
    truncation_checks(rpt, fx, cfg)
    return rpt


def abelian_scenario(cfg: RunConfig) -> Report:
    model, rep = builtin_model("abelian", cfg.params if cfg.name == "abelian" else None)
    rpt = Report("scenario", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    fx = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path)
    laws_checks(rpt, fx, cfg)
    spheres = default_spheres(model, rep, cfg.N, cfg.M, cfg.tol_path)
    periods_checks(rpt, model, rep, spheres)
    h = spheres[0].homotopy
    rpt.add("type0.period_matches_holonomy", _opn(type0_period(rep, h) - hol_matrix(rep, h)), 1e-10)
    if not model.params["scale"]:
        rpt.add("periods.zero_omega_exact", _opn(hol_matrix(rep, h)), 0.0)
    return rpt


SCENARIOS = {
    "so3_string": string_so3_scenario,
    "tangent_sphere_type1": tangent_scenario,
    "prequantization_s2": prequantization_scenario,
    "constant_coeff": constant_coeff_scenario,
    "abelian": abelian_scenario,
}


def laws_report(cfg: RunConfig) -> Report:
    model, rep = _cfg_model(cfg)
    rpt = Report("laws", cfg.as_dict())
    laws_checks(rpt, fixture(model, rep, cfg.N, cfg.M, cfg.tol_path), cfg)
    return rpt
