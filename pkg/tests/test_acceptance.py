"""Acceptance criteria 1-10, one test each.

Every test records a one-line PASS/FAIL summary (printed at the end of the
pytest run) before asserting, so failures are reported with their numbers.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.linalg import expm

from _gauge import GaugeData
from conftest import ACCEPTANCE
from holonomy2.complexes import (ChainHomotopy, ChainMap, KernelArrow, TwoTermComplex,
                                 compose_chain_maps, hcomp, hinv, integrate_kernel_path,
                                 invert_chain_map, kernel_inv, kernel_mult, kernel_unit, vcomp,
                                 vinv, whisker_alternate)
from holonomy2.config import RunConfig
from holonomy2.generators import hemisphere_cover, random_point_homotopy, sphere_cover
from holonomy2.holonomy import chain_homotopy_residuals, curvature_transport_check, transport
from holonomy2.integrability import OBSTRUCTION, ASphere, periods, type0_period, type1_identity_check
from holonomy2.models import REGISTRY, builtin_model, cross_matrix
from holonomy2.paths import constant_path
from holonomy2.report import Report
from holonomy2.scenarios import default_spheres, fixture, laws_checks, truncation_checks


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def gap(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def test_criterion_01_gauge_groupoid_algebra():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20261014)
    worst = 0.0
    for _ in range(1000):
        g = GaugeData(rng)
        A, B = g.chain_map(), g.chain_map()
        p1, q1 = g.homotopy_from(A), g.homotopy_from(B)
        p2, q2 = g.homotopy_from(p1.target), g.homotopy_from(q1.target)
        p3 = g.homotopy_from(p2.target)
        unitA = ChainHomotopy.unit(p1.target)
        vals = [
            # associativity
            gap(vcomp(p3, vcomp(p2, p1)).phi, vcomp(vcomp(p3, p2), p1).phi),
            gap(compose_chain_maps(B, compose_chain_maps(A, B)).A_E,
                compose_chain_maps(compose_chain_maps(B, A), B).A_E),
            # units
            gap(vcomp(unitA, p1).phi, p1.phi),
            gap(hcomp(ChainHomotopy.unit(ChainMap.identity(g.cx, g.x)), p1).phi, p1.phi),
            # inverses
            gap(vcomp(vinv(p1), p1).phi, 0.0),
            gap(hcomp(hinv(p1), p1).phi, 0.0),
            gap(compose_chain_maps(invert_chain_map(A), A).A_C, np.eye(g.nC)),
            # interchange
            gap(hcomp(vcomp(q2, q1), vcomp(p2, p1)).phi, vcomp(hcomp(q2, p2), hcomp(q1, p1)).phi),
            # whiskering
            gap(hcomp(q1, p1).phi, whisker_alternate(q1, p1)),
        ]
        worst = max(worst, *vals)
    dt = time.perf_counter() - t0
    record(1, worst <= 1e-12 and dt < 5.0,
           f"1000 random gauge configurations, worst law residual {worst:.2e} (<= 1e-12), {dt:.2f} s (< 5 s)")


def test_criterion_02_transport_oracle():
    t0 = time.perf_counter()
    model, rep = builtin_model("so3_string")
    xi = np.array([0.3, -0.7, 0.4])
    ref = expm(-cross_matrix(xi))
    err100 = gap(transport(rep, constant_path(model, [0.0], xi, 100)).A_E, ref)
    Ns = [8, 16, 32, 64]
    errs = [gap(transport(rep, constant_path(model, [0.0], xi, n)).A_E, ref) for n in Ns]
    orders = [np.log2(errs[k] / errs[k + 1]) for k in range(3)]
    dt = time.perf_counter() - t0
    record(2, err100 <= 1e-8 and min(orders) >= 3.8 and dt < 1.0,
           f"error at N=100 {err100:.2e} (<= 1e-8), pairwise orders {np.round(orders, 3).tolist()} "
           f"(>= 3.8), {dt:.2f} s (< 1 s)")


def test_criterion_03_chain_homotopy_lemma():
    t0 = time.perf_counter()
    model, rep = builtin_model("so3_string")
    worst, ratios = 0.0, []
    for k in range(20):
        res = []
        for n in (200, 400):
            h = random_point_homotopy(model, np.random.default_rng(k), n, n)
            rC, rE = chain_homotopy_residuals(rep, h)
            res.append((rC, rE))
        worst = max(worst, *res[0])
        # the C-equation is exact here (d = 0); the E-equation carries the error
        ratios.append(res[0][1] / res[1][1])
    dt = time.perf_counter() - t0
    record(3, worst <= 1e-4 and min(ratios) >= 3.5 and dt < 60.0,
           f"20 so(3) homotopies at N=M=200: worst residual {worst:.2e} (<= 1e-4); "
           f"min shrink factor on doubling {min(ratios):.1f} (>= 3.5); {dt:.1f} s (< 60 s)")


def test_criterion_04_curvature_transport():
    parts, ok = [], True
    for name in ("so3_string", "tangent_sphere_type1"):
        model, rep = builtin_model(name)
        res = {}
        for N, M in ((100, 50), (200, 100)):
            fx = fixture(model, rep, N, M, 1e-3)
            res[N] = curvature_transport_check(rep, fx.h1, M // 2)
        order = np.log2(res[100] / res[200])
        ok = ok and res[200] <= 1e-4 and order >= 2.0
        parts.append(f"{name}: {res[200]:.2e} at defaults, order {order:.2f}")
    record(4, ok, "; ".join(parts) + " (<= 1e-4, order >= 2)")


FUNCTOR_CHECKS = ("holonomy.vertical_additivity", "holonomy.horizontal_identity",
                  "holonomy.vertical_inverse", "holonomy.thin_vanishing",
                  "holonomy.reparametrization")


def test_criterion_05_functoriality_suite():
    bad, worst = [], {k: 0.0 for k in FUNCTOR_CHECKS}
    for name in sorted(REGISTRY):
        model, rep = builtin_model(name)
        cfg = RunConfig(name=name)
        rpt = Report("laws", cfg.as_dict())
        laws_checks(rpt, fixture(model, rep, cfg.N, cfg.M, cfg.tol_path), cfg)
        for c in rpt.checks:
            if c.name in FUNCTOR_CHECKS:
                worst[c.name] = max(worst[c.name], c.residual)
                if not c.passed:
                    bad.append(f"{name}:{c.name}")
    summary = ", ".join(f"{k.split('.')[1]} {v:.1e}" for k, v in worst.items())
    record(5, not bad, f"{len(REGISTRY)} models; worst {summary}" + (f"; failing {bad}" if bad else ""))


def test_criterion_06_type1_identity():
    model, rep = builtin_model("tangent_sphere_type1")
    fx = fixture(model, rep, 200, 100, 1e-3)
    res = max(type1_identity_check(rep, h) for h in (fx.h1, fx.h2, fx.h3))
    pr = periods(rep, default_spheres(model, rep, 200, 100, 1e-3))
    vanish = all(n <= t for n, t in zip(pr.norms, pr.thresholds))
    record(6, res <= 1e-5 and vanish,
           f"type-1 identity residual {res:.2e} (<= 1e-5); sphere period {pr.norms[0]:.1e} "
           f"vs error estimate {pr.error_estimates[0]:.1e}, verdict '{pr.verdict}'")


def test_criterion_07_prequantization_periods():
    t0 = time.perf_counter()
    model, rep = builtin_model("prequantization_s2")
    sph = ASphere(sphere_cover(model, 400, 400))
    pr = periods(rep, [sph])
    full = pr.norms[0]
    hemi = float(type0_period(rep, hemisphere_cover(model, 400, 400))[0, 0])
    dt = time.perf_counter() - t0
    ok = abs(full - 4 * np.pi) <= 1e-3 and abs(hemi - 2 * np.pi) <= 1e-3 and pr.verdict == OBSTRUCTION
    record(7, ok and dt < 120.0,
           f"full sphere {full:.9f} (4pi error {abs(full - 4 * np.pi):.1e}), hemisphere error "
           f"{abs(hemi - 2 * np.pi):.1e}, verdict '{pr.verdict}', {dt:.1f} s (< 120 s)")


def test_criterion_08_truncation():
    parts, ok = [], True
    for name in ("so3_string", "tangent_sphere_type1"):
        model, rep = builtin_model(name)
        cfg = RunConfig(name=name)
        rpt = Report("truncate-check", cfg.as_dict())
        truncation_checks(rpt, fixture(model, rep, cfg.N, cfg.M, cfg.tol_path), cfg)
        by = {c.name: c for c in rpt.checks}
        comp = by["truncation.composition"]
        ok = ok and rpt.ok
        parts.append(f"{name}: composition {comp.residual:.1e}, 10x flip "
                     f"{'ok' if by['truncation.perturbation_flips'].passed else 'WRONG'}")
    # a 0.1x perturbation must keep the verdict
    from holonomy2.transformation import TransOneMor, TransTwoMor, equivalent, two_vtgt

    model, rep = builtin_model("so3_string")
    fx = fixture(model, rep, 200, 100, 1e-3)
    m0 = TransOneMor(rep, [0.2], fx.a0, [1.0, 0.5, -0.2])
    m1 = two_vtgt(TransTwoMor(rep, [0.2], fx.h1, m0.e))
    small = TransOneMor(rep, m1.c + 1e-6, m1.path, m1.e)
    big = TransOneMor(rep, m1.c + 1e-4, m1.path, m1.e)
    keep = equivalent(m0, small, fx.h1, 1e-5).verdict and not equivalent(m0, big, fx.h1, 1e-5).verdict
    record(8, ok and keep, "; ".join(parts) + f" (<= 1e-4); 0.1x keeps / 10x flips: {keep}")


def test_criterion_09_kernel_groupoid():
    rng = np.random.default_rng(9)
    exact = True
    for _ in range(300):
        n = int(rng.integers(1, 5))
        cx = TwoTermComplex.constant(rng.integers(-5, 6, (n, n)).astype(float))
        e = rng.integers(-9, 10, n).astype(float)
        g1 = KernelArrow(rng.integers(-9, 10, n).astype(float), e, [0.0], cx)
        g2 = KernelArrow(rng.integers(-9, 10, n).astype(float), g1.target, [0.0], cx)
        g3 = KernelArrow(rng.integers(-9, 10, n).astype(float), g2.target, [0.0], cx)
        a = kernel_mult(g3, kernel_mult(g2, g1))
        b = kernel_mult(kernel_mult(g3, g2), g1)
        u = kernel_mult(g1, kernel_unit(cx, [0.0], e))
        i = kernel_mult(kernel_inv(g1), g1)
        exact &= (np.array_equal(a.c, b.c) and np.array_equal(u.c, g1.c)
                  and not np.any(i.c) and np.array_equal(i.target, e))
    s = np.linspace(0.0, 1.0, 101)
    cx = TwoTermComplex.constant(np.eye(4))
    c = np.stack([np.sin(np.pi * s), np.exp(s), s**5 - 2 * s**3, np.cos(3 * np.pi * s) ** 2], axis=1)
    want = [2 / np.pi, np.e - 1, 1 / 6 - 0.5, 0.5]
    err = gap(integrate_kernel_path(cx, [0.0], c, np.zeros((101, 4))).c, want)
    record(9, exact and err <= 1e-8,
           f"groupoid laws exact on 300 integer samples: {exact}; K-path integral error {err:.1e} at N=100 (<= 1e-8)")


def _scenario_json(name, tmp_path, tag, threads):
    out = tmp_path / f"{name}-{tag}.json"
    env = dict(os.environ, HOLONOMY2_THREADS=threads)
    subprocess.run([sys.executable, "-m", "holonomy2", "scenario", "--name", name, "--report",
                    str(out), "--no-wall-clock"], env=env, check=True, capture_output=True)
    return out.read_bytes()


def test_criterion_10_determinism(tmp_path):
    same = {}
    for name in sorted(REGISTRY):
        a = _scenario_json(name, tmp_path, "a", "1")
        b = _scenario_json(name, tmp_path, "b", "2")
        same[name] = a == b and json.loads(a)["verdict"] == "pass"
    record(10, all(same.values()),
           "scenario reports bit-identical across runs (1 vs 2 threads): "
           + ", ".join(f"{k} {'yes' if v else 'NO'}" for k, v in same.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
