"""Built-in path and homotopy generators used by the scenarios and the CLI."""

from __future__ import annotations

import numpy as np

from .algebroid import AlgebroidModel
from .paths import (TOL_PATH, AHomotopy, APath, PathError, constant_path,
                    generate_homotopy, homotopy_from_map, path_from_curve)

SOUTH_POLE = np.array([0.0, 0.0, -1.0])


def parse_path_spec(model: AlgebroidModel, spec: str, N: int, x0=None) -> APath:
    """Build a path from ``kind:args``.

    Kinds: ``constant:xi_1,...,xi_r`` (constant section from ``x0``, default the
    chart centre) and ``unit`` (unit path at ``x0``).
    """
    kind, _, rest = spec.partition(":")
    if x0 is None:
        x0 = 0.5 * (model.chart_lo + model.chart_hi)
    if kind == "constant":
        try:
            xi = np.array([float(v) for v in rest.split(",")])
        except ValueError:
            raise PathError(f"malformed constant path spec {spec!r}") from None
        if xi.shape != (model.rank,):
            raise PathError(f"constant path needs {model.rank} components, got {xi.size}")
        return constant_path(model, x0, xi, N)
    if kind == "unit":
        from .paths import unit_path

        return unit_path(model, x0, N)
    raise PathError(f"unknown path kind {kind!r} (expected constant or unit)")


def sinusoidal_variation(eta, growth: float = 1.0):
    """``b(t, s) = sin(pi t) (1 + growth s) eta``, vanishing at t = 0, 1."""
    eta = np.asarray(eta, dtype=float)

    def b(t, s):
        return np.sin(np.pi * t)[:, None] * (1.0 + growth * s) * eta[None, :]

    return b


def point_homotopy(model: AlgebroidModel, xi, eta, N: int = 200, M: int = 100,
                   growth: float = 1.0, tol_path: float = TOL_PATH) -> AHomotopy:
    """Generated homotopy from the constant path xi along a sinusoidal variation."""
    x0 = 0.5 * (model.chart_lo + model.chart_hi)
    a0 = constant_path(model, x0, xi, N, tol_path)
    return generate_homotopy(a0, sinusoidal_variation(eta, growth), M)


def random_point_homotopy(model: AlgebroidModel, rng: np.random.Generator, N: int = 200,
                          M: int = 100) -> AHomotopy:
    xi = rng.uniform(-1.0, 1.0, model.rank)
    eta = rng.uniform(-1.0, 1.0, model.rank)
    return point_homotopy(model, xi, eta, N, M, growth=float(rng.uniform(0.0, 1.0)))


def chart_family(model: AlgebroidModel, x0, v, w, N: int = 200, M: int = 100,
                 tol_path: float = TOL_PATH) -> AHomotopy:
    """Planar-chart homotopy ``x0 + t v + s sin(pi t) w`` with fixed endpoints.

    For models whose anchor is the identity on a 2-dimensional chart.
    """
    x0, v, w = (np.asarray(u, dtype=float) for u in (x0, v, w))

    def fn(T, S):
        sp = np.sin(np.pi * T)[..., None]
        g = x0 + T[..., None] * v + S[..., None] * sp * w
        gt = v + S[..., None] * np.pi * np.cos(np.pi * T)[..., None] * w
        gs = sp * w + 0.0 * T[..., None]
        return g, gt, gs

    return homotopy_from_map(model, fn, N, M, tol_path)


def chart_bubble(model: AlgebroidModel, x0, radius: float, N: int = 200, M: int = 100,
                 tol_path: float = TOL_PATH) -> AHomotopy:
    """Planar A-sphere at x0: ``x0 + R sin(pi s) (cos 2 pi t - 1, sin 2 pi t)``."""
    x0 = np.asarray(x0, dtype=float)

    def fn(T, S):
        amp = radius * np.sin(np.pi * S)
        damp = radius * np.pi * np.cos(np.pi * S)
        c, s = np.cos(2 * np.pi * T), np.sin(2 * np.pi * T)
        g = x0 + np.stack([amp * (c - 1.0), amp * s], axis=-1)
        gt = np.stack([-2 * np.pi * amp * s, 2 * np.pi * amp * c], axis=-1)
        gs = np.stack([damp * (c - 1.0), damp * s], axis=-1)
        return g, gt, gs

    h = homotopy_from_map(model, fn, N, M, tol_path)
    return _pin_unit_faces(h)


def _sphere_map(beta_max: float):
    # p(beta, phi): rotation of the south pole about the axis (cos phi, sin phi, 0)
    # by angle beta; beta = beta_max * s, phi = -2 pi t (outward orientation).
    def fn(T, S):
        beta = beta_max * S
        phi = -2.0 * np.pi * T
        sb, cb = np.sin(beta), np.cos(beta)
        sf, cf = np.sin(phi), np.cos(phi)
        p = np.stack([sb * sf, sb * cb * (cf - 1.0), -cb * cb - sb * sb * cf], axis=-1)
        dphi = np.stack([sb * cf, -sb * cb * sf, sb * sb * sf], axis=-1)
        dbeta = np.stack([cb * sf, (cb * cb - sb * sb) * (cf - 1.0),
                          2 * sb * cb - 2 * sb * cb * cf], axis=-1)
        return p, -2.0 * np.pi * dphi, beta_max * dbeta

    return fn


def sphere_cover(model: AlgebroidModel, N: int = 400, M: int = 400,
                 tol_path: float = TOL_PATH) -> AHomotopy:
    """Degree-one A-sphere of the unit sphere based at the south pole."""
    h = homotopy_from_map(model, _sphere_map(np.pi), N, M, tol_path)
    return _pin_unit_faces(h)


def hemisphere_cover(model: AlgebroidModel, N: int = 400, M: int = 400,
                     tol_path: float = TOL_PATH) -> AHomotopy:
    """Homotopy from the unit path to the equatorial loop sweeping a hemisphere."""
    return homotopy_from_map(model, _sphere_map(0.5 * np.pi), N, M, tol_path)


def _pin_unit_faces(h: AHomotopy) -> AHomotopy:
    """Snap the s = 0, 1 faces onto exact unit paths (roundoff cleanup)."""
    a = np.array(h.a)
    g = np.array(h.gamma)
    edge = max(float(np.max(np.abs(a[:, 0]))), float(np.max(np.abs(a[:, -1]))))
    if edge > h.tol_path:
        raise PathError(f"sphere faces are not unit paths (|a| up to {edge:.3e})")
    a[:, 0] = 0.0
    a[:, -1] = 0.0
    g[:, 0] = g[0, 0]
    g[:, -1] = g[0, 0]
    return h.replace(g, a)
