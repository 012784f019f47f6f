"""Built-in algebroid models with their representations up to homotopy."""

from __future__ import annotations

import numpy as np

from .algebroid import AlgebroidModel, ModelError, RepUpToHomotopy
from .complexes import TwoTermComplex

EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_i, _k, _j] = -1.0


def _lead(x) -> tuple:
    return np.asarray(x).shape[:-1]


def cross_matrix(v) -> np.ndarray:
    """``[v]_x`` with ``[v]_x w = v × w``, batched over leading axes."""
    v = np.asarray(v, dtype=float)
    z = np.zeros(v.shape[:-1])
    return np.stack([
        np.stack([z, -v[..., 2], v[..., 1]], axis=-1),
        np.stack([v[..., 2], z, -v[..., 0]], axis=-1),
        np.stack([-v[..., 1], v[..., 0], z], axis=-1),
    ], axis=-2)


def _const(arr):
    arr = np.asarray(arr, dtype=float)

    def f(x):
        return np.broadcast_to(arr, _lead(x) + arr.shape).copy()

    return f


def _zero_gamma(d):
    def g(x, a):
        return np.zeros(np.broadcast_shapes(_lead(x), _lead(a)) + (d, d))

    return g


def _point_algebroid(name, structure_constants, params) -> AlgebroidModel:
    r = structure_constants.shape[0]
    return AlgebroidModel(
        name=name, base_dim=1, rank=r,
        anchor=_const(np.zeros((1, r))), structure=_const(structure_constants),
        chart_lo=[-1.0], chart_hi=[1.0], params={**params, "_point_base": True})


def so3_string(params=None):
    """so(3) on a point acting on ``R --0--> so(3)*`` with ``omega(a,b) = <[a,b], ·>``."""
    params = dict(params or {})
    _no_params("so3_string", params)
    alg = _point_algebroid("so3_string", EPSILON, params)
    cx = TwoTermComplex.constant(np.zeros((3, 1)))

    def gammaE(x, a):
        # coadjoint action in the basis dual to e_1, e_2, e_3
        return cross_matrix(a)

    def omega(x, a, b):
        return np.cross(a, b)[..., None, :]

    return alg, RepUpToHomotopy(alg, cx, gammaE, _zero_gamma(1), omega)


def tangent_sphere_type1(params=None):
    """TS^2 in a stereographic chart acting on ``TS^2 --id--> TS^2`` by Levi-Civita.

    The round metric reads ``lam(x)^2 |dx|^2`` with ``lam = 2 / (1 + |x|^2)``;
    omega is the Riemann tensor ``R(a, b) e = lam^2 (<b,e> a - <a,e> b)``.
    """
    params = dict(params or {})
    R = float(params.pop("chart_radius", 3.0))
    _no_params("tangent_sphere_type1", params)
    if R <= 0:
        raise ModelError("chart_radius must be positive")

    alg = AlgebroidModel(
        name="tangent_sphere_type1", base_dim=2, rank=2,
        anchor=_const(np.eye(2)), structure=_const(np.zeros((2, 2, 2))),
        chart_lo=[-R, -R], chart_hi=[R, R], lift=lambda x, v: np.array(v, dtype=float),
        params={"chart_radius": R})
    cx = TwoTermComplex.constant(np.eye(2))

    def grad_phi(x):
        return -2.0 * x / (1.0 + np.sum(x * x, axis=-1, keepdims=True))

    def christoffel(x, a):
        x = np.asarray(x, dtype=float)
        a = np.asarray(a, dtype=float)
        g = grad_phi(x)
        x, a = np.broadcast_arrays(x, a)
        g = np.broadcast_to(g, a.shape)
        ag = np.sum(a * g, axis=-1)[..., None, None]
        return a[..., :, None] * g[..., None, :] + ag * np.eye(2) - g[..., :, None] * a[..., None, :]

    def d_christoffel(x, v, a):
        # derivative of christoffel(., a) along v
        x, v, a = (np.asarray(u, dtype=float) for u in (x, v, a))
        q = 1.0 + np.sum(x * x, axis=-1, keepdims=True)
        dg = -2.0 * v / q + 4.0 * x * np.sum(x * v, axis=-1, keepdims=True) / q**2
        dg, a = np.broadcast_arrays(dg, a)
        adg = np.sum(a * dg, axis=-1)[..., None, None]
        return a[..., :, None] * dg[..., None, :] + adg * np.eye(2) - dg[..., :, None] * a[..., None, :]

    def omega(x, a, b):
        lam2 = (2.0 / (1.0 + np.sum(np.asarray(x) ** 2, axis=-1))) ** 2
        return lam2[..., None, None] * (a[..., :, None] * b[..., None, :] - b[..., :, None] * a[..., None, :])

    oracles = {"gammaE": d_christoffel, "gammaC": d_christoffel}
    return alg, RepUpToHomotopy(alg, cx, christoffel, christoffel, omega, oracles, kind="type1")


def prequantization_s2(params=None):
    """Trivial line representation of ``TS^2 ⊕ R`` twisted by the area form.

    ``A = TS^2 ⊕ R`` is trivialized by the ambient frame of ``R^3``: a fiber
    vector ``w`` has tangential part ``rho(x) w`` and normal part ``<w, n>``.
    The model lives on the shell ``r_min <= |x| <= r_max``; on the unit sphere
    omega is the area form ``det[x, a, b]``, so a degree-one sphere has
    period ``4 pi``.
    """
    params = dict(params or {})
    r_min = float(params.pop("r_min", 0.8))
    r_max = float(params.pop("r_max", 1.25))
    _no_params("prequantization_s2", params)
    if not 0 < r_min < 1 < r_max:
        raise ModelError("need 0 < r_min < 1 < r_max")

    def normal(x):
        x = np.asarray(x, dtype=float)
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def anchor(x):
        n = normal(x)
        return np.eye(3) - n[..., :, None] * n[..., None, :]

    def structure(x):
        x = np.asarray(x, dtype=float)
        n = normal(x)
        P = anchor(x)
        r = np.linalg.norm(x, axis=-1)[..., None, None, None]
        # c[k, i, j] = (n_i P_kj - n_j P_ki) / |x|
        t = n[..., None, :, None] * P[..., :, None, :]
        return (t - np.swapaxes(t, -1, -2)) / r

    def lift(x, v):
        n = normal(x)
        v = np.asarray(v, dtype=float)
        return v - np.sum(v * n, axis=-1, keepdims=True) * n

    def domain(x):
        rr = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        return (rr >= r_min) & (rr <= r_max)

    alg = AlgebroidModel(
        name="prequantization_s2", base_dim=3, rank=3, anchor=anchor, structure=structure,
        chart_lo=[-r_max] * 3, chart_hi=[r_max] * 3, lift=lift, domain=domain,
        params={"r_min": r_min, "r_max": r_max})
    cx = TwoTermComplex.constant(np.zeros((1, 1)))

    def omega(x, a, b):
        n = normal(x)
        return np.sum(n * np.cross(a, b), axis=-1)[..., None, None]

    return alg, RepUpToHomotopy(alg, cx, _zero_gamma(1), _zero_gamma(1), omega, kind="type0")


def constant_coeff(params=None):
    """so(3) on a point acting on ``R^3 --lam·I--> R^3`` by a non-flat connection.

    ``Gamma(xi) = [xi]_x + kappa diag(xi)`` on both sides and
    ``omega = R / lam`` with ``R(a,b) = [Gamma a, Gamma b] - Gamma(a × b)``.
    """
    params = dict(params or {})
    lam = float(params.pop("lam", 2.0))
    kappa = float(params.pop("kappa", 0.5))
    _no_params("constant_coeff", params)
    if lam == 0.0:
        raise ModelError("lam must be nonzero")
    alg = _point_algebroid("constant_coeff", EPSILON, {"lam": lam, "kappa": kappa})
    cx = TwoTermComplex.constant(lam * np.eye(3))

    def gamma(x, a):
        a = np.asarray(a, dtype=float)
        a = np.broadcast_to(a, np.broadcast_shapes(_lead(x), _lead(a)) + (3,))
        return cross_matrix(a) + kappa * (a[..., :, None] * np.eye(3))

    def omega(x, a, b):
        Ga, Gb = gamma(x, a), gamma(x, b)
        return (Ga @ Gb - Gb @ Ga - gamma(x, np.cross(a, b))) / lam

    return alg, RepUpToHomotopy(alg, cx, gamma, gamma, omega, kind="type1")


def abelian(params=None):
    """Abelian ``R^r`` on a point on ``R --0--> R`` with constant omega.

    ``omega(a, b) = scale (a_0 b_1 - a_1 b_0)``; ``scale = 0`` gives the
    trivial representation.
    """
    params = dict(params or {})
    r = int(params.pop("rank", 2))
    scale = float(params.pop("scale", 0.0))
    _no_params("abelian", params)
    if r < 2:
        raise ModelError("abelian model needs rank >= 2")
    alg = _point_algebroid("abelian", np.zeros((r, r, r)), {"rank": r, "scale": scale})
    cx = TwoTermComplex.constant(np.zeros((1, 1)))

    def omega(x, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        return (scale * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]))[..., None, None]

    return alg, RepUpToHomotopy(alg, cx, _zero_gamma(1), _zero_gamma(1), omega, kind="type0")


def _no_params(name, leftover):
    if leftover:
        raise ModelError(f"unknown parameter(s) for {name}: {sorted(leftover)}")


REGISTRY = {
    "so3_string": so3_string,
    "tangent_sphere_type1": tangent_sphere_type1,
    "prequantization_s2": prequantization_s2,
    "constant_coeff": constant_coeff,
    "abelian": abelian,
}


def builtin_model(name: str, params=None):
    """Look up a built-in model by name; returns ``(AlgebroidModel, RepUpToHomotopy)``."""
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise ModelError(f"unknown model {name!r}; choose from {sorted(REGISTRY)}") from None
    return factory(params)
