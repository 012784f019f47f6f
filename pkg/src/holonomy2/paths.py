"""Grid A-paths and A-homotopies with the Weinstein 2-groupoid operations.

An A-path is sampled at ``t_i = i / N``; an A-homotopy ``sigma = a dt + b ds``
at ``(t_i, s_j)`` with arrays indexed ``[i, j, ...]``.  Breakpoints record
node indices where data is only continuous (concatenation junctions) so that
interpolation and finite differences stay on smooth pieces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import _numerics as nm
from .algebroid import AlgebroidModel, ModelError

TOL_PATH = 1e-3
TOL_THIN = 1e-10


class PathError(ValueError):
    pass


TAUS = {
    "smoothstep": (nm.smoothstep, nm.smoothstep_prime),
    "flat": (nm.flat_cutoff, nm.flat_cutoff_prime),
    "identity": (nm.identity_tau, nm.identity_tau_prime),
}


def resolve_tau(tau) -> tuple[Callable, Callable]:
    """Accept a cutoff name or a ``(tau, dtau)`` pair."""
    if isinstance(tau, str):
        try:
            return TAUS[tau]
        except KeyError:
            raise PathError(f"unknown cutoff {tau!r}; choose from {sorted(TAUS)}") from None
    f, df = tau
    return f, df


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _maxnorm(v) -> float:
    v = np.asarray(v)
    if v.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(v, axis=-1)))


def _check_breaks(breaks, n) -> tuple:
    out = tuple(sorted({int(b) for b in breaks}))
    if any(b <= 0 or b >= n for b in out):
        raise PathError("breakpoints must be interior node indices")
    return out


def _relative(lhs, rhs) -> float:
    # defect relative to the size of the terms it balances
    return _maxnorm(lhs - rhs) / (1.0 + max(_maxnorm(lhs), _maxnorm(rhs)))


def path_defect(model: AlgebroidModel, gamma, a) -> float:
    """Relative midpoint defect of ``(g_{i+1} - g_i)/h = rho(g_mid) a_mid``."""
    n = gamma.shape[0] - 1
    gm = 0.5 * (gamma[1:] + gamma[:-1])
    am = 0.5 * (a[1:] + a[:-1])
    return _relative((gamma[1:] - gamma[:-1]) * n, model.apply_anchor(gm, am))


@dataclass(frozen=True, eq=False)
class APath:
    """Grid A-path ``a(t) dt`` over the base curve ``gamma``."""

    model: AlgebroidModel
    gamma: np.ndarray
    a: np.ndarray
    breaks: tuple = ()
    tol_path: float = TOL_PATH
    residual: float = field(init=False)

    def __post_init__(self):
        g = _frozen(self.gamma)
        a = _frozen(self.a)
        m, r = self.model.base_dim, self.model.rank
        if g.ndim != 2 or g.shape[1] != m or a.shape != (g.shape[0], r):
            raise PathError(f"path grids must have shapes (N+1, {m}) and (N+1, {r})")
        if g.shape[0] < 3:
            raise PathError("a path needs at least 3 grid nodes")
        if not np.all(np.isfinite(g)) or not np.all(np.isfinite(a)):
            raise PathError("path data contains non-finite values")
        self.model.require_in_chart(g)
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "breaks", _check_breaks(self.breaks, g.shape[0] - 1))
        res = path_defect(self.model, g, a)
        object.__setattr__(self, "residual", res)
        if not res <= self.tol_path:
            raise PathError(f"A-path condition violated: residual {res:.3e} > tol_path {self.tol_path:.1e}")

    @property
    def N(self) -> int:
        return self.gamma.shape[0] - 1

    @property
    def source(self) -> np.ndarray:
        return self.gamma[0]

    @property
    def target(self) -> np.ndarray:
        return self.gamma[-1]

    @property
    def is_flat(self) -> bool:
        return not (np.any(self.a[0]) or np.any(self.a[-1]))

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.N + 1)


# constructors


def unit_path(model: AlgebroidModel, x, N: int = 200, tol_path: float = TOL_PATH) -> APath:
    x = np.asarray(x, dtype=float).reshape(model.base_dim)
    return APath(model, np.tile(x, (N + 1, 1)), np.zeros((N + 1, model.rank)), tol_path=tol_path)


def path_from_sections(model: AlgebroidModel, x0, a_fn, N: int = 200,
                       tol_path: float = TOL_PATH) -> APath:
    """Integrate ``gamma' = rho(gamma) a(t)`` by RK4 for a prescribed ``a(t)``.

    ``a_fn`` maps an array of times to an array of shape ``(len(t), r)``.
    """
    x0 = np.asarray(x0, dtype=float).reshape(model.base_dim)
    t = np.linspace(0.0, 1.0, N + 1)
    h = 1.0 / N
    a = np.asarray(a_fn(t), dtype=float).reshape(N + 1, model.rank)
    amid = np.asarray(a_fn(t[:-1] + 0.5 * h), dtype=float).reshape(N, model.rank)
    g = np.empty((N + 1, model.base_dim))
    g[0] = x0
    for i in range(N):
        y = g[i]
        k1 = model.apply_anchor(y, a[i])
        k2 = model.apply_anchor(y + 0.5 * h * k1, amid[i])
        k3 = model.apply_anchor(y + 0.5 * h * k2, amid[i])
        k4 = model.apply_anchor(y + h * k3, a[i + 1])
        g[i + 1] = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return APath(model, g, a, tol_path=tol_path)


def constant_path(model: AlgebroidModel, x, xi, N: int = 200, tol_path: float = TOL_PATH) -> APath:
    """A-path with constant component ``xi`` starting at ``x``."""
    xi = np.asarray(xi, dtype=float).reshape(model.rank)
    return path_from_sections(model, x, lambda t: np.tile(xi, (np.size(t), 1)), N, tol_path)


def path_from_curve(model: AlgebroidModel, curve, dcurve, N: int = 200,
                    tol_path: float = TOL_PATH) -> APath:
    """Lift a base curve through the model's anchor right-inverse."""
    if model.lift is None:
        raise ModelError(f"model {model.name!r} has no anchor lift")
    t = np.linspace(0.0, 1.0, N + 1)
    g = np.asarray(curve(t), dtype=float).reshape(N + 1, model.base_dim)
    a = model.lift(g, np.asarray(dcurve(t), dtype=float).reshape(N + 1, model.base_dim))
    return APath(model, g, a, tol_path=tol_path)


# groupoid operations on paths


def inverse_path(p: APath) -> APath:
    """``a^{-1}(t) = -a(1 - t)`` over the reversed curve."""
    return APath(p.model, p.gamma[::-1], -p.a[::-1], tuple(p.N - b for b in p.breaks), p.tol_path)


def reparametrize(p: APath, tau="smoothstep") -> APath:
    """``a^tau(t) = tau'(t) a(tau(t))`` by cubic interpolation on the grid."""
    f, df = resolve_tau(tau)
    t = p.t
    tt = f(t)
    g = nm.interp(p.gamma, tt, p.breaks)
    a = df(t)[:, None] * nm.interp(p.a, tt, p.breaks)
    return APath(p.model, g, a, (), p.tol_path)


def flatten(p: APath, tau="smoothstep") -> APath:
    """Return ``p`` if already flat at both ends, else its reparametrization."""
    return p if p.is_flat else reparametrize(p, tau)


def concat_paths(b: APath, a: APath, tol: Optional[float] = None, tau="smoothstep") -> APath:
    """Speed-doubled concatenation ``b · a`` (first a, then b) on 2N nodes."""
    if a.model is not b.model:
        raise PathError("paths belong to different models")
    if a.N != b.N:
        raise PathError(f"concatenation needs equal grid sizes, got {a.N} and {b.N}")
    tol = max(a.tol_path, b.tol_path) if tol is None else tol
    gap = float(np.max(np.abs(a.target - b.source)))
    if gap > tol:
        raise PathError(f"endpoint mismatch: |target(a) - source(b)| = {gap:.3e}")
    a, b = flatten(a, tau), flatten(b, tau)
    N = a.N
    g = np.concatenate([a.gamma, b.gamma[1:]])
    v = np.concatenate([2.0 * a.a, 2.0 * b.a[1:]])
    breaks = tuple(a.breaks) + (N,) + tuple(N + k for k in b.breaks)
    return APath(a.model, g, v, breaks, max(a.tol_path, b.tol_path))


def paths_close(p: APath, q: APath, tol: float) -> bool:
    return (p.N == q.N and float(np.max(np.abs(p.gamma - q.gamma))) <= tol
            and float(np.max(np.abs(p.a - q.a))) <= tol)


# homotopies


def homotopy_defects(model: AlgebroidModel, gamma, a, b) -> dict:
    """Relative box-scheme defects of the three A-homotopy equations."""
    N, M = gamma.shape[0] - 1, gamma.shape[1] - 1
    out = {}
    gt = 0.5 * (gamma[1:] + gamma[:-1])
    at = 0.5 * (a[1:] + a[:-1])
    out["dt_gamma"] = _relative((gamma[1:] - gamma[:-1]) * N, model.apply_anchor(gt, at))
    gs = 0.5 * (gamma[:, 1:] + gamma[:, :-1])
    bs = 0.5 * (b[:, 1:] + b[:, :-1])
    out["ds_gamma"] = _relative((gamma[:, 1:] - gamma[:, :-1]) * M, model.apply_anchor(gs, bs))
    ds_a = 0.5 * ((a[:-1, 1:] - a[:-1, :-1]) + (a[1:, 1:] - a[1:, :-1])) * M
    dt_b = 0.5 * ((b[1:, :-1] - b[:-1, :-1]) + (b[1:, 1:] - b[:-1, 1:])) * N

    def centre(f):
        return 0.25 * (f[:-1, :-1] + f[1:, :-1] + f[:-1, 1:] + f[1:, 1:])

    br = model.bracket(centre(gamma), centre(a), centre(b))
    scale = max(_maxnorm(ds_a), _maxnorm(dt_b), _maxnorm(br))
    out["morphism"] = _maxnorm(ds_a - dt_b - br) / (1.0 + scale)
    return out


@dataclass(frozen=True, eq=False)
class AHomotopy:
    """Grid A-homotopy ``sigma = a dt + b ds`` with ``b = 0`` on ``t = 0, 1``."""

    model: AlgebroidModel
    gamma: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tbreaks: tuple = ()
    sbreaks: tuple = ()
    tol_path: float = TOL_PATH
    residual: float = field(init=False)
    defects: dict = field(init=False)

    def __post_init__(self):
        g, a, b = _frozen(self.gamma), _frozen(self.a), _frozen(self.b)
        m, r = self.model.base_dim, self.model.rank
        if g.ndim != 3 or g.shape[2] != m:
            raise PathError(f"homotopy base grid must have shape (N+1, M+1, {m})")
        if a.shape != g.shape[:2] + (r,) or b.shape != a.shape:
            raise PathError(f"homotopy a, b grids must have shape (N+1, M+1, {r})")
        if min(g.shape[:2]) < 3 or (g.shape[0] - 1) % 2 or (g.shape[1] - 1) % 2:
            raise PathError("homotopy grid sizes N and M must be even and >= 2 (Simpson quadrature)")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise PathError("homotopy data contains non-finite values")
        if np.any(b[0]) or np.any(b[-1]):
            raise PathError("boundary condition violated: b(0, s) and b(1, s) must vanish exactly")
        self.model.require_in_chart(g)
        for name, v in (("gamma", g), ("a", a), ("b", b)):
            object.__setattr__(self, name, v)
        N, M = g.shape[0] - 1, g.shape[1] - 1
        object.__setattr__(self, "tbreaks", _check_breaks(self.tbreaks, N))
        object.__setattr__(self, "sbreaks", _check_breaks(self.sbreaks, M))
        d = homotopy_defects(self.model, g, a, b)
        object.__setattr__(self, "defects", d)
        res = max(d.values())
        object.__setattr__(self, "residual", res)
        if not res <= self.tol_path:
            raise PathError(f"A-homotopy conditions violated: residual {res:.3e} > tol_path "
                            f"{self.tol_path:.1e} ({d})")

    @property
    def N(self) -> int:
        return self.gamma.shape[0] - 1

    @property
    def M(self) -> int:
        return self.gamma.shape[1] - 1

    def path_at(self, j: int) -> APath:
        return APath(self.model, self.gamma[:, j], self.a[:, j], self.tbreaks, self.tol_path)

    @property
    def s_V(self) -> APath:
        return self.path_at(0)

    @property
    def t_V(self) -> APath:
        return self.path_at(self.M)

    @property
    def s_H(self) -> np.ndarray:
        return self.gamma[0, 0]

    @property
    def t_H(self) -> np.ndarray:
        return self.gamma[-1, 0]

    @property
    def t_flat(self) -> bool:
        return not (np.any(self.a[0]) or np.any(self.a[-1]))

    @property
    def s_flat(self) -> bool:
        return not (np.any(self.b[:, 0]) or np.any(self.b[:, -1]))

    def replace(self, gamma=None, a=None, b=None, tbreaks=None, sbreaks=None) -> "AHomotopy":
        return AHomotopy(self.model,
                         self.gamma if gamma is None else gamma,
                         self.a if a is None else a,
                         self.b if b is None else b,
                         self.tbreaks if tbreaks is None else tbreaks,
                         self.sbreaks if sbreaks is None else sbreaks,
                         self.tol_path)


def _zero_ends(b, tol, what="b"):
    b = np.array(b, dtype=float)
    edge = max(_maxnorm(b[0]), _maxnorm(b[-1]))
    if edge > tol:
        raise PathError(f"{what} does not vanish on t = 0, 1 (max {edge:.3e})")
    b[0] = 0.0
    b[-1] = 0.0
    return b


def vertical_unit(p: APath, M: int = 100) -> AHomotopy:
    """Constant-in-s homotopy ``p => p``."""
    g = np.repeat(p.gamma[:, None, :], M + 1, axis=1)
    a = np.repeat(p.a[:, None, :], M + 1, axis=1)
    return AHomotopy(p.model, g, a, np.zeros_like(a), p.breaks, (), p.tol_path)


def horizontal_unit(model: AlgebroidModel, x, N: int = 200, M: int = 100,
                    tol_path: float = TOL_PATH) -> AHomotopy:
    return vertical_unit(unit_path(model, x, N, tol_path), M)


def thin_reparam_homotopy(p: APath, tau="smoothstep", M: int = 100) -> AHomotopy:
    """Thin homotopy ``p => p^tau`` through ``tau_s = (1 - s) id + s tau``."""
    f, df = resolve_tau(tau)
    t = p.t
    s = np.linspace(0.0, 1.0, M + 1)
    T = (1.0 - s)[None, :] * t[:, None] + s[None, :] * f(t)[:, None]
    Tt = (1.0 - s)[None, :] + s[None, :] * df(t)[:, None]
    Ts = np.repeat((f(t) - t)[:, None], M + 1, axis=1)
    flat = T.reshape(-1)
    g = nm.interp(p.gamma, flat, p.breaks).reshape(T.shape + (p.model.base_dim,))
    av = nm.interp(p.a, flat, p.breaks).reshape(T.shape + (p.model.rank,))
    a = Tt[..., None] * av
    b = Ts[..., None] * av
    b[0] = 0.0
    b[-1] = 0.0
    # breakpoints survive only if the deformation is trivial
    keep = p.breaks if not np.any(f(t) - t) else ()
    return AHomotopy(p.model, g, a, b, keep, (), p.tol_path)


def is_thin(h: AHomotopy, tol_thin: float = TOL_THIN) -> bool:
    return wedge_norm(h) <= tol_thin


def wedge_norm(h: AHomotopy) -> float:
    """``max ||a ∧ b||`` over the grid, via the Lagrange identity."""
    W = h.a[..., :, None] * h.b[..., None, :]
    W = W - np.swapaxes(W, -1, -2)
    return float(np.sqrt(0.5 * np.max(np.sum(W * W, axis=(-1, -2)), initial=0.0)))


BField = Union[np.ndarray, Callable[[np.ndarray, float], np.ndarray]]


def generate_homotopy(a0: APath, b: BField, M: int = 100, db_dt=None,
                      tol_path: Optional[float] = None) -> AHomotopy:
    """Solve the morphism condition for ``a`` given a variation field ``b``.

    Integrates ``da/ds = db/dt + [a, b]`` and ``dgamma/ds = rho(gamma) b`` in
    s by RK4 from ``a(., 0) = a0``.  ``db/dt`` is a fourth-order difference on
    the t-grid unless an analytic ``db_dt`` callable is supplied.

    Args:
        a0: initial A-path (the vertical source).
        b: callable ``b(t_grid, s) -> (N+1, r)`` or a grid of shape
            ``(N+1, M+1, r)``.  It must vanish at t = 0 and t = 1.
        M: number of s-steps (ignored for grid input, which fixes M).
    """
    model = a0.model
    tol = a0.tol_path if tol_path is None else tol_path
    N, r = a0.N, model.rank
    t = a0.t
    if callable(b):
        bfun = b

        def b_at(s):
            return np.asarray(bfun(t, s), dtype=float).reshape(N + 1, r)
    else:
        bgrid = np.asarray(b, dtype=float)
        if bgrid.ndim != 3 or bgrid.shape[0] != N + 1 or bgrid.shape[2] != r:
            raise PathError("variation grid must have shape (N+1, M+1, r)")
        M = bgrid.shape[1] - 1

        def b_at(s):
            return nm.interp(bgrid, [s], axis=1)[:, 0]

    k = 1.0 / M

    def dbdt(s, bs):
        if db_dt is not None:
            return np.asarray(db_dt(t, s), dtype=float).reshape(N + 1, r)
        return nm.fd_derivative(bs, a0.breaks, axis=0)

    def rhs(s, g, a):
        bs = b_at(s)
        return model.apply_anchor(g, bs), dbdt(s, bs) + model.bracket(g, a, bs)

    G = np.empty((N + 1, M + 1, model.base_dim))
    A = np.empty((N + 1, M + 1, r))
    B = np.empty((N + 1, M + 1, r))
    g, a = np.array(a0.gamma), np.array(a0.a)
    G[:, 0], A[:, 0] = g, a
    for j in range(M):
        s = j * k
        kg1, ka1 = rhs(s, g, a)
        kg2, ka2 = rhs(s + 0.5 * k, g + 0.5 * k * kg1, a + 0.5 * k * ka1)
        kg3, ka3 = rhs(s + 0.5 * k, g + 0.5 * k * kg2, a + 0.5 * k * ka2)
        kg4, ka4 = rhs(s + k, g + k * kg3, a + k * ka3)
        g = g + (k / 6.0) * (kg1 + 2 * kg2 + 2 * kg3 + kg4)
        a = a + (k / 6.0) * (ka1 + 2 * ka2 + 2 * ka3 + ka4)
        G[:, j + 1], A[:, j + 1] = g, a
    for j in range(M + 1):
        B[:, j] = b_at(j * k)
    B = _zero_ends(B, tol)
    return AHomotopy(model, G, A, B, a0.breaks, (), tol)


def homotopy_from_map(model: AlgebroidModel, fn, N: int = 200, M: int = 100,
                      tol_path: float = TOL_PATH) -> AHomotopy:
    """A-homotopy induced by a base map through the model's anchor lift.

    ``fn(T, S)`` takes meshgrids of shape (N+1, M+1) and returns
    ``(gamma, dgamma/dt, dgamma/ds)`` each of shape (N+1, M+1, m).  The map
    must be constant along t = 0 and t = 1.
    """
    if model.lift is None:
        raise ModelError(f"model {model.name!r} has no anchor lift")
    t = np.linspace(0.0, 1.0, N + 1)
    s = np.linspace(0.0, 1.0, M + 1)
    T, S = np.meshgrid(t, s, indexing="ij")
    g, gt, gs = (np.asarray(v, dtype=float) for v in fn(T, S))
    a = model.lift(g, gt)
    b = _zero_ends(model.lift(g, gs), tol_path, "d gamma / ds")
    return AHomotopy(model, g, a, b, (), (), tol_path)


def _reparam_axis(h: AHomotopy, axis: int, tau) -> AHomotopy:
    f, df = resolve_tau(tau)
    n = h.gamma.shape[axis] - 1
    u = np.linspace(0.0, 1.0, n + 1)
    uu = f(u)
    brk = h.tbreaks if axis == 0 else h.sbreaks
    g = nm.interp(h.gamma, uu, brk, axis=axis)
    a = nm.interp(h.a, uu, brk, axis=axis)
    b = nm.interp(h.b, uu, brk, axis=axis)
    shape = [1, 1, 1]
    shape[axis] = n + 1
    w = df(u).reshape(shape)
    if axis == 0:
        a = a * w
        b[0] = 0.0
        b[-1] = 0.0
        return h.replace(g, a, b, tbreaks=())
    b = b * w
    return h.replace(g, a, b, sbreaks=())


def reparametrize_homotopy(h: AHomotopy, tau="smoothstep", axes: str = "ts") -> AHomotopy:
    """Pull back along ``tau`` in t and/or s (a 3-homotopic representative)."""
    if "t" in axes:
        h = _reparam_axis(h, 0, tau)
    if "s" in axes:
        h = _reparam_axis(h, 1, tau)
    return h


def vconcat(h2: AHomotopy, h1: AHomotopy, tol: Optional[float] = None, tau="smoothstep") -> AHomotopy:
    """Vertical composite ``h2 •_V h1``: first h1, then h2, on 2M s-nodes."""
    if h1.model is not h2.model or h1.N != h2.N or h1.M != h2.M:
        raise PathError("vertical composition needs equal models and grid sizes")
    tol = max(h1.tol_path, h2.tol_path) if tol is None else tol
    gap = max(float(np.max(np.abs(h1.a[:, -1] - h2.a[:, 0]))),
              float(np.max(np.abs(h1.gamma[:, -1] - h2.gamma[:, 0]))))
    if gap > tol:
        raise PathError(f"face mismatch: t_V(h1) and s_V(h2) differ by {gap:.3e}")
    if h1.tbreaks != h2.tbreaks:
        raise PathError("face mismatch: t-breakpoints differ")
    if not h1.s_flat:
        h1 = _reparam_axis(h1, 1, tau)
    if not h2.s_flat:
        h2 = _reparam_axis(h2, 1, tau)
    M = h1.M
    g = np.concatenate([h1.gamma, h2.gamma[:, 1:]], axis=1)
    a = np.concatenate([h1.a, h2.a[:, 1:]], axis=1)
    b = np.concatenate([2.0 * h1.b, 2.0 * h2.b[:, 1:]], axis=1)
    sb = tuple(h1.sbreaks) + (M,) + tuple(M + k for k in h2.sbreaks)
    return AHomotopy(h1.model, g, a, b, h1.tbreaks, sb, max(h1.tol_path, h2.tol_path))


def hconcat(h2: AHomotopy, h1: AHomotopy, tol: Optional[float] = None, tau="smoothstep") -> AHomotopy:
    """Horizontal composite ``h2 •_H h1`` (h1 first in t) on 2N t-nodes."""
    if h1.model is not h2.model or h1.N != h2.N or h1.M != h2.M:
        raise PathError("horizontal composition needs equal models and grid sizes")
    tol = max(h1.tol_path, h2.tol_path) if tol is None else tol
    gap = float(np.max(np.abs(h1.gamma[-1] - h2.gamma[0])))
    if gap > tol:
        raise PathError(f"face mismatch: t_H(h1) and s_H(h2) differ by {gap:.3e}")
    if not h1.t_flat:
        h1 = _reparam_axis(h1, 0, tau)
    if not h2.t_flat:
        h2 = _reparam_axis(h2, 0, tau)
    N = h1.N
    g = np.concatenate([h1.gamma, h2.gamma[1:]], axis=0)
    a = np.concatenate([2.0 * h1.a, 2.0 * h2.a[1:]], axis=0)
    b = np.concatenate([h1.b, h2.b[1:]], axis=0)
    tb = tuple(h1.tbreaks) + (N,) + tuple(N + k for k in h2.tbreaks)
    sb = tuple(sorted(set(h1.sbreaks) | set(h2.sbreaks)))
    return AHomotopy(h1.model, g, a, b, tb, sb, max(h1.tol_path, h2.tol_path))


def vinv(h: AHomotopy) -> AHomotopy:
    """``a(t, 1 - s) dt - b(t, 1 - s) ds``."""
    return h.replace(h.gamma[:, ::-1], h.a[:, ::-1], -h.b[:, ::-1],
                     sbreaks=tuple(h.M - k for k in h.sbreaks))


def hinv(h: AHomotopy) -> AHomotopy:
    """``-a(1 - t, s) dt + b(1 - t, s) ds``."""
    return h.replace(h.gamma[::-1], -h.a[::-1], h.b[::-1],
                     tbreaks=tuple(h.N - k for k in h.tbreaks))


def homotopies_close(h: AHomotopy, k: AHomotopy, tol: float = 0.0) -> bool:
    return (h.gamma.shape == k.gamma.shape
            and all(float(np.max(np.abs(u - v))) <= tol
                    for u, v in ((h.gamma, k.gamma), (h.a, k.a), (h.b, k.b))))
