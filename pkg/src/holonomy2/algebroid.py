"""Trivialized Lie algebroids and two-term representations up to homotopy.

An algebroid on a chart is given by its anchor matrices ``rho(x)`` (m x r)
and structure functions ``c[k, i, j](x)`` so that constant sections bracket
as ``[a, b]_k = c[k, i, j] a_i b_j``.  A representation up to homotopy on a
complex ``d: C -> E`` is given by connection coefficients (``nabla_a e =
rho(a) e + Gamma(x, a) e``) on E and C together with ``omega(x, a, b):
E -> C``.

All model callables are vectorized: ``x`` has shape ``(..., m)`` and sections
``(..., r)`` with matching leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .complexes import TwoTermComplex

H_FD = 1e-4
TOL_MODEL = 1e-6


class ModelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebroidModel:
    """Lie algebroid ``A = chart x R^r`` with anchor and structure functions."""

    name: str
    base_dim: int
    rank: int
    anchor: Callable[[np.ndarray], np.ndarray]
    structure: Callable[[np.ndarray], np.ndarray]
    chart_lo: np.ndarray
    chart_hi: np.ndarray
    # optional right inverse of the anchor: (x, v) -> a with rho(x) a = v
    lift: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    # optional open-set predicate refining the box (e.g. excluded points)
    domain: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lo = np.array(self.chart_lo, dtype=float).reshape(self.base_dim)
        hi = np.array(self.chart_hi, dtype=float).reshape(self.base_dim)
        lo.flags.writeable = hi.flags.writeable = False
        object.__setattr__(self, "chart_lo", lo)
        object.__setattr__(self, "chart_hi", hi)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        ok = np.all((x >= self.chart_lo) & (x <= self.chart_hi), axis=-1)
        if self.domain is not None:
            ok = ok & np.asarray(self.domain(x), dtype=bool)
        return ok

    def require_in_chart(self, x) -> None:
        if not np.all(self.contains(x)):
            raise ModelError(f"point(s) outside the chart of model {self.name!r}")

    def rho(self, x) -> np.ndarray:
        return np.asarray(self.anchor(np.asarray(x, dtype=float)), dtype=float)

    def c(self, x) -> np.ndarray:
        return np.asarray(self.structure(np.asarray(x, dtype=float)), dtype=float)

    def bracket(self, x, a, b) -> np.ndarray:
        """Bracket of constant sections, unchecked and vectorized."""
        return np.einsum("...kij,...i,...j->...k", self.c(x), a, b)

    def apply_anchor(self, x, a) -> np.ndarray:
        return np.einsum("...mr,...r->...m", self.rho(x), a)

    @property
    def is_point(self) -> bool:
        return bool(self.params.get("_point_base", False))


@dataclass(frozen=True, eq=False)
class RepUpToHomotopy:
    """Representation up to homotopy ``(Gamma^E, Gamma^C, omega)``.

    ``derivatives`` may hold analytic directional-derivative oracles keyed by
    ``"gammaE"``, ``"gammaC"``, ``"boundary"`` or ``"omega"``; each takes
    ``(x, v, *args)`` and returns the derivative of the field along ``v``.
    """

    algebroid: AlgebroidModel
    complex: TwoTermComplex
    gammaE: Callable[[np.ndarray, np.ndarray], np.ndarray]
    gammaC: Callable[[np.ndarray, np.ndarray], np.ndarray]
    omega: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    derivatives: dict = field(default_factory=dict)
    kind: str = "general"  # "type0", "type1" or "general"

    def GE(self, x, a) -> np.ndarray:
        return np.asarray(self.gammaE(np.asarray(x, dtype=float), np.asarray(a, dtype=float)))

    def GC(self, x, a) -> np.ndarray:
        return np.asarray(self.gammaC(np.asarray(x, dtype=float), np.asarray(a, dtype=float)))

    def om(self, x, a, b) -> np.ndarray:
        return np.asarray(self.omega(np.asarray(x, dtype=float), np.asarray(a, dtype=float),
                                     np.asarray(b, dtype=float)))


def bracket_at(model: AlgebroidModel, x, a, b) -> np.ndarray:
    """``[a, b]_k = sum_ij c^k_ij(x) a_i b_j`` for constant sections."""
    x = np.asarray(x, dtype=float)
    model.require_in_chart(x)
    return model.bracket(x, np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def directional(fn, x, v, h_fd: float = H_FD, oracle=None, args=()):
    """Derivative of ``x -> fn(x, *args)`` along ``v`` (centered differences)."""
    if oracle is not None:
        return np.asarray(oracle(x, v, *args), dtype=float)
    return (np.asarray(fn(x + h_fd * v, *args)) - np.asarray(fn(x - h_fd * v, *args))) / (2 * h_fd)


def curvature(model: AlgebroidModel, gamma, x, a, b, h_fd: float = H_FD, oracle=None):
    """Curvature of ``nabla = rho + Gamma`` on constant sections a, b.

    ``R(a, b) = rho(a)·dGamma(b) - rho(b)·dGamma(a) + [Gamma(a), Gamma(b)]
    - Gamma([a, b])``, i.e. ``nabla_a nabla_b - nabla_b nabla_a - nabla_[a,b]``.
    """
    x, a, b = (np.asarray(v, dtype=float) for v in (x, a, b))
    Ga, Gb = gamma(x, a), gamma(x, b)
    va, vb = model.apply_anchor(x, a), model.apply_anchor(x, b)
    dGb = directional(gamma, x, va, h_fd, oracle, (b,))
    dGa = directional(gamma, x, vb, h_fd, oracle, (a,))
    return dGb - dGa + Ga @ Gb - Gb @ Ga - gamma(x, model.bracket(x, a, b))


def _cov_omega(model, rep, x, a, b, c, h_fd, oracle=None):
    # (nabla_a omega)(b, c) on constant sections
    va = model.apply_anchor(x, a)
    d = directional(rep.om, x, va, h_fd, oracle, (b, c))
    return d + rep.GC(x, a) @ rep.om(x, b, c) - rep.om(x, b, c) @ rep.GE(x, a)


def d_omega(model, rep, x, a, b, c, h_fd: float = H_FD, oracle=None):
    """Degree-3 covariant differential ``(d_nabla omega)(a, b, c)``."""
    terms = 0.0
    for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
        terms = terms + _cov_omega(model, rep, x, p, q, r, h_fd, oracle)
        terms = terms - rep.om(x, model.bracket(x, p, q), r)
    return terms


@dataclass
class ValidationReport:
    """Maximum residual per axiom over the validation samples."""

    model: str
    samples: int
    h_fd: float
    tol: float
    residuals: dict
    passed: dict

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def as_dict(self) -> dict:
        return {"model": self.model, "samples": self.samples, "h_fd": self.h_fd,
                "tol": self.tol, "residuals": dict(self.residuals), "passed": dict(self.passed)}


def _maxabs(v) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def sample_points(model: AlgebroidModel, n: int, seed: int = 0, shrink: float = 0.8) -> np.ndarray:
    """Deterministic random points inside the (shrunken) chart."""
    rng = np.random.default_rng(seed)
    mid = 0.5 * (model.chart_lo + model.chart_hi)
    half = 0.5 * (model.chart_hi - model.chart_lo) * shrink
    pts = []
    while len(pts) < n:
        x = mid + half * rng.uniform(-1, 1, size=model.base_dim)
        if model.contains(x):
            pts.append(x)
    return np.array(pts)


def validate_ruth(model: AlgebroidModel, rep: RepUpToHomotopy, samples=None,
                  h_fd: float = H_FD, tol: float = TOL_MODEL, seed: int = 0,
                  use_oracles: bool = False) -> ValidationReport:
    """Check the algebroid axioms and the four representation-up-to-homotopy identities.

    Derivatives are centered differences with step ``h_fd``; the model's
    analytic oracles are used only when ``use_oracles`` is set, so by default
    the validation is independent of them.

    Residuals, each maximized over samples and random constant sections:

    * ``bracket_antisym``, ``omega_antisym``: exact checks.
    * ``gamma_linear``: relative roundoff check of linearity in a.
    * ``anchor_hom``: ``rho([a,b]) - [rho a, rho b]`` (vector fields, FD).
    * ``jacobi``: Jacobi identity for constant sections (FD).
    * ``d_nabla``  (i): ``d Gamma^C(a) - Gamma^E(a) d - rho(a)·dd``.
    * ``d_omega_E`` (ii): ``d omega - R^E`` with R^E recomputed from Gamma^E.
    * ``omega_d_C`` (iii): ``omega d - R^C``.
    * ``nabla_omega`` (iv): ``d_nabla omega``.
    """
    if samples is None:
        pts = sample_points(model, 16, seed)
    elif isinstance(samples, (int, np.integer)):
        pts = sample_points(model, int(samples), seed)
    else:
        pts = np.atleast_2d(np.asarray(samples, dtype=float))
        model.require_in_chart(pts)
    rng = np.random.default_rng(seed + 1)
    r = model.rank
    cx = rep.complex
    res = {k: 0.0 for k in ("bracket_antisym", "gamma_linear", "omega_antisym", "anchor_hom",
                            "jacobi", "d_nabla", "d_omega_E", "omega_d_C", "nabla_omega")}
    exact = {"bracket_antisym", "omega_antisym"}
    roundoff = {"gamma_linear": 1e-12}

    def upd(key, val):
        res[key] = max(res[key], _maxabs(val))

    D = cx.d
    oracle = rep.derivatives.get if use_oracles else (lambda key: None)
    for x in pts:
        a, b, c = rng.standard_normal((3, r))
        lam, mu = rng.standard_normal(2)
        C = model.c(x)
        upd("bracket_antisym", C + np.swapaxes(C, -1, -2))
        for G in (rep.GE, rep.GC):
            lin = G(x, lam * a + mu * b) - (lam * G(x, a) + mu * G(x, b))
            upd("gamma_linear", lin / (1.0 + _maxabs(G(x, a)) + _maxabs(G(x, b))))
        upd("omega_antisym", rep.om(x, a, b) + rep.om(x, b, a))

        # anchor homomorphism: [V_a, V_b] = D V_b (V_a) - D V_a (V_b)
        va, vb = model.apply_anchor(x, a), model.apply_anchor(x, b)
        Vb_along_a = directional(model.apply_anchor, x, va, h_fd, None, (b,))
        Va_along_b = directional(model.apply_anchor, x, vb, h_fd, None, (a,))
        upd("anchor_hom", model.apply_anchor(x, model.bracket(x, a, b)) - (Vb_along_a - Va_along_b))

        # Jacobi: sum_cyc [[a,b],c] with [f e_l, c] = f [e_l, c] - rho(c)(f) e_l
        jac = 0.0
        for p, q, s in ((a, b, c), (b, c, a), (c, a, b)):
            pq = model.bracket(x, p, q)
            vs = model.apply_anchor(x, s)
            jac = jac + model.bracket(x, pq, s) - directional(model.bracket, x, vs, h_fd, None, (p, q))
        upd("jacobi", jac)

        # (i) d ∘ nabla^C = nabla^E ∘ d
        dd = directional(D, x, va, h_fd, oracle("boundary"))
        upd("d_nabla", D(x) @ rep.GC(x, a) - rep.GE(x, a) @ D(x) - dd)
        if cx.dim_C and cx.dim_E:
            RE = curvature(model, rep.GE, x, a, b, h_fd, oracle("gammaE"))
            RC = curvature(model, rep.GC, x, a, b, h_fd, oracle("gammaC"))
            w = rep.om(x, a, b)
            upd("d_omega_E", D(x) @ w - RE)
            upd("omega_d_C", w @ D(x) - RC)
            upd("nabla_omega", d_omega(model, rep, x, a, b, c, h_fd, oracle("omega")))
        else:
            # with a zero fiber the curvature identities force flatness of the other side
            if cx.dim_E:
                upd("d_omega_E", curvature(model, rep.GE, x, a, b, h_fd))
            if cx.dim_C:
                upd("omega_d_C", curvature(model, rep.GC, x, a, b, h_fd))
    passed = {k: (v == 0.0 if k in exact else v <= roundoff.get(k, tol)) for k, v in res.items()}
    return ValidationReport(model.name, len(pts), h_fd, tol, res, passed)
