"""Transgression along A-spheres, periods, and the type-0 / type-1 specializations.

An A-sphere is a homotopy between unit paths at one base point m; its
holonomy ``hol(sigma) ∈ Hom(E_m, C_m)`` is the period that obstructs
integrability when nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _numerics as nm
from .algebroid import RepUpToHomotopy
from .complexes import KernelArrow
from .holonomy import holonomy_data, hol_matrix
from .paths import AHomotopy
from .transformation import TransOneMor, equivalent

OBSTRUCTION = "obstruction found"
NO_OBSTRUCTION = "no obstruction detected on supplied generators"
ABS_FLOOR = 1e-9


class IntegrabilityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ASphere:
    """A homotopy whose vertical faces are exact unit paths at one point."""

    homotopy: AHomotopy

    def __post_init__(self):
        h = self.homotopy
        if np.any(h.a[:, 0]) or np.any(h.a[:, -1]):
            raise IntegrabilityError("A-sphere faces must be unit paths (a = 0 exactly on s = 0, 1)")
        m = h.gamma[0, 0]
        if np.any(h.gamma[:, 0] != m) or np.any(h.gamma[:, -1] != m):
            raise IntegrabilityError("A-sphere faces must sit at a single base point")

    @property
    def base(self) -> np.ndarray:
        return self.homotopy.gamma[0, 0]


def transgression(rep: RepUpToHomotopy, sigma: ASphere, e) -> KernelArrow:
    """``delta_2[sigma]_e = (hol(sigma) e, e)`` in the kernel groupoid at m."""
    e = np.atleast_1d(np.asarray(e, dtype=float))
    if e.shape != (rep.complex.dim_E,):
        raise IntegrabilityError(f"e must lie in E_m (dimension {rep.complex.dim_E})")
    return KernelArrow(hol_matrix(rep, sigma.homotopy) @ e, e, sigma.base, rep.complex)


@dataclass
class PeriodReport:
    periods: list
    norms: list
    error_estimates: list
    thresholds: list
    verdict: str

    def as_dict(self) -> dict:
        return {"periods": [np.asarray(p).tolist() for p in self.periods],
                "norms": list(self.norms), "error_estimates": list(self.error_estimates),
                "thresholds": list(self.thresholds), "verdict": self.verdict}


def periods(rep: RepUpToHomotopy, spheres) -> PeriodReport:
    """Periods of the supplied generators with a Richardson error bar each.

    Verdict: obstruction if some ``|hol| > 10 * estimate`` (with a small
    absolute floor against roundoff-level estimates).
    """
    pers, norms, ests, thr = [], [], [], []
    for sp in spheres:
        d = holonomy_data(rep, sp.homotopy)
        n = float(np.linalg.norm(d.phi, 2)) if d.phi.size else 0.0
        est = d.error_estimate
        if not np.isfinite(est):
            raise IntegrabilityError("error estimate needs N and M divisible by 4")
        pers.append(np.array(d.phi))
        norms.append(n)
        ests.append(est)
        thr.append(10.0 * est + ABS_FLOOR)
    found = any(n > t for n, t in zip(norms, thr))
    return PeriodReport(pers, norms, ests, thr, OBSTRUCTION if found else NO_OBSTRUCTION)


def type1_identity_check(rep: RepUpToHomotopy, h: AHomotopy) -> float:
    """``|d hol(sigma) - (hol^E_{t_V} - hol^E_{s_V})|`` for invertible ``d``.

    The holonomy lands in C_y; it is compared in E_y through ``d_y``.
    """
    D = rep.complex.d(h.t_H)
    if D.shape[0] != D.shape[1] or abs(np.linalg.det(D)) <= 1e-12:
        raise IntegrabilityError("type-1 check needs an invertible core anchor")
    d = holonomy_data(rep, h)
    ref = d.target.A_E - d.source.A_E
    return float(np.linalg.norm(D @ d.phi - ref, 2))


def _require_type0(rep: RepUpToHomotopy, h: AHomotopy) -> None:
    g = h.gamma.reshape(-1, h.model.base_dim)
    a = h.a.reshape(-1, h.model.rank)
    if np.any(rep.complex.d(g)) or np.any(rep.GE(g, a)) or np.any(rep.GC(g, a)):
        raise IntegrabilityError("type-0 period needs d = 0 and trivial connections")


def type0_period(rep: RepUpToHomotopy, h: AHomotopy) -> np.ndarray:
    """``∬ omega(a, b)`` by plain Simpson quadrature (transports are identities)."""
    _require_type0(rep, h)
    Om = rep.om(h.gamma, h.a, h.b)
    return nm.simpson(nm.simpson(Om, axis=0), axis=0)


def type0_equivalence_check(rep: RepUpToHomotopy, c0, a0, c1, a1, e, witness: AHomotopy,
                            tol: float = 1e-5) -> dict:
    """``c1 - c0 = (∬ omega) e`` in the truncation, cross-checked against :func:`equivalent`."""
    P = type0_period(rep, witness)
    e = np.atleast_1d(np.asarray(e, dtype=float))
    dc = np.atleast_1d(np.asarray(c1, dtype=float)) - np.atleast_1d(np.asarray(c0, dtype=float))
    r_plus = float(np.max(np.abs(dc - P @ e)))
    r_minus = float(np.max(np.abs(dc + P @ e)))
    res = min(r_plus, r_minus)
    m0 = TransOneMor(rep, c0, a0, e)
    m1 = TransOneMor(rep, c1, a1, e)
    eq = equivalent(m0, m1, witness, tol)
    return {"verdict": bool(res <= tol), "residual": res,
            "sign": "opposite" if r_plus <= r_minus else "vertical-target",
            "consistent_with_equivalent": bool(eq.verdict == (res <= tol))}
