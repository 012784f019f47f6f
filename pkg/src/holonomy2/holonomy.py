"""Parallel transport along A-paths and the double-integral holonomy of A-homotopies.

Conventions: transport solves ``dU/dt = -Gamma(gamma, a) U`` from the
identity, and

    hol(sigma) = ∬ hol^C_{1,t} omega(a, b) hol^E_{t,0} dt ds  : E_x -> C_y

over each s-line of the homotopy.  The reverse transports ``hol_{1,t}`` come
from a backward RK4 sweep rather than inverses of the forward ones.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from . import _numerics as nm
from .algebroid import H_FD, RepUpToHomotopy, curvature
from .complexes import ChainHomotopy, ChainMap, compose_chain_maps, invert_chain_map
from .paths import AHomotopy, APath, concat_paths, hconcat, inverse_path, vconcat

TOL_TRANSPORT = 1e-8
TOL_HOL = 1e-5


class HolonomyError(ValueError):
    pass


def _check_model(rep: RepUpToHomotopy, obj) -> None:
    if obj.model is not rep.algebroid:
        raise HolonomyError("path/homotopy and representation belong to different models")


def _lines_transport(G, breaks, reverse: bool):
    # G: (L, n+1, d, d) -> forward U (and reverse R when requested)
    Gm = nm.midpoints(G, breaks, axis=1)

    def fwd(Gc, Gmc):
        return nm.rk4_transport(Gc, Gmc)

    def rev(Gc, Gmc):
        return nm.rk4_reverse(Gc, Gmc)

    U = nm.map_lines(fwd, G, Gm)
    R = nm.map_lines(rev, G, Gm) if reverse else None
    return U, R


def transport_matrices(rep: RepUpToHomotopy, p: APath):
    """Forward transports ``(U^C(t_i), U^E(t_i))`` along ``p``."""
    _check_model(rep, p)
    GE = rep.GE(p.gamma, p.a)[None]
    GC = rep.GC(p.gamma, p.a)[None]
    UE, _ = _lines_transport(GE, p.breaks, False)
    UC, _ = _lines_transport(GC, p.breaks, False)
    return UC[0], UE[0]


def transport(rep: RepUpToHomotopy, p: APath, tol_transport: float = TOL_TRANSPORT) -> ChainMap:
    """Holonomy ``(hol^C_p, hol^E_p)`` as a chain map ``source -> target``."""
    UC, UE = transport_matrices(rep, p)
    return ChainMap(p.source, p.target, UC[-1], UE[-1], rep.complex, tol_chain=tol_transport)


@dataclass(frozen=True, eq=False)
class TransportTable:
    """Transports along every s-line of a homotopy, indexed ``[i, j]`` = (t_i, s_j).

    ``reverseC[i, j]`` is ``hol^C_{1,t_i}`` on line j.
    """

    homotopy: AHomotopy
    forwardE: np.ndarray
    forwardC: np.ndarray
    reverseC: np.ndarray
    reverseE: np.ndarray | None = None

    @property
    def endE(self) -> np.ndarray:
        return self.forwardE[-1]

    @property
    def endC(self) -> np.ndarray:
        return self.forwardC[-1]


def _line_arrays(h_gamma, h_a):
    # (N+1, M+1, k) -> (M+1, N+1, k)
    return np.swapaxes(h_gamma, 0, 1), np.swapaxes(h_a, 0, 1)


def transport_table(rep: RepUpToHomotopy, h: AHomotopy, reverse_E: bool = False) -> TransportTable:
    _check_model(rep, h)
    return _table(rep, h.gamma, h.a, h.tbreaks, reverse_E, h)


def _table(rep, gamma, a, tbreaks, reverse_E=False, h=None) -> TransportTable:
    g, av = _line_arrays(gamma, a)
    GE = rep.GE(g, av)
    GC = rep.GC(g, av)
    UE, RE = _lines_transport(GE, tbreaks, reverse_E)
    UC, RC = _lines_transport(GC, tbreaks, True)
    sw = lambda X: None if X is None else np.swapaxes(X, 0, 1)  # noqa: E731
    return TransportTable(h, sw(UE), sw(UC), sw(RC), sw(RE))


def table_multiplicativity_residual(rep: RepUpToHomotopy, table: TransportTable) -> float:
    """``|U(1) - U_restart(1/2 -> 1) U(1/2)|`` maximized over s-lines."""
    h = table.homotopy
    N = h.N
    if N % 2:
        raise HolonomyError("restart check needs an even grid")
    half = N // 2
    g, av = _line_arrays(h.gamma[half:], h.a[half:])
    GE = rep.GE(g, av)
    # second half on its own grid of N/2 cells of width 1/N: rescale time
    Gm = nm.midpoints(GE, tuple(k - half for k in h.tbreaks if k > half), axis=1)
    U2 = nm.rk4_transport(0.5 * GE, 0.5 * Gm)[:, -1]
    prod = U2 @ table.forwardE[half]
    return float(np.max(np.abs(table.endE - prod)))


def _hol_matrix(rep, gamma, a, b, tbreaks, h=None) -> tuple[np.ndarray, TransportTable]:
    tab = _table(rep, gamma, a, tbreaks, h=h)
    Om = rep.om(gamma, a, b)
    integrand = tab.reverseC @ Om @ tab.forwardE
    phi = nm.simpson(nm.simpson(integrand, axis=0), axis=0)
    return phi, tab


_HOL_CACHE: "weakref.WeakKeyDictionary[AHomotopy, dict]" = weakref.WeakKeyDictionary()


@dataclass(frozen=True, eq=False)
class HolonomyResult:
    """Raw holonomy data of a homotopy."""

    phi: np.ndarray
    source: ChainMap
    target: ChainMap
    error_estimate: float
    table: TransportTable


def holonomy_data(rep: RepUpToHomotopy, h: AHomotopy,
                  tol_transport: float = TOL_TRANSPORT) -> HolonomyResult:
    """Holonomy matrix, boundary transports and a Richardson error estimate.

    The estimate compares against the same quadrature on the every-other-node
    subgrid (when N and M are divisible by 4): ``|fine - coarse| / 3``.
    Cached per (homotopy, representation).
    """
    _check_model(rep, h)
    per = _HOL_CACHE.setdefault(h, {})
    key = (rep, tol_transport)
    if key in per:
        return per[key]
    phi, tab = _hol_matrix(rep, h.gamma, h.a, h.b, h.tbreaks, h)
    if h.N % 4 == 0 and h.M % 4 == 0:
        cb = tuple(k // 2 for k in h.tbreaks if k % 2 == 0)
        phic, _ = _hol_matrix(rep, h.gamma[::2, ::2], h.a[::2, ::2], h.b[::2, ::2], cb)
        est = float(np.linalg.norm(phi - phic, 2)) / 3.0 if phi.size else 0.0
    else:
        est = float("nan")
    src = ChainMap(h.s_H, h.t_H, tab.forwardC[-1, 0], tab.forwardE[-1, 0], rep.complex,
                   tol_chain=tol_transport)
    tgt = ChainMap(h.s_H, h.t_H, tab.forwardC[-1, -1], tab.forwardE[-1, -1], rep.complex,
                   tol_chain=tol_transport)
    res = HolonomyResult(phi, src, tgt, est, tab)
    per[key] = res
    return res


def homotopy_holonomy(rep: RepUpToHomotopy, h: AHomotopy, tol_hol: float = TOL_HOL,
                      tol_transport: float = TOL_TRANSPORT) -> ChainHomotopy:
    """``hol(sigma)`` as a chain homotopy ``transport(s_V) => transport(t_V)``.

    Raises ``ComplexError`` when either chain-homotopy equation fails by more
    than ``tol_hol``.
    """
    d = holonomy_data(rep, h, tol_transport)
    return ChainHomotopy(d.source, d.target, d.phi, tol_chain=tol_hol)


def hol_matrix(rep: RepUpToHomotopy, h: AHomotopy) -> np.ndarray:
    """The holonomy matrix without the chain-homotopy validation."""
    return holonomy_data(rep, h).phi


def chain_homotopy_residuals(rep: RepUpToHomotopy, h: AHomotopy) -> tuple[float, float]:
    """Residuals of ``A1^C - A0^C = phi d_x`` and ``A1^E - A0^E = d_y phi``."""
    d = holonomy_data(rep, h)
    D = rep.complex.d
    rC = d.target.A_C - d.source.A_C - d.phi @ D(h.s_H)
    rE = d.target.A_E - d.source.A_E - D(h.t_H) @ d.phi
    return float(np.max(np.abs(rC), initial=0.0)), float(np.max(np.abs(rE), initial=0.0))


def _opnorm(X) -> float:
    X = np.asarray(X)
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def curvature_transport_sides(rep: RepUpToHomotopy, h: AHomotopy, s0: int, h_fd: float = H_FD):
    """Both sides of ``d/ds hol^E_{1,0} = ∫ hol^E_{1,t} R^E(a, b) hol^E_{t,0} dt`` on line s0.

    ``R^E`` is recomputed from Gamma^E by the local curvature formula (using
    the model's derivative oracle when it has one).  The s-derivative is a
    fourth-order centered difference across neighbouring s-lines.
    """
    _check_model(rep, h)
    if not 0 < s0 < h.M:
        raise HolonomyError("s0 must index an interior s-grid line")
    tab = transport_table(rep, h, reverse_E=True)
    U, M = tab.endE, h.M
    # five-point centered difference where the stencil fits inside a smooth piece
    p, q = next(((p, q) for p, q in nm.segments(M, h.sbreaks) if p <= s0 <= q), (0, M))
    if p + 2 <= s0 <= q - 2:
        lhs = (U[s0 - 2] - 8 * U[s0 - 1] + 8 * U[s0 + 1] - U[s0 + 2]) * (M / 12.0)
    else:
        lhs = (U[s0 + 1] - U[s0 - 1]) * (M / 2.0)
    g, a, b = h.gamma[:, s0], h.a[:, s0], h.b[:, s0]
    RE = curvature(h.model, rep.GE, g, a, b, h_fd, rep.derivatives.get("gammaE"))
    integrand = tab.reverseE[:, s0] @ RE @ tab.forwardE[:, s0]
    rhs = nm.simpson(integrand, axis=0)
    return lhs, rhs


def curvature_transport_check(rep: RepUpToHomotopy, h: AHomotopy, s0: int,
                              h_fd: float = H_FD) -> float:
    lhs, rhs = curvature_transport_sides(rep, h, s0, h_fd)
    return _opnorm(lhs - rhs)


def check_vertical_functoriality(rep: RepUpToHomotopy, h2: AHomotopy, h1: AHomotopy) -> float:
    """``|hol(h2 •_V h1) - (hol(h2) + hol(h1))|``."""
    v = vconcat(h2, h1)
    return _opnorm(hol_matrix(rep, v) - (hol_matrix(rep, h2) + hol_matrix(rep, h1)))


def check_horizontal_functoriality(rep: RepUpToHomotopy, h2: AHomotopy, h1: AHomotopy) -> float:
    """``|hol(h2 •_H h1) - (hol^C(s_V h2) hol(h1) + hol(h2) hol^E(t_V h1))|``."""
    hh = hconcat(h2, h1)
    C0 = holonomy_data(rep, h2).source.A_C
    E1 = holonomy_data(rep, h1).target.A_E
    expect = C0 @ hol_matrix(rep, h1) + hol_matrix(rep, h2) @ E1
    return _opnorm(hol_matrix(rep, hh) - expect)


def check_vertical_inverse(rep: RepUpToHomotopy, h: AHomotopy) -> float:
    """``|hol(vinv h) + hol(h)|``."""
    from .paths import vinv

    return _opnorm(hol_matrix(rep, vinv(h)) + hol_matrix(rep, h))


def check_transport_concat(rep: RepUpToHomotopy, b: APath, a: APath) -> float:
    """``|transport(b · a) - transport(b) transport(a)|`` (both components)."""
    ab = transport(rep, concat_paths(b, a))
    prod = compose_chain_maps(transport(rep, b), transport(rep, a))
    return max(_opnorm(ab.A_C - prod.A_C), _opnorm(ab.A_E - prod.A_E))


def check_transport_inverse(rep: RepUpToHomotopy, a: APath) -> float:
    inv = transport(rep, inverse_path(a))
    ref = invert_chain_map(transport(rep, a))
    return max(_opnorm(inv.A_C - ref.A_C), _opnorm(inv.A_E - ref.A_E))
