"""Two-term complexes, the gauge 2-groupoid and the kernel groupoid.

A two-term complex is a map of trivialized bundles ``d_x: C_x -> E_x`` over
chart points.  Its gauge 2-groupoid has invertible chain maps as arrows and
chain homotopies ``phi: E_x -> C_y`` as 2-arrows.  The kernel groupoid
``C ⋉ E ⇉ E`` has arrows ``(c, e): e -> e + d c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

EPS_INV = 1e-12
TOL_CHAIN = 1e-9


class ComplexError(ValueError):
    """Raised for composability, shape or invertibility violations."""


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _same_point(x, y, tol: float = 0.0) -> bool:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return x.shape == y.shape and bool(np.all(np.abs(x - y) <= tol))


def _scale(*mats) -> float:
    return max([1.0] + [float(np.max(np.abs(m), initial=0.0)) for m in mats])


@dataclass(frozen=True, eq=False)
class TwoTermComplex:
    """The complex ``C --d--> E`` as a boundary-matrix field on a chart.

    ``boundary`` maps a base point (or a batch of them, shape ``(..., m)``)
    to matrices of shape ``(..., dim_E, dim_C)``.
    """

    dim_C: int
    dim_E: int
    boundary: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.dim_C < 0 or self.dim_E < 0:
            raise ComplexError("fiber dimensions must be nonnegative")

    def d(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.boundary(x), dtype=float)
        want = x.shape[:-1] + (self.dim_E, self.dim_C)
        if out.shape != want:
            raise ComplexError(f"boundary has shape {out.shape}, expected {want}")
        return out

    @staticmethod
    def constant(matrix) -> "TwoTermComplex":
        """Complex with the same boundary matrix at every point."""
        D = _frozen(np.atleast_2d(matrix))

        def boundary(x):
            x = np.asarray(x, dtype=float)
            return np.broadcast_to(D, x.shape[:-1] + D.shape).copy()

        return TwoTermComplex(D.shape[1], D.shape[0], boundary)


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Invertible chain map ``(A_C, A_E)`` from the fiber at x to the one at y."""

    x: np.ndarray
    y: np.ndarray
    A_C: np.ndarray
    A_E: np.ndarray
    complex: TwoTermComplex
    tol_chain: float = TOL_CHAIN
    eps_inv: float = EPS_INV
    chain_residual: float = field(init=False)

    def __post_init__(self):
        for name in ("x", "y", "A_C", "A_E"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        cx = self.complex
        if self.A_C.shape != (cx.dim_C, cx.dim_C) or self.A_E.shape != (cx.dim_E, cx.dim_E):
            raise ComplexError("chain map components have wrong shape")
        for name, A in (("A_C", self.A_C), ("A_E", self.A_E)):
            if A.size and abs(np.linalg.det(A)) <= self.eps_inv:
                raise ComplexError(f"{name} is singular (|det| <= {self.eps_inv:g})")
        res = self.A_E @ cx.d(self.x) - cx.d(self.y) @ self.A_C
        r = float(np.max(np.abs(res), initial=0.0))
        object.__setattr__(self, "chain_residual", r)
        if r > self.tol_chain:
            raise ComplexError(f"chain condition violated: residual {r:.3e} > {self.tol_chain:.1e}")

    @staticmethod
    def identity(cx: TwoTermComplex, x) -> "ChainMap":
        return ChainMap(x, x, np.eye(cx.dim_C), np.eye(cx.dim_E), cx)

    def with_tol(self, **kw) -> "ChainMap":
        args = dict(tol_chain=self.tol_chain, eps_inv=self.eps_inv)
        args.update(kw)
        return ChainMap(self.x, self.y, self.A_C, self.A_E, self.complex, **args)


def compose_chain_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g ∘ f`` for ``f: w -> x`` and ``g: x -> y``."""
    if not _same_point(f.y, g.x):
        raise ComplexError("endpoint mismatch: f.y != g.x")
    if f.complex is not g.complex:
        raise ComplexError("chain maps live on different complexes")
    tol = max(f.tol_chain, g.tol_chain) * (1 + _scale(g.A_C, g.A_E, f.A_C, f.A_E))
    return ChainMap(f.x, g.y, g.A_C @ f.A_C, g.A_E @ f.A_E, f.complex,
                    tol_chain=tol, eps_inv=min(f.eps_inv, g.eps_inv))


def invert_chain_map(f: ChainMap) -> ChainMap:
    AC = np.linalg.inv(f.A_C) if f.A_C.size else f.A_C
    AE = np.linalg.inv(f.A_E) if f.A_E.size else f.A_E
    # inverses are never exact in floating point
    tol = max(f.tol_chain, 1e-12) * (1 + _scale(AC, AE, f.A_C, f.A_E)) ** 2
    return ChainMap(f.y, f.x, AC, AE, f.complex, tol_chain=tol, eps_inv=f.eps_inv)


def chain_maps_close(f: ChainMap, g: ChainMap, tol: float) -> bool:
    return (_same_point(f.x, g.x) and _same_point(f.y, g.y)
            and bool(np.all(np.abs(f.A_C - g.A_C) <= tol))
            and bool(np.all(np.abs(f.A_E - g.A_E) <= tol)))


@dataclass(frozen=True, eq=False)
class ChainHomotopy:
    """2-arrow ``phi: A0 => A1`` with ``A1 - A0 = (phi d_x, d_y phi)``."""

    source: ChainMap
    target: ChainMap
    phi: np.ndarray
    tol_chain: float = TOL_CHAIN
    residual_C: float = field(init=False)
    residual_E: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "phi", _frozen(self.phi))
        s, t = self.source, self.target
        if not (_same_point(s.x, t.x) and _same_point(s.y, t.y)):
            raise ComplexError("source and target chain maps have different endpoints")
        cx = s.complex
        if self.phi.shape != (cx.dim_C, cx.dim_E):
            raise ComplexError(f"phi has shape {self.phi.shape}, expected {(cx.dim_C, cx.dim_E)}")
        rC = t.A_C - s.A_C - self.phi @ cx.d(s.x)
        rE = t.A_E - s.A_E - cx.d(s.y) @ self.phi
        object.__setattr__(self, "residual_C", float(np.max(np.abs(rC), initial=0.0)))
        object.__setattr__(self, "residual_E", float(np.max(np.abs(rE), initial=0.0)))
        worst = max(self.residual_C, self.residual_E)
        if worst > self.tol_chain:
            raise ComplexError(
                f"chain-homotopy conditions violated: residual {worst:.3e} > {self.tol_chain:.1e}")

    @property
    def residual(self) -> float:
        return max(self.residual_C, self.residual_E)

    @staticmethod
    def unit(f: ChainMap) -> "ChainHomotopy":
        """Vertical unit ``0: f => f``."""
        return ChainHomotopy(f, f, np.zeros((f.complex.dim_C, f.complex.dim_E)))


def _tol(*hs) -> float:
    return max(h.tol_chain for h in hs)


def vcomp(psi: ChainHomotopy, phi: ChainHomotopy) -> ChainHomotopy:
    """Vertical composite ``psi • phi = psi + phi``."""
    tol = _tol(psi, phi)
    if not chain_maps_close(psi.source, phi.target, tol):
        raise ComplexError("middle chain maps do not match")
    return ChainHomotopy(phi.source, psi.target, psi.phi + phi.phi,
                         tol_chain=2 * tol * (1 + _scale(psi.phi, phi.phi)))


def hcomp(phi2: ChainHomotopy, phi1: ChainHomotopy) -> ChainHomotopy:
    """Horizontal composite over ``x -> y -> z``: ``phi2 A0^E + A'1^C phi1``."""
    A0, A1 = phi1.source, phi1.target
    B0, B1 = phi2.source, phi2.target
    if not _same_point(A0.y, B0.x):
        raise ComplexError("endpoint mismatch in horizontal composition")
    phi = phi2.phi @ A0.A_E + B1.A_C @ phi1.phi
    src = compose_chain_maps(B0, A0)
    tgt = compose_chain_maps(B1, A1)
    s = _scale(phi2.phi, phi1.phi, A0.A_E, A1.A_E, B0.A_C, B1.A_C)
    return ChainHomotopy(src, tgt, phi, tol_chain=4 * _tol(phi1, phi2) * (1 + s) ** 2)


def vinv(phi: ChainHomotopy) -> ChainHomotopy:
    return ChainHomotopy(phi.target, phi.source, -phi.phi, tol_chain=phi.tol_chain)


def hinv(phi: ChainHomotopy) -> ChainHomotopy:
    """Horizontal inverse ``A0^{-1} => A1^{-1}``.

    Derived from the axiom ``hcomp(hinv(phi), phi) = unit``: with
    ``psi A0^E + (A1^C)^{-1} phi = 0`` this gives
    ``psi = -(A1^C)^{-1} phi (A0^E)^{-1}``.  The equivalent closed form is
    cross-checked by :func:`hinv_residual`.
    """
    A0i, A1i = invert_chain_map(phi.source), invert_chain_map(phi.target)
    if phi.phi.size:
        X = np.linalg.solve(phi.target.A_C, phi.phi)
        psi = -np.linalg.solve(phi.source.A_E.T, X.T).T
    else:
        psi = np.array(phi.phi)
    s = _scale(A0i.A_E, A1i.A_C, phi.phi)
    return ChainHomotopy(A0i, A1i, psi, tol_chain=4 * phi.tol_chain * (1 + s) ** 3)


def hinv_printed(phi: ChainHomotopy) -> np.ndarray:
    """The closed form ``-(A1^C)^{-1} phi (A0^E)^{-1}``."""
    return -np.linalg.inv(phi.target.A_C) @ phi.phi @ np.linalg.inv(phi.source.A_E)


def hinv_residual(phi: ChainHomotopy) -> float:
    """Max deviation between the axiom-derived and closed-form inverses."""
    return float(np.max(np.abs(hinv(phi).phi - hinv_printed(phi)), initial=0.0))


def whisker_alternate(phi2: ChainHomotopy, phi1: ChainHomotopy) -> np.ndarray:
    """The other whiskering ``phi2 A1^E + A'0^C phi1``; equals :func:`hcomp`."""
    return phi2.phi @ phi1.target.A_E + phi2.source.A_C @ phi1.phi


# kernel groupoid


@dataclass(frozen=True, eq=False)
class KernelArrow:
    """Arrow ``(c, e): e -> e + d_base c`` of the kernel groupoid."""

    c: np.ndarray
    e: np.ndarray
    base: np.ndarray
    complex: TwoTermComplex

    def __post_init__(self):
        for name in ("c", "e", "base"):
            object.__setattr__(self, name, _frozen(np.atleast_1d(getattr(self, name))))
        if self.c.shape != (self.complex.dim_C,) or self.e.shape != (self.complex.dim_E,):
            raise ComplexError("kernel arrow components have wrong dimensions")

    @property
    def source(self) -> np.ndarray:
        return self.e

    @property
    def target(self) -> np.ndarray:
        return self.e + self.complex.d(self.base) @ self.c


def kernel_unit(cx: TwoTermComplex, base, e) -> KernelArrow:
    return KernelArrow(np.zeros(cx.dim_C), e, base, cx)


def kernel_mult(g2: KernelArrow, g1: KernelArrow, tol: float = 0.0) -> KernelArrow:
    """``g2 · g1 = (c1 + c2, e1)``, defined when ``g2.e = g1.e + d c1``."""
    if g1.complex is not g2.complex or not _same_point(g1.base, g2.base):
        raise ComplexError("kernel arrows live in different fibers")
    if not _same_point(g2.source, g1.target, tol):
        raise ComplexError("kernel arrows are not composable: source(g2) != target(g1)")
    return KernelArrow(g1.c + g2.c, g1.e, g1.base, g1.complex)


def kernel_inv(g: KernelArrow) -> KernelArrow:
    return KernelArrow(-g.c, g.target, g.base, g.complex)


def integrate_kernel_path(cx: TwoTermComplex, base, c_samples, e_samples) -> KernelArrow:
    """Integrate a K-path sampled on a uniform grid: ``(∫ c ds, e(0))``.

    Args:
        c_samples: shape (n+1, dim_C), n even (Simpson).
        e_samples: shape (n+1, dim_E); every sample must sit in the fiber
            over ``base`` (the grid carries a single base point).
    """
    c = np.asarray(c_samples, dtype=float)
    e = np.asarray(e_samples, dtype=float)
    if c.shape[0] == 0 or e.shape[0] == 0:
        raise ComplexError("empty K-path grid")
    c = c.reshape(c.shape[0], -1)
    e = e.reshape(e.shape[0], -1)
    if c.shape[0] != e.shape[0]:
        raise ComplexError("c and e grids have different lengths")
    if c.shape[1] != cx.dim_C or e.shape[1] != cx.dim_E:
        raise ComplexError("K-path samples are not in the fibers of the complex (mixed fibers)")
    from ._numerics import simpson

    if c.shape[0] == 1:
        integral = c[0]
    else:
        integral = simpson(c, axis=0)
    return KernelArrow(integral, e[0], base, cx)
