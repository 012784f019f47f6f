"""The transformation 2-groupoid of the holonomy action and its 1-truncation.

Objects are vectors e in the E-fibers.  A 1-arrow ``(c, a, e)`` goes from e to
``hol^E_a e + d c``; a 2-arrow ``(c, sigma, e)`` goes vertically from
``(c, s_V sigma, e)`` to ``(c - hol(sigma) e, t_V sigma, e)``.

Sign conventions used throughout:

* the vertical target subtracts ``hol(sigma) e``; composable vertical pairs
  therefore satisfy ``c2 = c1 - hol(sigma1) e1``;
* the horizontal target of ``(c, sigma, e)`` is ``hol^E_{s_V sigma} e + d c``,
  which is the only choice compatible with the globular identities;
* the horizontal inverse is solved from the unit axiom; the alternative
  ``(hol^C_{s_V sigma} c, sigma^{-1_H}, e)`` is kept for comparison only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebroid import RepUpToHomotopy
from .holonomy import TOL_HOL, hol_matrix, transport
from .paths import (AHomotopy, APath, PathError, concat_paths, hconcat, horizontal_unit,
                    inverse_path, paths_close, unit_path, vconcat, vertical_unit)
from .paths import hinv as homotopy_hinv
from .paths import vinv as homotopy_vinv


class TransformationError(ValueError):
    pass


def _vec(v, n, what):
    v = np.array(np.atleast_1d(v), dtype=float)
    if v.shape != (n,):
        raise TransformationError(f"{what} must have dimension {n}, got shape {v.shape}")
    v.flags.writeable = False
    return v


def _gap(u, v) -> float:
    return float(np.max(np.abs(np.asarray(u) - np.asarray(v)), initial=0.0))


@dataclass(frozen=True, eq=False)
class TransOneMor:
    """1-arrow ``(c, a, e)``: c over target(a), e over source(a)."""

    rep: RepUpToHomotopy
    c: np.ndarray
    path: APath
    e: np.ndarray

    def __post_init__(self):
        if self.path.model is not self.rep.algebroid:
            raise TransformationError("path does not belong to the representation's algebroid")
        cx = self.rep.complex
        object.__setattr__(self, "c", _vec(self.c, cx.dim_C, "c"))
        object.__setattr__(self, "e", _vec(self.e, cx.dim_E, "e"))


@dataclass(frozen=True, eq=False)
class TransTwoMor:
    """2-arrow ``(c, sigma, e)``: c over t_H(sigma), e over s_H(sigma)."""

    rep: RepUpToHomotopy
    c: np.ndarray
    homotopy: AHomotopy
    e: np.ndarray
    _hol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.homotopy.model is not self.rep.algebroid:
            raise TransformationError("homotopy does not belong to the representation's algebroid")
        cx = self.rep.complex
        object.__setattr__(self, "c", _vec(self.c, cx.dim_C, "c"))
        object.__setattr__(self, "e", _vec(self.e, cx.dim_E, "e"))
        object.__setattr__(self, "_hol", hol_matrix(self.rep, self.homotopy))

    @property
    def hol(self) -> np.ndarray:
        return self._hol


# 1-arrows


def one_src(m: TransOneMor) -> np.ndarray:
    return np.array(m.e)


def one_tgt(m: TransOneMor) -> np.ndarray:
    """``hol^E_a e + d_y c``."""
    T = transport(m.rep, m.path)
    return T.A_E @ m.e + m.rep.complex.d(m.path.target) @ m.c


def one_unit(rep: RepUpToHomotopy, x, e, N: int = 200) -> TransOneMor:
    return TransOneMor(rep, np.zeros(rep.complex.dim_C), unit_path(rep.algebroid, x, N), e)


def one_mult(m1: TransOneMor, m0: TransOneMor, tol: float = TOL_HOL) -> TransOneMor:
    """``(c1 + hol^C_{a1} c0, a1 · a0, e0)``."""
    if m1.rep is not m0.rep:
        raise TransformationError("1-arrows belong to different representations")
    gap = _gap(one_src(m1), one_tgt(m0))
    if gap > tol:
        raise TransformationError(f"1-arrows not composable: |src(m1) - tgt(m0)| = {gap:.3e}")
    T1 = transport(m1.rep, m1.path)
    return TransOneMor(m1.rep, m1.c + T1.A_C @ m0.c, concat_paths(m1.path, m0.path), m0.e)


def one_inv(m: TransOneMor) -> TransOneMor:
    """``(-hol^C_{a^{-1}} c, a^{-1}, hol^E_a e + d c)``."""
    inv = inverse_path(m.path)
    Ti = transport(m.rep, inv)
    return TransOneMor(m.rep, -Ti.A_C @ m.c, inv, one_tgt(m))


# 2-arrows


def two_vsrc(w: TransTwoMor) -> TransOneMor:
    return TransOneMor(w.rep, w.c, w.homotopy.s_V, w.e)


def two_vtgt(w: TransTwoMor) -> TransOneMor:
    """``(c - hol(sigma) e, t_V sigma, e)``."""
    return TransOneMor(w.rep, w.c - w.hol @ w.e, w.homotopy.t_V, w.e)


def two_hsrc(w: TransTwoMor) -> np.ndarray:
    return np.array(w.e)


def two_htgt(w: TransTwoMor) -> np.ndarray:
    """``hol^E_{s_V sigma} e + d c`` (equal to the target of either vertical face)."""
    return one_tgt(two_vsrc(w))


def two_vunit(m: TransOneMor, M: int = 100) -> TransTwoMor:
    return TransTwoMor(m.rep, m.c, vertical_unit(m.path, M), m.e)


def two_hunit(rep: RepUpToHomotopy, x, e, N: int = 200, M: int = 100) -> TransTwoMor:
    return TransTwoMor(rep, np.zeros(rep.complex.dim_C), horizontal_unit(rep.algebroid, x, N, M), e)


def one_close(m: TransOneMor, n: TransOneMor, tol: float, tol_path: float | None = None) -> bool:
    tp = m.path.tol_path if tol_path is None else tol_path
    return (_gap(m.c, n.c) <= tol and _gap(m.e, n.e) <= tol
            and paths_close(m.path, n.path, tp))


def two_vcomp(w2: TransTwoMor, w1: TransTwoMor, tol: float = TOL_HOL) -> TransTwoMor:
    """``(c1, sigma2 •_V sigma1, e1)``; needs ``two_vtgt(w1) = two_vsrc(w2)``."""
    if w1.rep is not w2.rep:
        raise TransformationError("2-arrows belong to different representations")
    t1, s2 = two_vtgt(w1), two_vsrc(w2)
    gap = max(_gap(t1.c, s2.c), _gap(t1.e, s2.e))
    if gap > tol:
        raise TransformationError(f"2-arrows not vertically composable (mismatch {gap:.3e})")
    try:
        sigma = vconcat(w2.homotopy, w1.homotopy)
    except PathError as exc:
        raise TransformationError(f"2-arrows not vertically composable: {exc}") from None
    return TransTwoMor(w1.rep, w1.c, sigma, w1.e)


def two_hcomp(w2: TransTwoMor, w1: TransTwoMor, tol: float = TOL_HOL) -> TransTwoMor:
    """``(c + hol^C_{s_V sigma} b, sigma •_H tau, f)`` for ``w2 = (c, sigma, e)``, ``w1 = (b, tau, f)``."""
    if w1.rep is not w2.rep:
        raise TransformationError("2-arrows belong to different representations")
    gap = _gap(two_hsrc(w2), two_htgt(w1))
    if gap > tol:
        raise TransformationError(f"2-arrows not horizontally composable (mismatch {gap:.3e})")
    try:
        sigma = hconcat(w2.homotopy, w1.homotopy)
    except PathError as exc:
        raise TransformationError(f"2-arrows not horizontally composable: {exc}") from None
    T = transport(w2.rep, w2.homotopy.s_V)
    return TransTwoMor(w1.rep, w2.c + T.A_C @ w1.c, sigma, w1.e)


def two_vinv(w: TransTwoMor) -> TransTwoMor:
    """``(c - hol(sigma) e, sigma^{-1_V}, e)``."""
    return TransTwoMor(w.rep, w.c - w.hol @ w.e, homotopy_vinv(w.homotopy), w.e)


def two_hinv(w: TransTwoMor) -> TransTwoMor:
    """Horizontal inverse solved from ``two_hcomp(two_hinv(w), w) = unit``.

    The c-slot of the composite is ``c' + hol^C_{s_V sigma^{-1_H}} c``, which
    vanishes for ``c' = -hol^C_{(s_V sigma)^{-1}} c``; the base slot must be
    the horizontal target of w.
    """
    inv = homotopy_hinv(w.homotopy)
    T = transport(w.rep, inv.s_V)
    return TransTwoMor(w.rep, -T.A_C @ w.c, inv, two_htgt(w))


def two_hinv_printed(w: TransTwoMor) -> TransTwoMor:
    """The alternative formula ``(hol^C_{s_V sigma} c, sigma^{-1_H}, e)``."""
    T = transport(w.rep, w.homotopy.s_V)
    return TransTwoMor(w.rep, T.A_C @ w.c, homotopy_hinv(w.homotopy), w.e)


@dataclass
class HinvComparison:
    """Unit-axiom residuals of both horizontal-inverse candidates."""

    axiom_residual: float
    printed_composable_gap: float
    printed_c_residual: float
    difference: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def compare_hinv(w: TransTwoMor) -> HinvComparison:
    """Test both candidates against ``two_hcomp(inverse, w) ≈ horizontal unit``.

    For each candidate ``(c', sigma^{-1_H}, e')`` the composite c-slot is
    ``c' + hol^C_{(s_V sigma)^{-1}} c`` and composability needs
    ``e' = two_htgt(w)``.
    """
    T = transport(w.rep, homotopy_hinv(w.homotopy).s_V)
    good, printed = two_hinv(w), two_hinv_printed(w)
    comp = two_hcomp(good, w)
    axiom = max(_gap(comp.c, 0.0), _gap(comp.e, w.e))
    gap = _gap(printed.e, two_htgt(w))
    c_res = _gap(printed.c + T.A_C @ w.c, 0.0)
    diff = max(_gap(good.c, printed.c), _gap(good.e, printed.e))
    return HinvComparison(axiom, gap, c_res, diff)


# 1-truncation


@dataclass
class Equivalence:
    verdict: bool
    residual: float
    sign: str  # "vertical-target" (c1 = c0 - hol e0) or "opposite" (c1 = c0 + hol e0)
    e_gap: float
    face_gap: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def equivalent(m0: TransOneMor, m1: TransOneMor, witness: AHomotopy,
               tol: float = TOL_HOL, tol_face: float | None = None) -> Equivalence:
    """Decide ``m0 ~ m1`` via the witness ``sigma: path(m0) => path(m1)``.

    Accepts either orientation of the witness and reports which one matched.
    """
    if m0.rep is not m1.rep:
        raise TransformationError("1-arrows belong to different representations")
    tf = witness.tol_path if tol_face is None else tol_face
    s, t = witness.s_V, witness.t_V
    face = float("inf")
    if s.N == m0.path.N and t.N == m1.path.N:
        face = max(_gap(s.a, m0.path.a), _gap(s.gamma, m0.path.gamma),
                   _gap(t.a, m1.path.a), _gap(t.gamma, m1.path.gamma))
    e_gap = _gap(m0.e, m1.e)
    H = hol_matrix(m0.rep, witness) @ m0.e
    dc = m1.c - m0.c
    r_minus = _gap(dc + H, 0.0)
    r_plus = _gap(dc - H, 0.0)
    sign, res = ("vertical-target", r_minus) if r_minus <= r_plus else ("opposite", r_plus)
    ok = res <= tol and e_gap <= tol and face <= tf
    return Equivalence(bool(ok), res, sign, e_gap, face)


@dataclass
class TruncationReport:
    residual: float
    verdict: bool
    sign: str
    components: dict

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def truncation_composition_check(m0: TransOneMor, m1: TransOneMor, m0p: TransOneMor,
                                 m1p: TransOneMor, witnesses, tol: float = TOL_HOL) -> TruncationReport:
    """Check that ``m1 · m0 ~ m1' · m0'`` given ``m0 ~ m0'`` and ``m1 ~ m1'``.

    ``witnesses = (sigma0, sigma1)``; the product witness is
    ``sigma1 •_H sigma0``.
    """
    s0, s1 = witnesses
    e0 = equivalent(m0, m0p, s0, tol)
    e1 = equivalent(m1, m1p, s1, tol)
    prod = one_mult(m1, m0, tol)
    prodp = one_mult(m1p, m0p, tol)
    w = hconcat(s1, s0)
    ep = equivalent(prod, prodp, w, tol)
    comps = {"factor0": e0.as_dict(), "factor1": e1.as_dict(), "product": ep.as_dict()}
    ok = e0.verdict and e1.verdict and ep.verdict
    return TruncationReport(ep.residual, bool(ok), ep.sign, comps)
