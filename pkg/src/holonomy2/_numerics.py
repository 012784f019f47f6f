"""Grid numerics shared by the path, holonomy and integrability layers.

Everything here works on uniform grids over [0, 1] with optional interior
breakpoints: node indices where the sampled data is only continuous (the
junctions of a concatenation).  Interpolation stencils never cross a
breakpoint, which keeps fourth-order accuracy on each smooth piece.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def segments(n: int, breaks=()) -> list[tuple[int, int]]:
    """Split nodes 0..n into smooth pieces [p, q] delimited by breakpoints."""
    cuts = [0] + sorted(int(b) for b in breaks if 0 < b < n) + [n]
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def simpson_weights(n: int) -> np.ndarray:
    """Composite Simpson weights on n+1 uniform nodes of [0, 1] (n even)."""
    if n < 2 or n % 2:
        raise ValueError(f"Simpson quadrature needs an even node count, got n={n}")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * n)


def simpson(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Integrate samples over [0, 1] along ``axis`` with composite Simpson."""
    values = np.asarray(values)
    n = values.shape[axis] - 1
    w = simpson_weights(n)
    return np.tensordot(w, np.moveaxis(values, axis, 0), axes=(0, 0))


def _lagrange_weights(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    # nodes (q, k), x (q,) -> weights (q, k); exact at nodes.
    k = nodes.shape[1]
    w = np.ones_like(nodes, dtype=float)
    for j in range(k):
        for m in range(k):
            if m != j:
                w[:, j] *= (x - nodes[:, m]) / (nodes[:, j] - nodes[:, m])
    return w


def interp_matrix(n: int, tq, breaks=()) -> tuple[np.ndarray, np.ndarray]:
    """Stencil indices and weights for cubic interpolation at query times.

    Queries land in the smooth piece containing them (a query sitting exactly
    on a breakpoint uses the piece to its left, which reproduces the node
    value exactly).  Pieces with fewer than four nodes fall back to the
    highest order available.

    Returns:
        (idx, w) with ``value(tq) = sum_j w[:, j] * f[idx[:, j]]``.
    """
    tq = np.atleast_1d(np.asarray(tq, dtype=float))
    u = np.clip(tq, 0.0, 1.0) * n
    segs = segments(n, breaks)
    lo = np.array([p for p, _ in segs])
    hi = np.array([q for _, q in segs])
    seg = np.searchsorted(hi, u, side="left")
    seg = np.minimum(seg, len(segs) - 1)
    p, q = lo[seg], hi[seg]
    k = int(min(4, np.min(hi - lo) + 1))
    cell = np.clip(np.floor(u).astype(int), p, q - 1)
    start = np.clip(cell - (k // 2 - 1), p, q - k + 1)
    idx = start[:, None] + np.arange(k)[None, :]
    w = _lagrange_weights(idx.astype(float), u)
    return idx, w


def interp(values: np.ndarray, tq, breaks=(), axis: int = 0) -> np.ndarray:
    """Cubic piecewise-Lagrange interpolation of grid samples along ``axis``."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    n = values.shape[0] - 1
    idx, w = interp_matrix(n, tq, breaks)
    out = np.einsum("qk,qk...->q...", w, values[idx])
    return np.moveaxis(out, 0, axis)


def midpoint_weights(n: int, breaks=()) -> tuple[np.ndarray, np.ndarray]:
    """Stencils for the cell midpoints t_{i+1/2}, i = 0..n-1."""
    return interp_matrix(n, (np.arange(n) + 0.5) / n, breaks)


def midpoints(values: np.ndarray, breaks=(), axis: int = 0) -> np.ndarray:
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    n = values.shape[0] - 1
    idx, w = midpoint_weights(n, breaks)
    out = np.einsum("qk,qk...->q...", w, values[idx])
    return np.moveaxis(out, 0, axis)


def fd_derivative(values: np.ndarray, breaks=(), axis: int = 0) -> np.ndarray:
    """Fourth-order finite-difference derivative on a uniform grid of [0, 1].

    Centered five-point stencils in the interior of each smooth piece and
    one-sided five-point stencils near its ends.
    """
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    n = values.shape[0] - 1
    h = 1.0 / n
    out = np.empty_like(values)
    for p, q in segments(n, breaks):
        f = values[p : q + 1]
        L = q - p
        d = np.empty_like(f)
        if L < 4:
            d[:] = np.gradient(f, h, axis=0, edge_order=2 if L >= 2 else 1)
        else:
            d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
            d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
            d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
            d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
            d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
        # piece ends are shared with the neighbouring piece; left piece wins
        if p > 0:
            out[p + 1 : q + 1] = d[1:]
        else:
            out[p : q + 1] = d
    return np.moveaxis(out, 0, axis)


def rk4_transport(G: np.ndarray, Gmid: np.ndarray) -> np.ndarray:
    """Solve dU/dt = -G(t) U, U(0) = I, with classical RK4.

    Args:
        G: coefficient matrices at the nodes, shape (..., n+1, d, d).
        Gmid: coefficient matrices at the cell midpoints, shape (..., n, d, d).

    Returns:
        U at every node, shape (..., n+1, d, d).
    """
    n = G.shape[-3] - 1
    d = G.shape[-1]
    h = 1.0 / n
    U = np.empty(G.shape, dtype=float)
    cur = np.broadcast_to(np.eye(d), G.shape[:-3] + (d, d)).copy()
    U[..., 0, :, :] = cur
    for i in range(n):
        g0, gm, g1 = G[..., i, :, :], Gmid[..., i, :, :], G[..., i + 1, :, :]
        k1 = -g0 @ cur
        k2 = -gm @ (cur + 0.5 * h * k1)
        k3 = -gm @ (cur + 0.5 * h * k2)
        k4 = -g1 @ (cur + h * k3)
        cur = cur + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        U[..., i + 1, :, :] = cur
    return U


def rk4_reverse(G: np.ndarray, Gmid: np.ndarray) -> np.ndarray:
    """Reverse transports R(t) = U(1) U(t)^{-1} without inversion.

    R solves dR/dt = R G(t) with R(1) = I; integrated backward by RK4.
    """
    n = G.shape[-3] - 1
    d = G.shape[-1]
    h = -1.0 / n
    R = np.empty(G.shape, dtype=float)
    cur = np.broadcast_to(np.eye(d), G.shape[:-3] + (d, d)).copy()
    R[..., n, :, :] = cur
    for i in range(n, 0, -1):
        g1, gm, g0 = G[..., i, :, :], Gmid[..., i - 1, :, :], G[..., i - 1, :, :]
        k1 = cur @ g1
        k2 = (cur + 0.5 * h * k1) @ gm
        k3 = (cur + 0.5 * h * k2) @ gm
        k4 = (cur + h * k3) @ g0
        cur = cur + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        R[..., i - 1, :, :] = cur
    return R


def thread_count() -> int:
    """Worker count from HOLONOMY2_THREADS (0 or unset means auto)."""
    raw = os.environ.get("HOLONOMY2_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"HOLONOMY2_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("HOLONOMY2_THREADS must be >= 0")
    return n if n > 0 else min(8, os.cpu_count() or 1)


def map_lines(fn, *arrays, min_chunk: int = 16):
    """Apply ``fn`` to chunks of independent lines (leading axis) and stitch.

    Each line is processed by the same arithmetic regardless of chunking, so
    the result is bitwise independent of the worker count.
    """
    L = arrays[0].shape[0]
    workers = thread_count()
    nchunks = max(1, min(workers, L // min_chunk))
    if nchunks == 1:
        return fn(*arrays)
    bounds = np.linspace(0, L, nchunks + 1).astype(int)
    parts = [tuple(a[bounds[i] : bounds[i + 1]] for a in arrays) for i in range(nchunks)]
    with ThreadPoolExecutor(max_workers=nchunks) as ex:
        results = list(ex.map(lambda args: fn(*args), parts))
    return np.concatenate(results, axis=0)


# reparametrization cutoffs: (tau, dtau) pairs on [0, 1]


def smoothstep(t):
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t * t)


def smoothstep_prime(t):
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return 30.0 * t * t * (1.0 - t) ** 2


def _flat_f(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def flat_cutoff(t):
    """C-infinity step with all derivatives vanishing at 0 and 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    f0, f1 = _flat_f(t), _flat_f(1.0 - t)
    return f0 / (f0 + f1)


def flat_cutoff_prime(t):
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    out = np.zeros_like(t)
    inner = (t > 0) & (t < 1)
    u = t[inner]
    f0, f1 = np.exp(-1.0 / u), np.exp(-1.0 / (1.0 - u))
    df0, df1 = f0 / u**2, f1 / (1.0 - u) ** 2
    out[inner] = (df0 * f1 + f0 * df1) / (f0 + f1) ** 2
    return out


def identity_tau(t):
    return np.clip(np.asarray(t, dtype=float), 0.0, 1.0)


def identity_tau_prime(t):
    return np.ones_like(np.asarray(t, dtype=float))
