"""Columnar text format for paths and homotopies.

Header ``# t [s] gamma(m) a(r) [b(r)]``, then one grid node per line as
whitespace-separated decimals.  Homotopies are row-major in (s, t): the t
index runs fastest.  Floats are written with ``repr`` so a round trip is
exact.  Extra header lines starting with ``#`` are ignored on read; lines
``# breaks: ...`` (paths), ``# tbreaks: ...`` and ``# sbreaks: ...`` (homotopies)
record grid break indices.
"""

from __future__ import annotations

import numpy as np

from .algebroid import AlgebroidModel
from .paths import TOL_PATH, AHomotopy, APath, PathError


def _header(model, homotopy: bool) -> str:
    cols = ["t"] + (["s"] if homotopy else []) + [f"gamma{i}" for i in range(model.base_dim)]
    cols += [f"a{i}" for i in range(model.rank)]
    if homotopy:
        cols += [f"b{i}" for i in range(model.rank)]
    return "# " + " ".join(cols)


def _fmt(row) -> str:
    return " ".join(repr(float(v)) for v in row)


def dump_path(p: APath) -> str:
    lines = [_header(p.model, False)]
    if p.breaks:
        lines.append("# breaks: " + " ".join(map(str, p.breaks)))
    for i in range(p.N + 1):
        lines.append(_fmt([p.t[i], *p.gamma[i], *p.a[i]]))
    return "\n".join(lines) + "\n"


def dump_homotopy(h: AHomotopy) -> str:
    lines = [_header(h.model, True)]
    for key in ("tbreaks", "sbreaks"):
        if getattr(h, key):
            lines.append(f"# {key}: " + " ".join(map(str, getattr(h, key))))
    t = np.linspace(0.0, 1.0, h.N + 1)
    s = np.linspace(0.0, 1.0, h.M + 1)
    for j in range(h.M + 1):
        for i in range(h.N + 1):
            lines.append(_fmt([t[i], s[j], *h.gamma[i, j], *h.a[i, j], *h.b[i, j]]))
    return "\n".join(lines) + "\n"


def _parse(text: str):
    rows, breaks = [], {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, rest = line[1:].partition(":")
            if sep and key.strip() in ("breaks", "tbreaks", "sbreaks"):
                try:
                    breaks[key.strip()] = tuple(int(v) for v in rest.split())
                except ValueError:
                    raise PathError(f"line {ln}: malformed break indices") from None
            continue
        try:
            rows.append([float(v) for v in line.split()])
        except ValueError:
            raise PathError(f"line {ln}: non-numeric entry") from None
    if not rows:
        raise PathError("grid file has no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise PathError(f"inconsistent column counts {sorted(widths)}")
    return np.array(rows), breaks


def load_path(model: AlgebroidModel, text: str, tol_path: float = TOL_PATH) -> APath:
    data, breaks = _parse(text)
    m, r = model.base_dim, model.rank
    if data.shape[1] != 1 + m + r:
        raise PathError(f"path file needs {1 + m + r} columns (t gamma a), got {data.shape[1]}")
    N = data.shape[0] - 1
    if not np.allclose(data[:, 0], np.linspace(0.0, 1.0, N + 1), atol=1e-12):
        raise PathError("t column must be the uniform grid on [0, 1]")
    return APath(model, data[:, 1:1 + m], data[:, 1 + m:], breaks.get("breaks", ()), tol_path)


def load_homotopy(model: AlgebroidModel, text: str, tol_path: float = TOL_PATH) -> AHomotopy:
    data, breaks = _parse(text)
    m, r = model.base_dim, model.rank
    if data.shape[1] != 2 + m + 2 * r:
        raise PathError(f"homotopy file needs {2 + m + 2 * r} columns (t s gamma a b), got {data.shape[1]}")
    t = np.unique(data[:, 0])
    s = np.unique(data[:, 1])
    N, M = len(t) - 1, len(s) - 1
    if data.shape[0] != (N + 1) * (M + 1):
        raise PathError("homotopy rows do not form a full (s, t) grid")
    grid = data.reshape(M + 1, N + 1, -1).transpose(1, 0, 2)
    if not (np.allclose(grid[:, 0, 0], np.linspace(0, 1, N + 1), atol=1e-12)
            and np.allclose(grid[0, :, 1], np.linspace(0, 1, M + 1), atol=1e-12)):
        raise PathError("rows must be row-major in (s, t) on uniform grids")
    g = grid[..., 2:2 + m]
    a = grid[..., 2 + m:2 + m + r]
    b = grid[..., 2 + m + r:]
    return AHomotopy(model, g, a, b, breaks.get("tbreaks", ()), breaks.get("sbreaks", ()), tol_path)
