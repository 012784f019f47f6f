"""Command-line front end.

Exit status: 0 when every check passes, 1 when some check fails, 2 on usage
or configuration errors.  A human-readable summary goes to stdout; the machine
report (JSON, schema in README) is written to ``--report`` when given.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from .algebroid import ModelError
from .complexes import ComplexError
from .config import ConfigError, RunConfig, load_config
from .generators import parse_path_spec
from .gridio import dump_homotopy, dump_path, load_homotopy, load_path
from .holonomy import HolonomyError, chain_homotopy_residuals, holonomy_data, transport
from .integrability import IntegrabilityError
from .models import REGISTRY, builtin_model
from .paths import PathError, constant_path
from .report import Report
from .scenarios import (SCENARIOS, SPHERE_GRID, default_spheres, fixture, laws_checks,
                        periods_checks, rodrigues, truncation_checks, validation_checks)
from .transformation import TransformationError

SUBCOMMANDS = ("validate-model", "transport", "holonomy", "laws", "truncate-check", "periods",
               "scenario", "convergence")
# grid defaults per subcommand when neither flags nor config set them
GRID_DEFAULTS = {"periods": (SPHERE_GRID, SPHERE_GRID)}
TRANSPORT_LADDER = (8, 16, 32, 64)
HOLONOMY_LADDER = (16, 32, 64, 128)
MIN_ORDER_TRANSPORT = 3.8
MIN_ORDER_HOLONOMY = 1.8
CONVERGENCE_TOL_PATH = 0.1  # coarse ladder grids only

USER_ERRORS = (ConfigError, ModelError, PathError, ComplexError, HolonomyError,
               IntegrabilityError, TransformationError)


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holonomy2", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="SUBCOMMAND")
    helps = {
        "validate-model": "check algebroid axioms and the representation identities",
        "transport": "parallel transport along a path, with a convergence order",
        "holonomy": "holonomy of a homotopy and its chain-homotopy residuals",
        "laws": "transport and holonomy law suite on built-in homotopies",
        "truncate-check": "1-truncation composition check",
        "periods": "periods along built-in A-spheres and the integrability verdict",
        "scenario": "full scenario for a built-in model",
        "convergence": "empirical convergence orders of transport and holonomy",
    }
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--name", help=f"model name ({', '.join(REGISTRY)})")
        sp.add_argument("--config", help="INI config file")
        sp.add_argument("--N", type=int, help="t-grid size (even, >= 8)")
        sp.add_argument("--M", type=int, help="s-grid size (even, >= 8)")
        sp.add_argument("--refine", type=int, help="refinement factor for order estimates")
        sp.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="model parameter (repeatable)")
        for tol in ("path", "transport", "hol", "thin", "model"):
            sp.add_argument(f"--tol-{tol}", type=float, dest=f"tol_{tol}")
        sp.add_argument("--path", help="path spec: constant:x1,...,xr or unit")
        sp.add_argument("--input", help="columnar grid file with a path or homotopy")
        sp.add_argument("--dump", help="write the path/homotopy used in columnar format")
        sp.add_argument("--report", help="write the JSON machine report here")
        sp.add_argument("--no-wall-clock", action="store_true",
                        help="omit the wall-clock field from the JSON report")
        if name == "convergence":
            sp.add_argument("--kind", choices=("transport", "holonomy", "both"), default="both")
    return p


def _parse_params(items) -> dict:
    out = {}
    for it in items:
        k, sep, v = it.partition("=")
        if not sep or not k:
            raise UsageError(f"--param expects KEY=VALUE, got {it!r}")
        try:
            out[k] = int(v)
        except ValueError:
            try:
                out[k] = float(v)
            except ValueError:
                raise UsageError(f"--param {k}: {v!r} is not a number") from None
    return out


def make_config(args) -> RunConfig:
    N0, M0 = GRID_DEFAULTS.get(args.command, (200, 100))
    cfg = load_config(args.config) if args.config else RunConfig(N=N0, M=M0)
    params = dict(cfg.params)
    params.update(_parse_params(args.param))
    over = {k: getattr(args, k) for k in ("name", "N", "M", "refine", "tol_path", "tol_transport",
                                          "tol_hol", "tol_thin", "tol_model", "path", "input",
                                          "report")}
    over["params"] = params
    cfg = cfg.with_overrides(**over)
    if cfg.name not in REGISTRY:
        raise ModelError(f"unknown model {cfg.name!r}; choose from {sorted(REGISTRY)}")
    return cfg


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _default_path(model, cfg: RunConfig, N: int):
    if cfg.path:
        return parse_path_spec(model, cfg.path, N, _x0(model))
    fx_xi = np.linspace(0.3, -0.5, model.rank)
    return constant_path(model, _x0(model), fx_xi, N, cfg.tol_path)


def _x0(model):
    from .scenarios import base_point

    return base_point(model)


def convergence_orders(Ns, errs) -> dict:
    """Pairwise observed orders, the log-log fit, and the finest-pair order.

    The finest pair is the asymptotic estimate; coarse levels of curved
    models are pre-asymptotic and would bias a global fit downward.
    """
    Ns = np.asarray(Ns, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if np.any(errs <= 0):
        nan = float("nan")
        return {"order": nan, "pairwise": [], "fit": nan}
    pair = (np.log(errs[:-1] / errs[1:]) / np.log(Ns[1:] / Ns[:-1])).tolist()
    fit = float(-np.polyfit(np.log(Ns), np.log(errs), 1)[0])
    return {"order": float(pair[-1]), "pairwise": pair, "fit": fit}


def _order_check(rpt, name, Ns, errs, minimum, **details):
    o = convergence_orders(Ns, errs)
    order = o["order"]
    res = max(0.0, minimum - order) if np.isfinite(order) else float("inf")
    rpt.add(name, res, 0.0, order=order, pairwise_orders=o["pairwise"], fit_order=o["fit"],
            min_order=minimum, ladder=list(Ns), errors=list(errs), **details)
    rpt.info[name] = order


def transport_errors(rep, model, cfg: RunConfig, ladder):
    """Errors of transport on the ladder against an oracle or a fine reference."""
    _default_path(model, cfg, ladder[0])  # validates the path spec
    xi = None
    if cfg.path and cfg.path.startswith("constant:") and model.name == "so3_string":
        xi = np.array([float(v) for v in cfg.path.split(":", 1)[1].split(",")])
    elif not cfg.path and model.name == "so3_string":
        xi = np.linspace(0.3, -0.5, 3)
    if xi is not None:
        ref, how = rodrigues(xi), "matrix-exponential oracle"
        refC = np.eye(rep.complex.dim_C)
    else:
        T = transport(rep, _default_path(model, cfg, 8 * ladder[-1]), float("inf"))
        ref, refC, how = T.A_E, T.A_C, f"fine reference N={8 * ladder[-1]}"
    errs = []
    for n in ladder:
        T = transport(rep, _default_path(model, cfg, n), float("inf"))
        errs.append(max(float(np.max(np.abs(T.A_E - ref), initial=0.0)),
                        float(np.max(np.abs(T.A_C - refC), initial=0.0))))
    return errs, how


def cmd_validate(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("validate-model", cfg.as_dict())
    validation_checks(rpt, model, rep, cfg)
    return rpt


def cmd_transport(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("transport", cfg.as_dict())
    if cfg.input:
        p = load_path(model, _read(cfg.input), cfg.tol_path)
    else:
        p = _default_path(model, cfg, cfg.N)
    if args.dump:
        _write(args.dump, dump_path(p))
    T = transport(rep, p, float("inf"))
    D = rep.complex.d
    chain = float(np.max(np.abs(T.A_E @ D(p.source) - D(p.target) @ T.A_C), initial=0.0))
    rpt.add("transport.chain_condition", chain, cfg.tol_transport)
    rpt.info["transport.A_E"] = T.A_E.tolist()
    rpt.info["transport.A_C"] = T.A_C.tolist()
    if not cfg.input:
        ladder = TRANSPORT_LADDER if cfg.N > 32 else (cfg.N, cfg.refine * cfg.N)
        errs, how = transport_errors(rep, model, cfg, ladder)
        if max(errs) == 0.0:
            rpt.info["transport.order"] = "exact at every level (trivial connection)"
        else:
            _order_check(rpt, "transport.order", ladder, errs, MIN_ORDER_TRANSPORT, reference=how)
    return rpt


def cmd_holonomy(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("holonomy", cfg.as_dict())
    if cfg.input:
        h = load_homotopy(model, _read(cfg.input), cfg.tol_path)
    else:
        h = fixture(model, rep, cfg.N, cfg.M, cfg.tol_path).h1
    if args.dump:
        _write(args.dump, dump_homotopy(h))
    d = holonomy_data(rep, h, float("inf"))
    rC, rE = chain_homotopy_residuals(rep, h)
    est = d.error_estimate if np.isfinite(d.error_estimate) else None
    rpt.add("holonomy.chain_homotopy_C", rC, cfg.tol_hol)
    rpt.add("holonomy.chain_homotopy_E", rE, cfg.tol_hol, error_estimate=est)
    rpt.info["holonomy.matrix"] = d.phi.tolist()
    rpt.info["holonomy.error_estimate"] = est
    rpt.info["homotopy.residual"] = h.residual
    return rpt


def cmd_laws(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("laws", cfg.as_dict())
    laws_checks(rpt, fixture(model, rep, cfg.N, cfg.M, cfg.tol_path), cfg)
    return rpt


def cmd_truncate(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("truncate-check", cfg.as_dict())
    truncation_checks(rpt, fixture(model, rep, cfg.N, cfg.M, cfg.tol_path), cfg)
    return rpt


def cmd_periods(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("periods", cfg.as_dict())
    spheres = default_spheres(model, rep, cfg.N, cfg.M, cfg.tol_path)
    if args.dump:
        _write(args.dump, dump_homotopy(spheres[0].homotopy))
    expected = None
    if model.name == "prequantization_s2" and model.params["r_min"] < 1 < model.params["r_max"]:
        expected = [4 * np.pi]
    periods_checks(rpt, model, rep, spheres, expected)
    return rpt


def cmd_scenario(cfg, args):
    rpt = SCENARIOS[cfg.name](cfg)
    return rpt


def cmd_convergence(cfg, args):
    model, rep = builtin_model(cfg.name, cfg.params)
    rpt = Report("convergence", cfg.as_dict())
    if args.kind in ("transport", "both"):
        errs, how = transport_errors(rep, model, cfg, TRANSPORT_LADDER)
        if max(errs) == 0.0:
            rpt.info["transport.order"] = "exact at every level (trivial connection)"
        else:
            _order_check(rpt, "transport.order", TRANSPORT_LADDER, errs, MIN_ORDER_TRANSPORT,
                         reference=how)
    if args.kind in ("holonomy", "both"):
        tp = max(cfg.tol_path, CONVERGENCE_TOL_PATH)
        hols = [holonomy_data(rep, fixture(model, rep, n, n, tp).h1).phi for n in HOLONOMY_LADDER]
        diffs = [float(np.max(np.abs(hols[k] - hols[k + 1]), initial=0.0)) for k in range(len(hols) - 1)]
        if max(diffs) < 1e-13:
            rpt.info["holonomy.order"] = "converged to roundoff at every level"
        else:
            _order_check(rpt, "holonomy.order", HOLONOMY_LADDER[:-1], diffs, MIN_ORDER_HOLONOMY,
                         reference="successive differences")
    return rpt


COMMANDS = {
    "validate-model": cmd_validate, "transport": cmd_transport, "holonomy": cmd_holonomy,
    "laws": cmd_laws, "truncate-check": cmd_truncate, "periods": cmd_periods,
    "scenario": cmd_scenario, "convergence": cmd_convergence,
}


def run(argv=None):
    """Run the CLI; returns ``(exit_code, report_or_None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2, None
    t0 = time.perf_counter()
    try:
        cfg = make_config(args)
        rpt = COMMANDS[args.command](cfg, args)
    except (UsageError, *USER_ERRORS) as exc:
        print(f"holonomy2 {args.command}: error: {exc}", file=sys.stderr)
        return 2, None
    rpt.wall_clock_s = time.perf_counter() - t0
    sys.stdout.write(rpt.to_text())
    if cfg.report:
        try:
            _write(cfg.report, rpt.to_json(wall_clock=not args.no_wall_clock))
        except UsageError as exc:
            print(f"holonomy2 {args.command}: error: {exc}", file=sys.stderr)
            return 2, rpt
    return (0 if rpt.ok else 1), rpt


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
