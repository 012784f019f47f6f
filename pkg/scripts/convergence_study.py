"""Convergence tables for transport and holonomy on every built-in model.

    python scripts/convergence_study.py [--out results/convergence.json]

Transport errors are measured against the closed-form exponential (so3) or a
fine reference transport; holonomy uses successive differences on the
generated homotopy h1. Also writes a CSV next to the JSON.
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np

from holonomy2.cli import (CONVERGENCE_TOL_PATH, HOLONOMY_LADDER, TRANSPORT_LADDER,
                           convergence_orders, transport_errors)
from holonomy2.config import RunConfig
from holonomy2.holonomy import holonomy_data
from holonomy2.models import REGISTRY, builtin_model
from holonomy2.scenarios import fixture


def _fmt(r):
    if max(r["errors"]) == 0.0:
        return "exact     "
    return f"order {r['order']:.2f}"


def study(name):
    model, rep = builtin_model(name)
    cfg = RunConfig(name=name)
    terr, how = transport_errors(rep, model, cfg, TRANSPORT_LADDER)
    hols = [holonomy_data(rep, fixture(model, rep, n, n, CONVERGENCE_TOL_PATH).h1).phi
            for n in HOLONOMY_LADDER]
    herr = [float(np.max(np.abs(hols[k] - hols[k + 1]), initial=0.0)) for k in range(len(hols) - 1)]
    return {
        "model": name,
        "transport": {"ladder": list(TRANSPORT_LADDER), "errors": terr, "reference": how,
                      **convergence_orders(TRANSPORT_LADDER, terr)},
        "holonomy": {"ladder": list(HOLONOMY_LADDER[:-1]), "errors": herr,
                     **convergence_orders(HOLONOMY_LADDER[:-1], herr)},
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/convergence.json")
    args = ap.parse_args()
    rows = [study(n) for n in sorted(REGISTRY)]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(rows, indent=2, allow_nan=True) + "\n")
    with out.with_suffix(".csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "kind", "N", "error"])
        for r in rows:
            for kind in ("transport", "holonomy"):
                for n, e in zip(r[kind]["ladder"], r[kind]["errors"]):
                    w.writerow([r["model"], kind, n, f"{e:.6e}"])
    for r in rows:
        t, h = r["transport"], r["holonomy"]
        print(f"{r['model']:22s} transport {_fmt(t)}  holonomy {_fmt(h)}")
    print(f"wrote {out} and {out.with_suffix('.csv')}")


if __name__ == "__main__":
    main()
