"""Run the scenario subcommand for every built-in model and summarize.

    python scripts/run_all_scenarios.py [--outdir results/scenarios] [--no-wall-clock]

Exit status is nonzero if any scenario fails.
"""

import argparse
import sys
from pathlib import Path

from holonomy2.cli import run
from holonomy2.models import REGISTRY


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results/scenarios")
    ap.add_argument("--no-wall-clock", action="store_true")
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = []
    for name in sorted(REGISTRY):
        argv = ["scenario", "--name", name, "--report", str(outdir / f"{name}.json")]
        if args.no_wall_clock:
            argv.append("--no-wall-clock")
        code, rpt = run(argv)
        worst = max((c.residual / c.tolerance for c in rpt.checks if c.tolerance > 0), default=0.0)
        summary.append((name, code, len(rpt.checks), worst, rpt.wall_clock_s))
    print()
    for name, code, n, worst, dt in summary:
        print(f"{name:22s} {'pass' if code == 0 else 'FAIL'}  {n:3d} checks  "
              f"worst residual/tolerance {worst:.1e}  {dt:.1f} s")
    return int(any(code for _, code, *_ in summary))


if __name__ == "__main__":
    sys.exit(main())
