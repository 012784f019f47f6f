import json
import subprocess
import sys

import pytest

from holonomy2.cli import convergence_orders, run


def test_scenario_so3_exit_zero(capsys):
    code, rpt = run(["scenario", "--name", "so3_string"])
    assert code == 0 and rpt.ok
    assert "scenario: PASS" in capsys.readouterr().out


def test_periods_prequantization(tmp_path):
    out = tmp_path / "p.json"
    code, rpt = run(["periods", "--name", "prequantization_s2", "--report", str(out)])
    d = json.loads(out.read_text())
    assert code == 0 and d["info"]["periods.verdict"] == "obstruction found"
    assert abs(d["info"]["periods.sphere0.norm"] - 12.566370614359172) < 1e-3
    assert d["config"]["N"] == 400


def test_transport_order_from_coarse_grid():
    code, rpt = run(["transport", "--name", "so3_string", "--path", "constant:0,0,1", "--N", "8"])
    assert code == 0 and rpt.info["transport.order"] >= 3.8


def test_check_failure_exit_one():
    code, rpt = run(["holonomy", "--name", "constant_coeff", "--tol-hol", "1e-15"])
    assert code == 1 and not rpt.ok


@pytest.mark.parametrize("argv", [
    ["scenario", "--name", "nope"],
    ["scenario", "--name", "so3_string", "--N", "9"],
    ["transport", "--name", "so3_string", "--path", "spiral:1"],
    ["transport", "--name", "so3_string", "--param", "lam"],
    ["laws", "--name", "constant_coeff", "--param", "lam=0"],
    ["holonomy", "--name", "so3_string", "--input", "/nonexistent/file"],
    ["bogus-subcommand"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _ = run(argv)
    assert code == 2
    if argv and argv[0] != "bogus-subcommand":
        assert "error" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[model]\nname = abelian\nscale = 1.0\n[grids]\nN = 64\nM = 32\n")
    code, rpt = run(["laws", "--config", str(cfg), "--M", "48", "--tol-path", "1e-2"])
    assert code == 0
    assert rpt.config["name"] == "abelian" and rpt.config["N"] == 64 and rpt.config["M"] == 48
    assert rpt.config["params"] == {"scale": 1.0}


def test_dump_and_reload_homotopy(tmp_path):
    f = tmp_path / "h.txt"
    code, r1 = run(["holonomy", "--name", "tangent_sphere_type1", "--dump", str(f)])
    code2, r2 = run(["holonomy", "--name", "tangent_sphere_type1", "--input", str(f)])
    assert code == code2 == 0
    assert r1.info["holonomy.matrix"] == r2.info["holonomy.matrix"]


def test_reports_are_deterministic(tmp_path):
    paths = [tmp_path / f"r{k}.json" for k in range(2)]
    for p in paths:
        run(["truncate-check", "--name", "constant_coeff", "--report", str(p), "--no-wall-clock"])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "holonomy2", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "holonomy2" in r.stdout


def test_order_helper():
    o = convergence_orders([8, 16, 32], [1.0, 1 / 16, 1 / 256])
    assert o["pairwise"] == [4.0, 4.0] and o["order"] == 4.0


def test_shipped_config_loads():
    from pathlib import Path

    from holonomy2.config import load_config

    cfg = load_config(Path(__file__).parents[1] / "configs" / "constant_coeff.ini")
    assert cfg.name == "constant_coeff" and cfg.params == {"lam": 2.0, "kappa": 0.5}
