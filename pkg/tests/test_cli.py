import json

import numpy as np
import pytest

from riemann_lab.analysis import csv_data_section
from riemann_lab.cli import (ConfigError, RunConfig, build_parser, cmd_sweep, config_from_args,
                             main, parse_grid, parse_range, parse_window, run)


def _rows(text):
    lines = csv_data_section(text).strip().splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_parsers():
    assert parse_range("2:5", "--n") == (2, 5)
    with pytest.raises(ConfigError):
        parse_range("5:2", "--n")
    with pytest.raises(ConfigError):
        parse_range("x", "--n")
    np.testing.assert_allclose(parse_grid("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ConfigError):
        parse_grid("1:0:0.1")
    assert parse_window("1:2", "--window") == (1.0, 2.0)
    with pytest.raises(ConfigError):
        parse_window("2:2", "--window")


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig("wkb", tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig("wkb", zero_limit=-1)


def test_potential_command(capsys):
    assert main(["potential", "--model", "quadratic", "--x", "0:3:1"]) == 0
    out = capsys.readouterr().out
    assert "# model: quadratic" in out
    header, rows = _rows(out)
    assert header == ["x", "V"]
    assert rows[0] == ["0", "inf"] and rows[-1] == ["3", "9"]


def test_wkb_command_rules(capsys):
    main(["wkb", "--model", "quadratic", "--rule", "standard", "--n", "0:3"])
    _, rows = _rows(capsys.readouterr().out)
    assert [float(r[1]) for r in rows] == pytest.approx([3, 7, 11, 15], rel=1e-9)
    main(["wkb", "--model", "quadratic", "--n", "0:1"])
    out = capsys.readouterr().out
    assert "# mu: 2" in out and "# nu: 0.25" in out
    assert [float(r[1]) for r in _rows(out)[1]] == pytest.approx([2, 10], rel=1e-9)


def test_solve_command_json(capsys):
    assert main(["solve", "--model", "linear", "--n", "0:2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["columns"] == ["N", "E_N_exact"]
    assert doc["rows"][0][1] == pytest.approx(2.338107, rel=1e-5)
    assert doc["metadata"]["method"] == "fd"


def test_output_file(tmp_path):
    out = tmp_path / "v.csv"
    assert main(["potential", "--model", "linear", "--x", "1:2:1", "-o", str(out)]) == 0
    assert out.read_text().endswith("1,1\n2,2\n")


def test_missing_zero_table_exit_code(capsys):
    assert main(["compare", "--zeros", "/nonexistent/zeros.txt"]) == 2
    assert "zero table not found" in capsys.readouterr().err


def test_bad_range_exit_code(capsys):
    assert main(["wkb", "--n", "9:1"]) == 2


def test_perturb_small_band(capsys):
    assert main(["perturb", "--n", "1:6", "--zero-limit", "20", "--scale", "30"]) == 0
    out = capsys.readouterr().out
    assert "# rh_prefactor: 2.35619449019" in out
    assert "# linear_constant: 1.1780972451" in out
    header, rows = _rows(out)
    assert header == ["N", "E_N0", "E_N1_numeric", "E_N1_closed", "x_T", "E_N1_scaled"]
    for r in rows:
        assert float(r[5]) == pytest.approx(30.0 * float(r[2]), rel=1e-11)


def test_sweep_exponents():
    cfg = RunConfig("sweep")
    rep, ok = cmd_sweep(cfg)
    assert ok
    vals = {r[0]: r for r in rep.rows}
    assert vals["quadratic"][3] == pytest.approx(1.0, abs=0.01)
    assert vals["linear"][3] == pytest.approx(1.5, abs=0.05)
    assert rep.metadata["ordering"].startswith("log > linear")


def test_config_from_args_roundtrip():
    ns = build_parser().parse_args(["solve", "--model", "log", "--points", "3000"])
    cfg = config_from_args(ns)
    assert cfg.command == "solve" and cfg.model == "log" and cfg.points == 3000


def test_runs_are_byte_identical():
    cfg = RunConfig("wkb", n="0:20")
    a, _ = run(cfg)
    b, _ = run(cfg)
    assert a == b
