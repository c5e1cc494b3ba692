import json
import os
import stat
from fractions import Fraction

import pytest

from rapiddecay.experiments import ConfigError, parse_config, run
from rapiddecay.experiments.cli import main
from rapiddecay.experiments.report import ExperimentReport, MissingWitnessError, csv_cell
from rapiddecay.experiments.runner import list_registry

GROWTH = """
[experiment]
name = growth-z2
kind = growth
key = zd:2

[params]
r_max = 10
expected_slope = 2.0
slope_tol = 0.2
"""

MOZES = """
[experiment]
name = mozes-small
kind = mozes

[params]
p = 2
n_max = 2
"""


def write_cfg(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# -- config parsing ------------------------------------------------------------

def test_parse_cases_inherit_params():
    cfg = parse_config("""
[experiment]
kind = growth
key = zd:1
[params]
r_max = 8
expected_slope = 1
[case a]
[case b]
key = zd:2
expected_slope = 2
""", "x/demo.cfg")
    assert cfg.name == "demo"
    assert [(c.name, c.key) for c in cfg.cases] == [("a", "zd:1"), ("b", "zd:2")]
    assert cfg.cases[0].params.int("r_max") == 8
    assert cfg.cases[1].params.float("expected_slope") == 2.0


@pytest.mark.parametrize("text", [
    "[params]\nr_max = 3\n",                                  # no [experiment]
    "[experiment]\nkind = nonsense\n",
    "[experiment]\nkind = growth\n[other]\nx = 1\n",
    "[experiment]\nkind = growth\nbudget = -3\n",
    "not an ini file",
])
def test_parse_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_typed_accessors():
    cfg = parse_config("[experiment]\nkind = growth\n[params]\nn = x\nflag = maybe\n")
    p = cfg.cases[0].params
    with pytest.raises(ConfigError):
        p.int("n")
    with pytest.raises(ConfigError):
        p.bool("flag")
    with pytest.raises(ConfigError):
        p.int("missing", required=True)


# -- exit codes ----------------------------------------------------------------

def test_cli_success(tmp_path, capsys):
    cfg = write_cfg(tmp_path, GROWTH)
    assert main(["run", cfg, "--out", str(tmp_path / "out")]) == 0
    assert "PASS" in capsys.readouterr().out
    assert (tmp_path / "out" / "growth-z2.report.json").exists()
    assert (tmp_path / "out" / "growth-z2.rows.csv").exists()


def test_cli_checker_failure(tmp_path):
    cfg = write_cfg(tmp_path, GROWTH.replace("expected_slope = 2.0", "expected_slope = 3.0"))
    assert main(["run", cfg, "--out", str(tmp_path)]) == 2
    data = json.loads((tmp_path / "growth-z2.report.json").read_text())
    assert data["status"] == "fail"
    failed = [c for c in data["checks"] if not c["passed"]]
    assert failed and all(c["witness"] is not None for c in failed)


@pytest.mark.parametrize("text", [
    GROWTH.replace("key = zd:2", "key = nosuchgroup:7"),
    GROWTH.replace("r_max = 10", "r_max = ten"),
    "[experiment]\nkind = bogus\n",
])
def test_cli_config_error(tmp_path, text, capsys):
    cfg = write_cfg(tmp_path, text)
    assert main(["run", cfg, "--out", str(tmp_path)]) == 1
    assert "config error" in capsys.readouterr().err


def test_cli_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.cfg")]) == 1


def test_cli_list_and_version(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "[groups]" in out and "[kinds]" in out and "c-set-triples" in out
    assert main(["version"]) == 0


def test_registry_contents():
    reg = list_registry()
    assert reg["kinds"] == sorted(reg["kinds"])
    for kind in ("growth", "mozes", "bcp", "c-set-triples", "median-suite", "blowup"):
        assert kind in reg["kinds"]
    assert reg["groups"] and reg["complexes"]


# -- reports -------------------------------------------------------------------

def test_reruns_are_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, MOZES)
    a, b = tmp_path / "a", tmp_path / "b"
    run(cfg, out_dir=str(a))
    run(cfg, out_dir=str(b))
    for name in ("mozes-small.report.json", "mozes-small.rows.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_timing_only_on_request(tmp_path):
    cfg = write_cfg(tmp_path, MOZES)
    assert "timing" not in run(cfg, write=False).to_dict()
    cfg = write_cfg(tmp_path, MOZES.replace("kind = mozes", "kind = mozes\nrecord_timing = true"))
    assert "total_seconds" in run(cfg, write=False).to_dict()["timing"]


def test_csv_rationals(tmp_path):
    cfg = write_cfg(tmp_path, MOZES)
    run(cfg, out_dir=str(tmp_path))
    text = (tmp_path / "mozes-small.rows.csv").read_text()
    assert "4/1" in text and "16/1" in text
    assert csv_cell(Fraction(-3, 6)) == "-1/2"
    assert csv_cell(0.1) == "0.10000000000000001"
    assert csv_cell(True) == "true"


def test_failed_check_needs_witness():
    rep = ExperimentReport("x", "growth", {})
    rep.check("ok", True)
    with pytest.raises(MissingWitnessError):
        rep.check("bad", False)
    rep.check("bad", False, witness={"at": 3})
    assert rep.exit_code == 2


def test_json_rejects_nan_and_sorts_keys():
    rep = ExperimentReport("x", "growth", {})
    rep.fit("f", float("nan"), 0.0, [1, 2])
    text = rep.to_json()
    assert '"nan"' in text
    data = json.loads(text)
    assert list(data) == sorted(data)


def test_budget_override(tmp_path, monkeypatch):
    monkeypatch.setenv("RAPIDDECAY_BUDGET", "50")
    cfg = write_cfg(tmp_path, GROWTH)
    rep = run(cfg, write=False)
    assert rep.exit_code == 2
    [bad] = rep.failures()
    assert bad.name == "budget"
    assert bad.witness["cap"] == 50
    assert rep.budget["exceeded"]


def test_non_cat0_input_becomes_failed_check(tmp_path):
    tri = tmp_path / "tri.cx"
    tri.write_text("vertices 3\nedge 0 1\nedge 1 2\nedge 2 0\n")
    cfg = write_cfg(tmp_path, f"[experiment]\nkind = sageev\nkey = file:{tri}\n")
    rep = run(cfg, write=False)
    [bad] = rep.failures()
    assert bad.name == "cat0-input"
    assert bad.witness["reason"]


def test_six_cycle_median_failure(tmp_path):
    hexagon = tmp_path / "hex.cx"
    hexagon.write_text("vertices 6\n" + "".join(f"edge {i} {(i + 1) % 6}\n" for i in range(6)))
    cfg = write_cfg(tmp_path, f"[experiment]\nkind = median-suite\nkey = file:{hexagon}\n")
    assert main(["run", cfg, "--out", str(tmp_path)]) == 2


def test_atomic_output_leaves_no_temporaries(tmp_path):
    cfg = write_cfg(tmp_path, MOZES)
    out = tmp_path / "out"
    run(cfg, out_dir=str(out))
    run(cfg, out_dir=str(out))
    names = sorted(os.listdir(out))
    assert names == ["mozes-small.report.json", "mozes-small.rows.csv"]
    mode = stat.S_IMODE(os.stat(out / names[0]).st_mode)
    assert mode & stat.S_IRGRP
