import io
import json
import subprocess
import sys

import pytest

from chmgauss import __version__, cli, critical
from chmgauss.cli import RunConfig


def run(*argv):
    out = io.StringIO()
    cfg = cli.build_parser().parse_args(argv)
    code = cli.run(RunConfig(cfg.command, cfg.genus, cfg.genus_min, cfg.genus_max, getattr(cfg, "t", None),
                             cfg.output, cfg.tol, getattr(cfg, "roots_only", False)), out)
    return code, out.getvalue()


def test_critical_json():
    code, text = run("critical", "--genus", "2", "--output", "json")
    assert code == 0
    rep = json.loads(text)
    cv = critical.critical_values(critical.GenusParams(2))
    assert (rep["t1"], rep["t2"], rep["t3"]) == (cv.t1, cv.t2, cv.t3)
    assert rep["t3"] > rep["t2"]
    assert rep["version"] == __version__
    assert rep["config"]["genus"] == 2
    assert set(rep["rel_err_bound"]) == {"t1", "t2", "t3"}


def test_critical_csv_format():
    code, text = run("critical", "--genus", "3")
    header, row = text.splitlines()
    assert header == "g,t1,t2,t3,t1_rel_err,t2_rel_err,t3_rel_err"
    t1 = row.split(",")[1]
    mant = t1.split("e")[0].replace(".", "").lstrip("-")
    assert len(mant) == 17


def test_scan_small_range_has_no_roots():
    code, text = run("scan", "--genus-min", "2", "--genus-max", "37")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "g,l,X,has_roots,t_minus,t_plus,t3,margin"
    assert all(line.split(",")[3] == "false" for line in lines[1:])
    assert len(lines) - 1 == sum(g - 2 for g in range(3, 38))


def test_scan_roots_and_json():
    code, text = run("scan", "--genus-min", "38", "--genus-max", "60", "--roots-only", "--output", "json")
    assert code == 0
    rep = json.loads(text)
    assert rep["summary"]["uncertified_margins"] == 0
    assert all(r["has_roots"] and r["margin"] > r["margin_err"] for r in rep["rows"])
    assert rep["rows"][0]["g"] == 38


def test_index_costa():
    code, text = run("index", "--genus", "1", "--t", "costa")
    assert code == 0 and text.splitlines()[1].split(",")[2] == "5"
    code, text = run("nullity", "--genus", "1", "--t", "costa")
    assert text.splitlines()[1].split(",")[2] == "4"


@pytest.mark.parametrize("g", [2, 3, 10, 38, 100])
def test_headline_via_cli(g):
    _, text = run("nullity", "--genus", str(g), "--output", "json")
    assert json.loads(text)["nullity"] == 4
    _, text = run("index", "--genus", str(g), "--output", "json")
    assert json.loads(text)["index"] == 2 * g + 3


def test_named_t_values():
    _, text = run("nullity", "--genus", "2", "--t", "t3", "--output", "json")
    assert json.loads(text)["nullity"] == 5
    _, text = run("index", "--genus", "2", "--t", "t3", "--output", "json")
    assert json.loads(text)["index"] == 6


def test_undetermined_nullity_is_reported():
    q = critical.quartic_instance(2, critical.GenusParams(38))
    code, text = run("nullity", "--genus", "38", "--t", repr(q.t_minus), "--output", "json")
    rep = json.loads(text)
    assert code == 0 and rep["nullity"] is None and rep["lower_bound"] == 4


@pytest.mark.parametrize("argv", [
    ("critical", "--genus", "1"),
    ("critical",),
    ("index", "--genus", "2", "--t", "banana"),
    ("index", "--genus", "2", "--t", "-1"),
    ("index", "--genus", "2", "--t", "costa"),
    ("index", "--genus", "38", "--t", "50"),
    ("scan", "--genus-min", "10", "--genus-max", "5"),
])
def test_argument_errors_exit_2(argv, capsys):
    assert cli.main(list(argv)) == 2
    assert "error" in capsys.readouterr().err


def test_run_config_validation():
    with pytest.raises(cli.UsageError):
        RunConfig("nonsense")
    with pytest.raises(cli.UsageError):
        RunConfig("critical", genus=0)
    with pytest.raises(cli.UsageError):
        RunConfig("critical", output="xml")


def test_verify_commands():
    assert run("verify-periods", "--genus", "2")[0] == 0
    code, text = run("verify-systems", "--genus-min", "2", "--genus-max", "3")
    assert code == 0 and "false" not in text


def test_deterministic_bytes():
    a = run("scan", "--genus-min", "38", "--genus-max", "50", "--output", "json")
    b = run("scan", "--genus-min", "38", "--genus-max", "50", "--output", "json")
    assert a == b
    assert run("critical", "--genus", "7") == run("critical", "--genus", "7")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "chmgauss", "index", "--genus", "1", "--t", "costa"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1].endswith(",5")
