import io
import json
import subprocess
import sys

import pytest

from uavirs.cli import main
from uavirs.scenario_io import bundled_scenario


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_defaults():
    code, out, err = run("defaults")
    assert code == 0 and err == ""
    lines = out.splitlines()
    for expected in ("fc=1e+11", "noise_dbm=-90", "u_nlos_db=23", "m=100", "a=0.9", "pt=6", "pt=2"):
        assert expected in lines


def test_eval_conventional(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("model: conventional\nue_pos: [0, 0, 1.5]\n")
    code, out, _ = run("eval", "--scenario", str(path))
    assert code == 0
    assert "pl_db=127.1569978" in out and "rate=1.107455513" in out


def test_eval_singular_angle(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("model: irs\ntheta_t: 90\n")
    code, out, err = run("eval", "--scenario", str(path))
    assert code == 3 and out == ""
    assert "singular" in err and len(err.splitlines()) == 1


def test_eval_singular_via_override():
    code, _, err = run("eval", "--scenario", "fig4_7", "--set", "irs.theta_t=90")
    assert code == 3 and "singular" in err


def test_validation_exit_code(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("model: irs\ntheta_t: 95\n")
    code, _, err = run("eval", "--scenario", str(path))
    assert code == 1 and "theta_t" in err


def test_duplicate_override():
    code, _, err = run("eval", "--scenario", "compare", "--set", "pt=1", "--set", "pt=2")
    assert code == 1 and "more than once" in err


def test_missing_file(tmp_path):
    code, _, err = run("eval", "--scenario", str(tmp_path / "nope.yaml"))
    assert code == 2 and "nope.yaml" in err


def test_parse_error(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("model: [\n")
    assert run("eval", "--scenario", str(path))[0] == 1


def test_sweep_twice_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    code1, out1, _ = run("sweep", "--scenario", "fig6_9", "--out", str(a))
    code2, _, _ = run("sweep", "--scenario", "fig6_9", "--out", str(b))
    assert code1 == code2 == 0
    assert out1.strip() == str(a / "fig6_9.csv")
    assert (a / "fig6_9.csv").read_bytes() == (b / "fig6_9.csv").read_bytes()


def test_sweep_writes_only_into_out(tmp_path, monkeypatch):
    work = tmp_path / "cwd"
    work.mkdir()
    monkeypatch.chdir(work)
    out = tmp_path / "results"
    code, stdout, _ = run("sweep", "--scenario", "fig4_7", "--out", str(out),
                          "--set", "sweep.0.step=30", "--set", "sweep.1.step=30")
    assert code == 0
    assert list(work.iterdir()) == []
    assert sorted(p.name for p in out.iterdir()) == ["fig4_7.csv", "fig4_7.csv.skipped.csv"]
    assert len(stdout.splitlines()) == 2


def test_sweep_compare_model_and_json(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(
        "model: compare\nname: both\n"
        "sweep: [{kind: ue_position_x, start: 0, stop: 100, step: 50}]\n"
        "output: {formats: [csv, json]}\n"
    )
    code, _, _ = run("sweep", "--scenario", str(path), "--out", str(tmp_path / "o"))
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "o").iterdir())
    assert names == ["both_conventional.csv", "both_conventional.json", "both_irs.csv", "both_irs.json"]
    doc = json.loads((tmp_path / "o" / "both_irs.json").read_text())
    assert len(doc["rows"]) == 3


def test_sweep_without_axes(tmp_path):
    assert run("sweep", "--scenario", "compare", "--out", str(tmp_path))[0] == 1


def test_compare(tmp_path):
    code, out, _ = run("compare", "--scenario", "compare", "--out", str(tmp_path))
    assert code == 0
    doc = json.loads((tmp_path / "compare_summary.json").read_text())
    assert doc["delta_pl_db"] == pytest.approx(43.974, abs=1e-3)
    assert out.strip() == str(tmp_path / "compare_summary.json")


def test_compare_needs_compare_model(tmp_path):
    assert run("compare", "--scenario", "fig6_9", "--out", str(tmp_path))[0] == 1


def test_bad_command():
    assert run("plot")[0] == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "uavirs", "eval", "--scenario", str(bundled_scenario("compare"))],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "[irs]" in proc.stdout and proc.stderr == ""
