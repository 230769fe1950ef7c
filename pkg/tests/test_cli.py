import csv
import io
import json
import subprocess
import sys

import pytest

from bslab import __version__
from bslab.cli import main, run
from bslab.config import Config, load_config


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_chars_decompose_csv(capsys):
    code, out, _ = call(capsys, "chars", "decompose", "--n", "8", "--young", "4,2,2")
    assert code == 0
    assert out.startswith(f"# bslab {__version__}")
    rows = list(csv.reader(data_lines(out)))
    assert rows[0] == ["partition_label", "multiplicity"]
    got = {r[0]: int(r[1]) for r in rows[1:]}
    assert got["7,1"] == 2 and got["6,2"] == 3 and "5,1,1,1" not in got


def test_chars_kostka(capsys):
    code, out, _ = call(capsys, "chars", "kostka", "--shape", "3,1", "--content", "2,1,1", "--json")
    assert code == 0 and json.loads(out)["kostka"] == 2


def test_field_json(capsys):
    code, out, _ = call(capsys, "field", "--disc", "-23")
    obj = json.loads(out)
    assert code == 0 and obj["h"] == 3
    assert abs(float(obj["ratio"]) - 0.7008) < 1e-4


def test_field_precision_flag(capsys):
    _, out, _ = call(capsys, "field", "--disc", "5", "--precision", "50")
    obj = json.loads(out)
    assert obj["precision"] == 50 and len(obj["rho"]) > 45


def test_regions_json(capsys):
    code, out, _ = call(capsys, "regions", "stark", "--log-d", "10")
    assert code == 0 and json.loads(out)["lower"] == "0.975"


def test_tower_command(capsys, tmp_path):
    path = tmp_path / "tower.csv"
    path.write_text("level,n,r1,r2,g,Nq_2\n1,2,0,1,2,1\n2,4,0,2,4,2\n")
    code, out, _ = call(capsys, "tower", "--input", str(path), "--json")
    assert code == 0
    assert abs(float(json.loads(out)["phi_q"]["2"]) - 0.5) < 1e-20


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "f.json"
    code, out, _ = call(capsys, "field", "--disc", "-4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["h"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["field"],
        ["field", "--disc", "abc"],
        ["chars", "decompose", "--n", "8", "--young", "4,x"],
        ["field", "--disc", "-23", "--json", "--csv"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("error:") and err.count("\n") == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["field", "--disc", "-12"],
        ["sweep", "--lo", "100", "--hi", "10"],
        ["regions", "stark", "--log-d", "0.1"],
        ["biquad", "--d1", "5", "--d2", "5"],
        ["tower", "--input", "/nonexistent/tower.csv"],
    ],
)
def test_computation_errors_exit_1(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_bad_config_is_usage_error(capsys, tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("precision = 5\n")
    code, _, err = call(capsys, "field", "--disc", "-23", "--config", str(cfg))
    assert code == 2 and "precision" in err


def test_verify_quick(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "quick", "--check", "hook_decomposition", "--check", "young_module_audit")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# bslab") and lines[-1].startswith("# summary:")
    assert any(ln.startswith("PASS hook_decomposition") for ln in lines)
    assert any(ln.startswith("WARN hook_only_young_decomposition") for ln in lines)


def test_run_alias_and_determinism(capsys):
    a = call(capsys, "sweep", "--sign", "real", "--lo", "5", "--hi", "400", "--csv")
    b = call(capsys, "sweep", "--sign", "real", "--lo", "5", "--hi", "400", "--csv")
    assert a == b
    assert run(["field", "--disc", "5"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bslab", "field", "--disc", "-4"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["h"] == 1


# --- config ------------------------------------------------------------------


def test_config_defaults():
    c = Config()
    assert c.precision == 30 and c.q_max == 100 and c.degree_cap == 14
    with pytest.raises(ValueError):
        Config(precision=10)
    with pytest.raises(ValueError):
        Config(siegel_low=(10, 5))


def test_config_file(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("# comment\nprecision = 40\nsiegel_low = 900, 1000  # smaller\ncache_path = /tmp/x.jsonl\n")
    c = load_config(p)
    assert c.precision == 40 and c.siegel_low == (900, 1000) and c.cache_path == "/tmp/x.jsonl"
    assert c.with_overrides(precision=None, q_max=50).q_max == 50
    assert load_config(None) == Config()


def test_config_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("precision = 40\nbogus = 1\n")
    with pytest.raises(ValueError, match=r"run\.conf:2"):
        load_config(p)
    p.write_text("precision 40\n")
    with pytest.raises(ValueError, match=r":1"):
        load_config(p)
