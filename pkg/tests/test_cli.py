import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from laap_lab import cli

GOLDEN = Path(__file__).parent / "golden"
EX = ["--rho-minus", "4.5", "--v-minus", "8", "--rho-plus", "3.5", "--v-plus", "-8", "--kappa", "1", "--gamma", "2"]

CASES = {
    "riemann_example.txt": ["riemann", *EX],
    "laap_example.json": ["laap", *EX, "--format", "json"],
    "compare_example.txt": ["compare", *EX, "--rho1", "18"],
    "subsolution_example.json": ["subsolution", *EX, "--rho1", "18", "--format", "json"],
    "sweep_example.csv": ["sweep", *EX, "--rho1-from", "17", "--steps", "6"],
    "oscillator_example.txt": ["oscillator", "--c", "1", "--t1", "1.5707963", "--candidates", "1,2,5"],
    "aw_example.csv": ["aw", "--chi0", "4", "--c1", "1", "--c2", "0.5", "--t-bar", "2", "--format", "csv"],
}


def _run(capsys, argv):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _table(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(capsys, name):
    code, out, _ = _run(capsys, CASES[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


def test_riemann_example_value(capsys):
    _, out, _ = _run(capsys, ["riemann", *EX])
    assert abs(float(_table(out)["rho_m"]) - 18.40105) <= 5e-4


def test_laap_example_values(capsys):
    _, out, _ = _run(capsys, ["laap", *EX])
    t = _table(out)
    assert abs(float(t["l_diff_derivative_bound"]) - 4.80211) <= 1e-4
    assert t["theorem"] == "true" and t["corollary"] == "false"
    assert float(t["corollary_value"]) == -23.0


def test_oscillator_example_values(capsys):
    _, out, _ = _run(capsys, CASES["oscillator_example.txt"])
    t = _table(out)
    assert float(t["action"]) == pytest.approx(1.0, abs=1e-9)
    assert float(t["selected_c"]) == 1.0


def test_oscillator_numeric_action(capsys):
    _, out, _ = _run(capsys, ["oscillator", "--c", "2", "--t1", "0.5235987756", "--numeric"])
    t = _table(out)
    assert float(t["action_numeric"]) == pytest.approx(float(t["action"]), abs=1e-5)


def test_sweep_csv_is_parseable_and_column_stable(capsys):
    _, out, _ = _run(capsys, CASES["sweep_example.csv"])
    assert "\r" not in out and out.endswith("\n")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["rho1", "C", "l_diff", "action_margin", "dissipation_difference"]
    assert all(len(r) == 5 for r in rows)
    vals = [[float(v) for v in r] for r in rows[1:]]
    assert all(v[1] > 0.4754 for v in vals[:-1])
    # min-c has no strict fan at rho_m itself
    assert all(math.isnan(v) for v in vals[-1][1:])


def test_nine_significant_digits():
    assert cli.fmt_value(math.pi) == "3.14159265"
    assert cli.fmt_value(-0.0) == "0"
    assert cli.fmt_value(True) == "true"
    assert cli.fmt_value(1e-12) == "1e-12"


def test_json_non_finite_is_null():
    text = cli.render([{"a": math.nan, "b": 1.0}], "json")
    assert json.loads(text) == {"a": None, "b": 1.0}


@pytest.mark.parametrize("name", ["laap_example.json", "sweep_example.csv", "aw_example.csv"])
def test_determinism(capsys, name):
    outs = {_run(capsys, CASES[name])[1] for _ in range(3)}
    assert len(outs) == 1


def test_threads_env_does_not_change_output(capsys, monkeypatch):
    ref = _run(capsys, CASES["sweep_example.csv"])[1]
    for n in ("1", "3"):
        monkeypatch.setenv(cli.THREADS_ENV, n)
        assert _run(capsys, CASES["sweep_example.csv"])[1] == ref


@pytest.mark.parametrize("bad", ["0", "-2", "two"])
def test_threads_env_rejected(capsys, monkeypatch, bad):
    monkeypatch.setenv(cli.THREADS_ENV, bad)
    assert _run(capsys, CASES["sweep_example.csv"])[0] == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = _run(capsys, [*CASES["sweep_example.csv"], "--output", str(target)])
    assert code == 0 and out == ""
    assert target.read_bytes() == (GOLDEN / "sweep_example.csv").read_bytes()


# ---------------------------------------------------------------------------
# exit codes


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["riemann", "--rho-minus", "4.5"],
        ["riemann", *EX[:-2], "--gamma", "0.5"],
        ["riemann", *EX[:2], "--v-minus", "abc", *EX[4:]],
        ["subsolution", *EX, "--rho1", "30"],
        ["subsolution", *EX, "--rho1", "18", "--closure", "bogus"],
        ["oscillator", "--t1", "4"],
        ["oscillator", "--c", "0.5", "--t1", "1"],
        ["aw", "--chi0", "-1", "--c1", "1", "--t-bar", "1"],
        ["sweep", *EX, "--rho1-from", "17", "--steps", "0"],
    ],
)
def test_invalid_input_exit_code(capsys, argv):
    assert _run(capsys, argv)[0] == 2


def test_no_two_shock_exit_code(capsys):
    # diverging data: velocity jump positive
    argv = ["riemann", "--rho-minus", "1", "--v-minus", "-3", "--rho-plus", "1", "--v-plus", "3"]
    code, _, err = _run(capsys, argv)
    assert code == 3 and "infeasible" in err


def test_infeasible_closure_exit_code(capsys):
    code, _, _ = _run(capsys, ["subsolution", *EX, "--rho1", "18.4010541728228"])
    assert code == 3


def test_internal_failure_exit_code(capsys, monkeypatch):
    from laap_lab.errors import InternalConsistencyError

    def boom(a):
        raise InternalConsistencyError("forced")

    monkeypatch.setitem(cli._COMMANDS, "riemann", (boom, False))
    assert _run(capsys, ["riemann", *EX])[0] == 4


def test_help_exits_zero(capsys):
    assert _run(capsys, ["--help"])[0] == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "laap_lab", *CASES["laap_example.json"]], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout == (GOLDEN / "laap_example.json").read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# scenarios


def _scenario(tmp_path, obj):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(obj), encoding="utf-8")
    return ["scenario", "--file", str(p)]


EX_PARAMS = {"rho_minus": 4.5, "v_minus": 8, "rho_plus": 3.5, "v_plus": -8, "kappa": 1, "gamma": 2}


def test_scenario_matches_flags(tmp_path, capsys):
    argv = _scenario(tmp_path, {"kind": "riemann", "parameters": EX_PARAMS})
    code, out, _ = _run(capsys, argv)
    assert code == 0 and out == (GOLDEN / "riemann_example.txt").read_text(encoding="utf-8")


def test_scenario_analysis_and_output(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    obj = {
        "kind": "riemann",
        "parameters": dict(EX_PARAMS, analysis="sweep", rho1_from=17, steps=6),
        "output": {"format": "csv", "path": str(target)},
    }
    assert _run(capsys, _scenario(tmp_path, obj))[0] == 0
    assert target.read_text(encoding="utf-8") == (GOLDEN / "sweep_example.csv").read_text(encoding="utf-8")


def test_scenario_oscillator(tmp_path, capsys):
    obj = {"kind": "oscillator", "parameters": {"c": 1, "t1": 1.5707963, "candidates": [1, 2, 5]}}
    code, out, _ = _run(capsys, _scenario(tmp_path, obj))
    assert code == 0 and out == (GOLDEN / "oscillator_example.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "obj",
    [
        {"kind": "riemann", "parameters": dict(EX_PARAMS, rho_minnus=4.5)},
        {"kind": "riemann", "parameters": EX_PARAMS, "extra": 1},
        {"kind": "riemann", "parameters": EX_PARAMS, "output": {"fmt": "csv"}},
        {"kind": "riemann", "parameters": {"rho_minus": 4.5}},
        {"kind": "plasma", "parameters": {}},
        {"kind": "oscillator", "parameters": {"t1": 1.0, "analysis": "riemann"}},
        {"kind": "oscillator", "parameters": {"t1": 1.0, "numeric": "yes"}},
        [1, 2],
    ],
)
def test_scenario_rejections(tmp_path, capsys, obj):
    assert _run(capsys, _scenario(tmp_path, obj))[0] == 2


def test_scenario_missing_file(tmp_path, capsys):
    assert _run(capsys, ["scenario", "--file", str(tmp_path / "none.json")])[0] == 2


@pytest.mark.parametrize("cmd", ["laap", "subsolution", "compare"])
def test_no_two_shock_exit_code_all_riemann_commands(capsys, cmd):
    argv = [cmd, "--rho-minus", "1", "--v-minus", "-3", "--rho-plus", "1", "--v-plus", "3"]
    if cmd != "laap":
        argv += ["--rho1", "1.5"]
    assert _run(capsys, argv)[0] == 3
