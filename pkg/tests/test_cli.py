import json

import pytest

from lamperti import cli
from lamperti.errors import ConvergenceError
from lamperti.measure import LampertiCharacteristics


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, obj=None, **one_dim):
    if obj is None:
        obj = cli.chars_to_dict(LampertiCharacteristics.one_dim(**one_dim))
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj))
    return str(path)


def test_classify_default_json(capsys):
    code, out, _ = invoke(capsys, "classify")
    assert code == 0
    report = json.loads(out)
    assert isinstance(report, dict) and report


def test_classify_infinite_variation(capsys, tmp_path):
    cfg = write_config(tmp_path, alpha=1.5, beta=1.0, rho=1.0)
    code, out, _ = invoke(capsys, "--config", cfg, "classify")
    assert code == 0 and json.loads(out)["variation"] == "infinite"


def test_exponent_csv_round_trip(capsys):
    code, out, _ = invoke(capsys, "exponent", "--lambda-grid", "-1:1:5", "--oracle")
    assert code == 0
    header, rows = cli.parse_csv(out)
    assert header == ["lambda", "psi_re", "psi_im", "oracle_re", "oracle_im", "abs_error"]
    assert [r[0] for r in rows] == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert max(r[5] for r in rows) < 1e-6


def test_exponent_laplace(capsys, tmp_path):
    cfg = write_config(tmp_path, alpha=1.5, beta=0.0, rho=1.0, c_plus=0.0, c_minus=1.0)
    code, out, _ = invoke(capsys, "--config", cfg, "exponent", "--laplace", "--lambda-grid", "0,1,2")
    assert code == 0
    header, rows = cli.parse_csv(out)
    assert header == ["lambda", "phi"] and rows[0][1] == 0.0


def test_simulate_is_deterministic(capsys):
    args = ("--seed", "42", "simulate", "--n-paths", "2", "--n-terms", "200", "--n-steps", "10")
    _, first, _ = invoke(capsys, *args)
    _, second, _ = invoke(capsys, *args)
    assert first == second
    header, rows = cli.parse_csv(first)
    assert header == ["path_id", "t", "x"] and len(rows) == 22
    assert "\r" not in first
    assert cli.csv_text(header, rows) == first


def test_simulate_writes_file(capsys, tmp_path):
    target = tmp_path / "paths.csv"
    code, _, _ = invoke(capsys, "--out", str(target), "simulate", "--n-terms", "100", "--n-steps", "4")
    assert code == 0
    assert target.read_text().startswith("path_id,t,x\n")


def test_bad_config_exits_with_two(capsys, tmp_path):
    good = cli.chars_to_dict(LampertiCharacteristics.one_dim(0.5))
    cfg = write_config(tmp_path, dict(good, alpha=2.5))
    code, _, err = invoke(capsys, "--config", cfg, "classify")
    assert code == 2 and "alpha" in err
    bad_dir = dict(good, directions=[{"xi": [1.0], "sigma": "one", "f": 0.0}])
    code, _, err = invoke(capsys, "--config", write_config(tmp_path, bad_dir), "classify")
    assert code == 2 and "directions[0].sigma" in err
    code, _, _ = invoke(capsys, "--config", str(tmp_path / "missing.json"), "classify")
    assert code == 2
    code, _, _ = invoke(capsys, "exponent", "--lambda-grid", "nonsense")
    assert code == 2


def test_convergence_failure_exits_with_three(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ConvergenceError("no convergence")

    monkeypatch.setattr(cli.properties, "classify", boom)
    code, _, err = invoke(capsys, "classify")
    assert code == 3 and "non-convergence" in err


def test_config_round_trip():
    chars = LampertiCharacteristics.one_dim(1.2, beta=0.4, rho=-0.3, c_plus=2.0, c_minus=0.5, theta=0.1)
    assert cli.chars_from_dict(cli.chars_to_dict(chars)) == chars


def test_scale_function_command(capsys, tmp_path):
    cfg = write_config(tmp_path, alpha=0.5, beta=0.5, rho=0.0, c_plus=1.0, c_minus=0.0)
    code, out, _ = invoke(capsys, "--config", cfg, "scale-function", "--variant", "killed", "--x-grid", "0,1")
    assert code == 0
    _, rows = cli.parse_csv(out)
    assert rows[0][1] == 0.0 and rows[1][1] == pytest.approx(3 - 2.718281828459045**-2, rel=1e-12)


def test_figures_needs_directory_and_writes_six_files(capsys, tmp_path):
    code, _, _ = invoke(capsys, "figures")
    assert code == 2
    code, _, _ = invoke(
        capsys, "--out", str(tmp_path), "figures", "--n-terms", "100", "--n-steps", "5"
    )
    assert code == 0
    assert sorted(p.name for p in tmp_path.glob("figure*.csv")) == [f"figure{k}.csv" for k in range(1, 7)]
    assert len(json.loads((tmp_path / "parameters.json").read_text())) == 6


def test_verify_exit_codes(capsys):
    code, out, _ = invoke(capsys, "verify", "--only", "2,3")
    assert code == 0 and out.count("[PASS]") == 2
    code, out, _ = invoke(capsys, "verify", "--only", "5")
    assert code == 1 and "[known:" in out
    code, _, _ = invoke(capsys, "verify", "--only", "99")
    assert code == 2
