import os
import subprocess
import sys

import numpy as np
import pytest

from pseudolom.cli import RunConfig, UsageError, main

CFG = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg(name):
    return os.path.join(CFG, name)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line and not line.startswith("#"))


# -- config parsing -----------------------------------------------------------


def test_config_parse_and_overrides():
    c = RunConfig.parse("# comment\ngenerator=exp_ratio\ntheta=0.5\n\nmarginal=exponential\nmarginal.alpha=2\nlambda=2\n")
    assert c.get("generator.theta") == "0.5"
    c.set("lambda", "3")
    assert c.number("lambda") == 3.0


def test_config_unknown_key():
    with pytest.raises(UsageError):
        RunConfig.parse("colour=blue\n")
    with pytest.raises(UsageError):
        RunConfig.parse("generator identity\n")


def test_unknown_key_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("generator=identity\nfoo=1\n")
    code, _, err = run(["validate", "--config", str(p)], capsys)
    assert code == 1 and "foo" in err


def test_missing_config_and_bad_set(capsys):
    assert run(["validate", "--config", "/nonexistent.cfg"], capsys)[0] == 1
    assert run(["validate", "--config", cfg("mo_classical.cfg"), "--set", "lambda"], capsys)[0] == 1
    assert run(["frobnicate"], capsys)[0] == 1


# -- validate -----------------------------------------------------------------


def test_validate_example31(capsys):
    code, out, _ = run(["validate", "--config", cfg("example31.cfg")], capsys)
    assert code == 0 and kv(out)["verdict"] == "valid_on_grid"
    code, out, _ = run(["validate", "--config", cfg("example31.cfg"), "--undistorted"], capsys)
    rep = kv(out)
    assert code == 2 and rep["verdict"] == "invalid"
    assert float(rep["density_min"]) < 0 and float(rep["density_argmin_x"]) < 1e-6


def test_validate_rate_violation(capsys):
    code, out, _ = run(["validate", "--config", cfg("mo_classical.cfg"), "--set", "lambda=6"], capsys)
    assert code == 2 and kv(out)["rate_condition"] == "fail"


def test_validate_mo_window(capsys):
    assert run(["validate", "--config", cfg("mo_classical.cfg")], capsys)[0] == 0


# -- sample -------------------------------------------------------------------


def test_sample_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["sample", "--config", cfg("mo_classical.cfg"), "--n", "500", "--seed", "9", "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0].startswith("# seed=9") and lines[1] == "x,y,tag" and len(lines) == 502
    assert {ln.rsplit(",", 1)[1] for ln in lines[2:]} <= {"ABOVE", "BELOW", "DIAGONAL"}


def test_sample_rejects_zero(capsys):
    assert run(["sample", "--config", cfg("mo_classical.cfg"), "--n", "0"], capsys)[0] == 1


def test_sample_invalid_distribution(capsys):
    code, _, err = run(["sample", "--config", cfg("mo_classical.cfg"), "--set", "lambda=6"], capsys)
    assert code == 2 and "invalid" in err


def test_fig1_tau_decreases_in_theta(tmp_path, capsys):
    from scipy import stats

    taus = []
    for theta in ("0.01", "0.5", "0.99"):
        out = tmp_path / f"s{theta}.csv"
        argv = ["sample", "--config", cfg("fig1_theta050.cfg"), "--set", f"generator.theta={theta}",
                "--n", "20000", "--seed", "20261014", "--out", str(out)]
        assert run(argv, capsys)[0] == 0
        data = np.genfromtxt(out, delimiter=",", skip_header=2, usecols=(0, 1))
        taus.append(stats.kendalltau(data[:, 0], data[:, 1]).statistic)
    assert taus[0] > taus[1] > taus[2]


# -- kendall, tau, taildep, atom ----------------------------------------------


def test_kendall_csv(capsys):
    code, out, _ = run(["kendall", "--config", cfg("mo_classical.cfg"), "--t", "0.25,0.5,1"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,K_analytic" and len(lines) == 4
    t, K = map(float, lines[1].split(","))
    assert K == pytest.approx(t * (1 - np.log(t) * (2 - 5 / 4.5)), rel=1e-12)
    code, out, _ = run(["kendall", "--config", cfg("mo_classical.cfg"), "--t", "0.5,1", "--empirical", "2000"], capsys)
    assert out.splitlines()[0] == "t,K_analytic,K_empirical" and out.splitlines()[-1].endswith(",1.0")


def test_kendall_identity_degenerates(capsys):
    code, out, _ = run(["kendall", "--config", cfg("mo_classical.cfg"), "--set", "lambda=5", "--t", "0.36787944117144233"], capsys)
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(2 / np.e, rel=1e-12)


def test_tau_fig6(capsys):
    code, out, _ = run(["tau", "--config", cfg("pareto_expcomp_beta0.5.cfg"), "--n", "20000", "--seed", "1"], capsys)
    r = kv(out)
    assert code == 0 and float(r["tau_analytic"]) == pytest.approx(0.483, abs=0.02)
    assert float(r["tau_empirical"]) == pytest.approx(0.483, abs=0.03)


def test_taildep_fig8(capsys):
    code, out, _ = run(["taildep", "--config", cfg("pareto_expcomp_beta1.cfg")], capsys)
    r = kv(out)
    assert code == 0 and r["upper"] == "0.5" and r["method"] == "transfer_rule"
    assert float(r["upper_numeric"]) == pytest.approx(0.5, abs=0.05)


def test_atom_boundary(capsys):
    code, out, _ = run(["atom", "--config", cfg("mo_classical.cfg"), "--set", "lambda=5", "--t", "0,1"], capsys)
    r = kv(out)
    assert code == 0 and float(r["atom"]) == 0.0 and float(r["atom_tail_1.0"]) == 0.0


def test_atom_mo(capsys):
    code, out, _ = run(["atom", "--config", cfg("mo_classical.cfg"), "--t", "1"], capsys)
    r = kv(out)
    assert float(r["atom"]) == pytest.approx(1 / 9, rel=1e-12)
    assert float(r["atom_tail_1.0"]) == pytest.approx(np.exp(-4.5) / 9, rel=1e-12)


def test_strong_model(capsys):
    argv = ["sample", "--set", "model=strong", "--set", "generator=exp_ratio", "--set", "theta=0.5",
            "--set", "lambda1=1", "--set", "lambda2=2", "--n", "10"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and len(out.splitlines()) == 12
    code, _, _ = run(["kendall"] + argv[1:-2], capsys)
    assert code == 1


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "pseudolom", "atom", "--config", cfg("mo_classical.cfg")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("atom=")
