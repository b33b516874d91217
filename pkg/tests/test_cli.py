"""Command-line interface: library equivalence, determinism, exit codes."""

import numpy as np
import pytest

from neutralfront.cli import main
from neutralfront.gridops import make_config, write_profile
from neutralfront.params import ModelParams
from neutralfront.spectral import find_roots

from conftest import BENCH_OPTS, BENCH_P


@pytest.fixture(scope="module")
def stored_profiles(bench_report, tmp_path_factory):
    d = tmp_path_factory.mktemp("profiles")
    cfg = make_config(BENCH_P, m=BENCH_OPTS.m)
    w_path, u_path = d / "front_w.csv", d / "front_u.csv"
    with open(w_path, "w") as fh:
        write_profile(fh, bench_report.profile_w, BENCH_P, cfg)
    with open(u_path, "w") as fh:
        write_profile(fh, bench_report.profile_u, BENCH_P, cfg)
    return str(w_path), str(u_path)


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _parse(out):
    kv = {}
    for line in out.splitlines():
        key, sep, val = line.partition(" = ")
        if sep:
            kv[key] = val.strip()
    return kv


def test_roots_library_equivalence(capsys):
    code, out = _run(capsys, "roots", "--b", "0.3", "--tau", "1", "--c", "5")
    assert code == 0
    kv = _parse(out)
    roots = find_roots(ModelParams(b=0.3, tau=1.0, c=5.0))
    # 17-significant-digit output round-trips bit-for-bit
    assert float(kv["lambda1"]) == roots.lambda1
    assert float(kv["lambda2"]) == roots.lambda2
    assert kv["has_chi1_roots"] == "False"
    assert kv["mu1"] == ""


def test_roots_critical_flag(capsys):
    code, out = _run(capsys, "roots", "--b", "0", "--tau", "0.3", "--c", "2")
    assert code == 0
    kv = _parse(out)
    assert kv["critical_chi0"] == "True"
    assert float(kv["lambda1"]) == 1.0 and float(kv["lambda2"]) == 1.0


def test_invalid_params_exit_2(capsys):
    assert main(["roots", "--b", "1.2", "--tau", "1", "--c", "2"]) == 2
    assert main(["roots", "--b", "0.9999", "--tau", "1", "--c", "2"]) == 0
    capsys.readouterr()


def test_curves_deterministic_and_b0_constant(capsys, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["curves", "--b", "0", "--tau-min", "0.5", "--tau-max", "2",
            "--samples", "5"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    capsys.readouterr()
    rows = [l for l in out1.read_text().splitlines() if l and not l.startswith("#")]
    header, data = rows[0], rows[1:]
    assert header == "tau,c_star,lambda_double,c_hash,mu_double"
    assert all(row.split(",")[1] == "2" for row in data)
    # tau = 0.5 > 1/e: c_hash exists; the column is populated
    assert data[0].split(",")[3] != ""


def test_solve_out_of_domain_exit_2(capsys):
    code, out = _run(capsys, "solve", "--b", "0.2", "--tau", "0.2", "--c", "2")
    assert code == 2
    kv = _parse(out)
    assert kv["in_domain"] == "False"
    assert float(kv["c_star_at_tau"]) > 2.0


def test_validate_fresh_profile_passes(capsys, stored_profiles):
    w_path, _ = stored_profiles
    code, out = _run(capsys, "validate", w_path)
    assert code == 0
    assert "validation = pass" in out
    assert out.count("_check = pass") == 5


def test_validate_detects_perturbation(capsys, stored_profiles, tmp_path):
    w_path, _ = stored_profiles
    lines = open(w_path).read().splitlines()
    # bump one mid-profile value by 0.1
    i = len(lines) // 2
    t_str, v_str = lines[i].split(",")
    lines[i] = f"{t_str},{float(v_str) + 0.1:.17g}"
    bad = tmp_path / "bad_w.csv"
    bad.write_text("\n".join(lines) + "\n")
    code, out = _run(capsys, "validate", str(bad))
    assert code == 1
    assert "validation = fail" in out
    assert ("monotone_defect_check = fail" in out
            or "residual_pew_sup_check = fail" in out)


def test_validate_b_mismatch_exit_2(capsys, stored_profiles):
    w_path, _ = stored_profiles
    assert main(["validate", w_path, "--b", "0.3"]) == 2
    capsys.readouterr()


def test_evolve_report_and_csv(capsys, stored_profiles, tmp_path):
    _, u_path = stored_profiles
    csv = tmp_path / "fronts.csv"
    code, out = _run(capsys, "evolve", u_path, "--horizon", "1",
                     "--out", str(csv))
    assert code == 0
    kv = _parse(out)
    assert float(kv["speed_rel_error"]) < 0.02
    rows = [l for l in csv.read_text().splitlines()
            if l and not l.startswith("#")][1:]
    pos = np.array([float(r.split(",")[1]) for r in rows])
    assert np.all(np.diff(pos) < 0.0)  # strictly leftward in t


def test_evolve_cfl_violation_exit_2(capsys, stored_profiles):
    _, u_path = stored_profiles
    assert main(["evolve", u_path, "--horizon", "1", "--dt", "0.01"]) == 2
    capsys.readouterr()
