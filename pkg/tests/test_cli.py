"""Tests for the command-line front end, run in-process through main().

Each subcommand writes into <root>/<subcommand>-<hash12>; the hash covers
the resolved configuration and subcommand options but not the output
root, so identical invocations land in identically named directories with
byte-identical CSVs.  Exit codes: 0 gates passed, 1 a gate failed,
2 usage/config error, 3 numeric abort.
"""

import hashlib
import json
import os

import numpy as np
import pytest

import fracstefan.cli as cli
from fracstefan.cli import main
from fracstefan.stepper import NumericsError


def run_dirs(root):
    return sorted(os.listdir(root)) if os.path.isdir(root) else []


def read_manifest(run_dir):
    with open(os.path.join(run_dir, "manifest.json"), encoding="utf-8") as fh:
        return json.load(fh)


def read_rows(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


# ---------------------------------------------------------------------------
# exit codes and argument handling


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["bogus"]) == 2
    assert main(["sweep", "--s", "0.5"]) == 2      # --axis is required
    capsys.readouterr()


def test_config_errors_exit_2(tmp_path, capsys):
    out = str(tmp_path / "runs")
    # no configuration at all: the required key s is missing
    assert main(["simulate", "--out", out]) == 2
    assert main(["simulate", "--s", "2.0", "--out", out]) == 2
    assert main(["simulate", "--s", "0.5", "--set", "dx", "--out", out]) == 2
    assert main(["profile", "--s", "0.5", "--datum", "box", "--out", out]) == 2
    assert main(["profile", "--s", "0.5", "--t-final", "0.0",
                 "--out", out]) == 2
    err = capsys.readouterr().err
    assert "config error" in err
    assert run_dirs(out) == []                     # nothing was written


def test_version_exits_zero(capsys):
    assert main(["--version"]) == 0
    assert "fracstefan" in capsys.readouterr().out


def test_numeric_abort_exits_3_and_records_error(tmp_path, monkeypatch, capsys):
    def explode(*args, **kwargs):
        raise NumericsError("non-finite values at step 7")

    monkeypatch.setattr(cli, "run", explode)
    out = str(tmp_path / "runs")
    code = main(["simulate", "--s", "0.5", "--dx", "0.2", "--radius", "2.0",
                 "--t-final", "0.1", "--out", out])
    assert code == 3
    assert "NumericsError" in capsys.readouterr().err
    (only,) = run_dirs(out)
    with open(os.path.join(out, only, "error.json"), encoding="utf-8") as fh:
        record = json.load(fh)
    assert record["error"] == "NumericsError"
    assert "step 7" in record["message"]


# ---------------------------------------------------------------------------
# simulate


SIM_ARGS = ["simulate", "--s", "0.5", "--dx", "0.1", "--radius", "5.0",
            "--t-final", "0.25", "--snapshots", "[0.1, 0.25]"]


def test_simulate_artifacts_and_manifest(tmp_path, capsys):
    out = str(tmp_path / "runs")
    assert main(SIM_ARGS + ["--out", out]) == 0
    (name,) = run_dirs(out)
    assert name.startswith("simulate-") and len(name.split("-")[1]) == 12
    run_dir = os.path.join(out, name)

    header, rows = read_rows(os.path.join(run_dir, "snapshot_000.csv"))
    assert header == ["x", "h", "u"]
    assert len(rows) == 101
    x = np.array([float(r[0]) for r in rows])
    assert x[0] == -5.0 and x[-1] == 5.0

    manifest = read_manifest(run_dir)
    assert manifest["subcommand"] == "simulate"
    assert manifest["config"]["problem"]["s"] == 0.5
    assert manifest["config"]["grid"]["dx"] == 0.1
    assert manifest["parameters"]["m"] == 101
    assert manifest["parameters"]["steps"] > 0
    assert manifest["parameters"]["snapshot_times"] == [0.1, 0.25]
    assert manifest["passed"] is True
    # recorded artifact hashes match the bytes on disk
    for fname, digest in manifest["artifacts"].items():
        with open(os.path.join(run_dir, fname), "rb") as fh:
            assert hashlib.sha256(fh.read()).hexdigest() == digest
    assert set(manifest["artifacts"]) == {"snapshot_000.csv", "snapshot_001.csv"}
    capsys.readouterr()


def test_simulate_reruns_are_byte_identical(tmp_path, capsys):
    roots = [str(tmp_path / "a"), str(tmp_path / "b")]
    for root in roots:
        assert main(SIM_ARGS + ["--out", root]) == 0
    names = [run_dirs(r) for r in roots]
    # the run-dir name depends on the configuration, not on the root
    assert names[0] == names[1]
    for fname in ("snapshot_000.csv", "snapshot_001.csv"):
        blobs = []
        for root, (name,) in zip(roots, names):
            with open(os.path.join(root, name, fname), "rb") as fh:
                blobs.append(fh.read())
        assert blobs[0] == blobs[1]
    capsys.readouterr()


def test_run_dir_hash_tracks_configuration(tmp_path, capsys):
    out = str(tmp_path / "runs")
    assert main(SIM_ARGS + ["--out", out]) == 0
    assert main(SIM_ARGS[:-1] + ["[0.25]", "--out", out]) == 0
    assert len(run_dirs(out)) == 2                 # different snapshots, new dir
    capsys.readouterr()


def test_simulate_two_phase_box(tmp_path, capsys):
    out = str(tmp_path / "runs")
    code = main(["simulate", "--s", "0.5", "--law", "two", "--datum", "box",
                 "--set", "k1=2.0", "--set", "k2=0.5",
                 "--init", "cell_average", "--dx", "0.1", "--radius", "5.0",
                 "--t-final", "0.1", "--out", out])
    assert code == 0
    (name,) = run_dirs(out)
    manifest = read_manifest(os.path.join(out, name))
    assert manifest["config"]["problem"]["law"] == "two"
    assert manifest["config"]["problem"]["k1"] == 2.0
    assert manifest["config"]["grid"]["init"] == "cell_average"
    capsys.readouterr()


# ---------------------------------------------------------------------------
# output-root resolution and overrides


def test_output_root_precedence(tmp_path, monkeypatch, capsys):
    envroot = tmp_path / "envroot"
    cfgroot = tmp_path / "cfgroot"
    outroot = tmp_path / "outroot"
    monkeypatch.setenv(cli.ENV_OUTPUT_ROOT, str(envroot))

    args = ["simulate", "--s", "0.5", "--dx", "0.2", "--radius", "2.0",
            "--t-final", "0.05"]
    assert main(args) == 0
    assert len(run_dirs(envroot)) == 1             # env var is the fallback

    cfg = tmp_path / "run.cfg"
    cfg.write_text("[problem]\ns = 0.5\n[output]\n"
                   f"root = {json.dumps(str(cfgroot))}\n")
    base = ["simulate", "--config", str(cfg), "--dx", "0.2", "--radius",
            "2.0", "--t-final", "0.05"]
    assert main(base) == 0
    assert len(run_dirs(cfgroot)) == 1             # config root beats the env

    assert main(base + ["--out", str(outroot)]) == 0
    assert len(run_dirs(outroot)) == 1             # --out beats everything
    assert len(run_dirs(cfgroot)) == 1
    capsys.readouterr()


def test_flag_sugar_beats_set_beats_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[problem]\ns = 0.5\n[grid]\ndx = 0.4\n"
                   "domain_radius = 2.0\n[time]\nt_final = 0.05\n")
    out = str(tmp_path / "runs")
    assert main(["simulate", "--config", str(cfg), "--out", out]) == 0
    assert main(["simulate", "--config", str(cfg), "--set", "grid.dx=0.2",
                 "--out", out]) == 0
    assert main(["simulate", "--config", str(cfg), "--set", "grid.dx=0.2",
                 "--dx", "0.1", "--out", out]) == 0
    dxs = sorted(read_manifest(os.path.join(out, d))["config"]["grid"]["dx"]
                 for d in run_dirs(out))
    assert dxs == [0.1, 0.2, 0.4]
    capsys.readouterr()


# ---------------------------------------------------------------------------
# profile


def test_profile_reports_front_and_fits(tmp_path, capsys):
    out = str(tmp_path / "runs")
    code = main(["profile", "--s", "0.5", "--dx", "0.1", "--radius", "10.0",
                 "--t-final", "1.0", "--out", out])
    assert code == 0
    assert "gate profile_checks: PASS" in capsys.readouterr().out
    (name,) = run_dirs(out)
    run_dir = os.path.join(out, name)

    header, rows = read_rows(os.path.join(run_dir, "profile.csv"))
    assert header == ["xi", "H", "U"]
    with open(os.path.join(run_dir, "profile.json"), encoding="utf-8") as fh:
        report = json.load(fh)
    assert report["passed"] is True
    assert report["xi0"] == pytest.approx(0.30, abs=0.05)
    assert report["front"]["threshold"] == pytest.approx(1e-8)
    assert report["tail_fit"]["exponent"] == pytest.approx(-1.0, abs=0.3)
    assert report["checks"]["passed"] is True
    # the coarse dxi leaves too few cells behind the front to fit it
    assert "error" in report["front_fit"] or \
        report["front_fit"]["n_samples"] >= 10


def test_profile_threshold_flag_changes_run_dir(tmp_path, capsys):
    out = str(tmp_path / "runs")
    base = ["profile", "--s", "0.5", "--dx", "0.1", "--radius", "10.0",
            "--t-final", "1.0", "--out", out]
    assert main(base) == 0
    assert main(base + ["--threshold", "1e-6"]) == 0
    assert len(run_dirs(out)) == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# sweep


def test_sweep_p2_axis(tmp_path, capsys):
    out = str(tmp_path / "runs")
    code = main(["sweep", "--axis", "p2", "--values", "[0.5, 1.0, 2.0]",
                 "--s", "0.5", "--dx", "0.1", "--radius", "10.0",
                 "--t-final", "1.0", "--out", out])
    assert code == 0
    (name,) = run_dirs(out)
    assert name.startswith("sweep-")
    header, rows = read_rows(os.path.join(out, name, "sweep_xi0_p2.csv"))
    assert header == ["s", "P2", "xi0", "L", "P1", "dx", "domain_radius",
                      "t_extract", "tail_exponent", "front_exponent"]
    xi0 = [float(r[2]) for r in rows]
    assert xi0 == pytest.approx([0.7, 0.3, 0.1], abs=0.05)
    with open(os.path.join(out, name, "sweep.json"), encoding="utf-8") as fh:
        payload = json.load(fh)
    assert payload["passed"] is True
    assert payload["gates"]["xi0_monotone_in_P2"] is True


def test_sweep_s_axis(tmp_path, capsys):
    out = str(tmp_path / "runs")
    code = main(["sweep", "--axis", "s", "--values", "[0.25, 0.5]",
                 "--s", "0.5", "--dx", "0.1", "--radius", "10.0",
                 "--t-final", "1.0", "--out", out])
    assert code == 0
    (name,) = run_dirs(out)
    header, rows = read_rows(os.path.join(out, name, "sweep_xi0_s.csv"))
    xi0 = [float(r[2]) for r in rows]
    assert xi0 == pytest.approx([0.1, 0.3], abs=0.05)
    capsys.readouterr()


def test_sweep_rejects_bad_values(tmp_path, capsys):
    out = str(tmp_path / "runs")
    base = ["sweep", "--axis", "p2", "--s", "0.5", "--out", out]
    assert main(base + ["--values", "nope"]) == 2
    assert main(base + ["--values", "[]"]) == 2
    assert main(base + ["--values", "[true]"]) == 2
    assert main(base + ["--values", "[1.0, 0.5]"]) == 2   # must ascend
    capsys.readouterr()


# ---------------------------------------------------------------------------
# verify and compare


@pytest.mark.parametrize("backend,s,expected", [("power", 0.5, 2.0),
                                                ("quadrature", 0.25, 1.5)])
def test_verify_passes_and_reports_order(tmp_path, capsys, backend, s, expected):
    out = str(tmp_path / "runs")
    code = main(["verify", "--s", str(s), "--backend", backend, "--out", out])
    assert code == 0
    (name,) = run_dirs(out)
    header, rows = read_rows(os.path.join(out, name, "consistency.csv"))
    assert header == ["dx", "err_inf", "err_l1", "order"]
    assert [float(r[0]) for r in rows] == [0.2, 0.1, 0.05]
    assert float(rows[-1][3]) == pytest.approx(expected, abs=0.5)
    with open(os.path.join(out, name, "verify.json"), encoding="utf-8") as fh:
        payload = json.load(fh)
    assert payload["passed"] is True
    assert payload["weights"]["half_s_anchor_ok"] is True
    assert payload["scheme"]["comparison_ok"] is True
    assert "gate consistency_order: PASS" in capsys.readouterr().out


def test_compare_passes_all_gates(tmp_path, capsys):
    out = str(tmp_path / "runs")
    code = main(["compare", "--s", "0.5", "--dx", "0.1", "--radius", "10.0",
                 "--t-final", "0.5", "--out", out])
    assert code == 0
    stdout = capsys.readouterr().out
    for gate in ("classical_front", "limit_L_bracketing", "small_s_ode",
                 "support_growth"):
        assert f"gate {gate}: PASS" in stdout
    (name,) = run_dirs(out)
    header, rows = read_rows(os.path.join(out, name, "support_trace.csv"))
    assert header == ["t", "radius", "bound"]
    for r in rows:
        assert float(r[1]) <= float(r[2]) + 0.1
    with open(os.path.join(out, name, "compare.json"), encoding="utf-8") as fh:
        payload = json.load(fh)
    assert payload["passed"] is True
    fronts = payload["classical_front"]
    assert abs(fronts["front_fractional"] - fronts["front_classical"]) <= 0.3
    manifest = read_manifest(os.path.join(out, name))
    assert manifest["parameters"]["front_gap"] <= 0.3
