"""Command line front end: files written, exit codes, config precedence."""
import shutil
import subprocess

import numpy as np
import pytest

from avgdiff.cli import main


def _load_csv(path):
    return np.genfromtxt(path, delimiter=",", names=True, skip_header=1)


def _first_line(path):
    with open(path) as fh:
        return fh.readline()


# ---------------------------------------------------------------------------
# run


def test_run_writes_expected_files(tmp_path, capsys):
    out = tmp_path / "r"
    rc = main(["run", "--scheme", "ad", "--K", "33", "--dt", "0.01",
               "--t-end", "0.5", "--snapshot-times", "0,0.25,0.5",
               "--output-dir", str(out)])
    assert rc == 0
    summary = capsys.readouterr().out
    assert "run ok:" in summary and "final_error=" in summary

    snaps = _load_csv(out / "snapshots.csv")
    assert set(snaps.dtype.names) == {"t", "x", "u"}
    assert len(snaps) == 3 * 33
    np.testing.assert_allclose(sorted(set(snaps["t"])), [0.0, 0.25, 0.5])

    energy = _load_csv(out / "energy.csv")
    assert set(energy.dtype.names) == {"t", "H_d", "drift"}
    assert len(energy) == 51
    np.testing.assert_allclose(energy["t"], np.arange(51) * 0.01)
    assert np.max(np.abs(energy["drift"])) < 1e-9

    err = _load_csv(out / "error.csv")
    assert set(err.dtype.names) == {"t", "l2_error"}
    assert len(err) == 3

    # every CSV opens with the same one-line config echo
    for name in ("snapshots.csv", "energy.csv", "error.csv"):
        line = _first_line(out / name)
        assert line.startswith("# avgdiff run")
        assert "scheme=ad" in line and "K=33" in line


def test_run_zero_steps_writes_raw_profile(tmp_path):
    out = tmp_path / "r0"
    rc = main(["run", "--scheme", "cd", "--K", "33", "--t-end", "0",
               "--output-dir", str(out)])
    assert rc == 0
    snaps = _load_csv(out / "snapshots.csv")
    assert len(snaps) == 33
    assert set(np.unique(snaps["u"])) == {-1.0, 1.0}


def test_run_quartic_density_skips_error_file(tmp_path):
    out = tmp_path / "rq"
    rc = main(["run", "--scheme", "cd", "--K", "17", "--t-end", "0.1",
               "--density", "poly:0,0,0.5,0,0.25", "--output-dir", str(out)])
    assert rc == 0
    assert (out / "snapshots.csv").exists()
    assert (out / "energy.csv").exists()
    assert not (out / "error.csv").exists()


def test_run_file_initial_condition(tmp_path):
    ic = tmp_path / "ic.txt"
    grid_x = np.arange(1, 18) * 2 * np.pi / 17
    np.savetxt(ic, np.sin(grid_x))
    out = tmp_path / "rf"
    rc = main(["run", "--scheme", "ps", "--K", "17", "--t-end", "0.1",
               "--init", f"file:{ic}", "--output-dir", str(out)])
    assert rc == 0
    assert not (out / "error.csv").exists()


def test_run_sine_initial_condition_spectral_is_exact(tmp_path, capsys):
    out = tmp_path / "rs"
    rc = main(["run", "--scheme", "ps", "--K", "33", "--t-end", "1",
               "--init", "sine:3", "--output-dir", str(out)])
    assert rc == 0
    err = _load_csv(out / "error.csv")
    # the spectral scheme transports a resolved sine almost exactly
    assert err["l2_error"][-1] < 1e-10


def test_run_gnuplot_script(tmp_path):
    out = tmp_path / "rg"
    rc = main(["run", "--scheme", "ad", "--K", "17", "--t-end", "0.1",
               "--gnuplot", "--output-dir", str(out)])
    assert rc == 0
    text = (out / "run.gp").read_text()
    assert "snapshots.csv" in text and "energy.csv" in text


def test_output_dir_env_fallback(tmp_path, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("AVGDIFF_OUTPUT_DIR", str(target))
    monkeypatch.chdir(tmp_path)
    rc = main(["run", "--scheme", "cd", "--K", "17", "--t-end", "0.1"])
    assert rc == 0
    assert (target / "snapshots.csv").exists()
    # an explicit flag still wins over the environment
    rc = main(["run", "--scheme", "cd", "--K", "17", "--t-end", "0.1",
               "--output-dir", str(tmp_path / "flag")])
    assert rc == 0
    assert (tmp_path / "flag" / "snapshots.csv").exists()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "# comment line\n"
        "scheme = ad\n"
        "K = 33\n"
        "t-end = 0.1\n"
        "fp_tol = 1e-12\n"
    )
    out = tmp_path / "rc"
    rc = main(["run", "--config", str(cfg), "--K", "65",
               "--output-dir", str(out)])
    assert rc == 0
    header = _first_line(out / "snapshots.csv")
    assert "K=65" in header            # flag beats file
    assert "scheme=ad" in header       # file beats default
    assert "fp_tol=1e-12" in header


# ---------------------------------------------------------------------------
# exit codes


def test_missing_scheme_is_config_error(tmp_path, capsys):
    rc = main(["run", "--output-dir", str(tmp_path)])
    assert rc == 1
    assert "configuration error" in capsys.readouterr().err


def test_bad_values_are_config_errors(tmp_path):
    base = ["--output-dir", str(tmp_path)]
    assert main(["run", "--scheme", "xx"] + base) == 1
    assert main(["run", "--scheme", "cd", "--K", "64"] + base) == 1
    assert main(["run", "--scheme", "cd", "--K", "33", "--init", "sine:40"] + base) == 1
    assert main(["run", "--scheme", "cd", "--snapshot-times", "0,0.375"] + base) == 1
    assert main(["run", "--scheme", "cd", "--config", "/nonexistent.cfg"] + base) == 1
    assert main(["run", "--scheme", "cd", "--density", "poly:1"] + base) == 1
    assert main(["phase-speeds", "--K", "65", "--n-max", "99"] + base) == 1


def test_nonconvergence_exit_code(tmp_path, capsys):
    rc = main(["run", "--scheme", "cd", "--K", "9", "--dt", "1000",
               "--t-end", "5000", "--density", "poly:0,0,0.5,0,0.25",
               "--fp-max-iter", "4", "--output-dir", str(tmp_path)])
    assert rc == 2
    assert "step 1" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# phase-speeds


def test_phase_speeds_table(tmp_path):
    out = tmp_path / "ps"
    rc = main(["phase-speeds", "--K", "65", "--output-dir", str(out)])
    assert rc == 0
    table = _load_csv(out / "phase_speeds.csv")
    assert set(table.dtype.names) == {"n", "c_cd", "c_ps", "c_ad", "c_exact"}
    assert len(table) == 32
    np.testing.assert_allclose(table["c_ps"], -1.0 / table["n"])
    assert np.all(table["c_cd"] < 0)


def test_phase_speeds_n_max_and_gnuplot(tmp_path):
    out = tmp_path / "ps2"
    rc = main(["phase-speeds", "--K", "65", "--n-max", "8", "--gnuplot",
               "--output-dir", str(out)])
    assert rc == 0
    assert len(_load_csv(out / "phase_speeds.csv")) == 8
    assert (out / "phase_speeds.gp").exists()


# ---------------------------------------------------------------------------
# verify


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 6
    assert "FAIL" not in out


def test_verify_detects_broken_operator(capsys):
    assert main(["verify", "--corrupt-ad-right"]) == 3
    assert "FAIL" in capsys.readouterr().out


def test_verify_seed_flag(capsys):
    assert main(["verify", "--seed", "3"]) == 0


# ---------------------------------------------------------------------------
# installed entry point


@pytest.mark.skipif(shutil.which("avgdiff") is None,
                    reason="console script not on PATH")
def test_console_script_help():
    proc = subprocess.run(["avgdiff", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "phase-speeds" in proc.stdout
