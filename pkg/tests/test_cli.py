"""Exit codes and artifacts of the mmauv command line interface.

Everything goes through main(argv) directly so the exit-code contract
(0 ok, 2 config/usage, 3 numeric, 4 output) is pinned without spawning
subprocesses.
"""

import json

import numpy as np
import pytest

from mmauv import __version__
from mmauv.cli import main
from mmauv.config import packaged_config_text
from mmauv.output import read_trajectory

# key names that make up the optional damping block in the packaged config
DAMPING_KEYS = ("damping", "linear", "quadratic", "Y_v", "Z_w", "M_w", "N_v",
                "X_uu", "Y_vv", "Z_ww", "K_pp", "M_qq", "N_rr")


def write_config(tmp_path, replacements=(), drop=(), name="run.yaml"):
    lines = packaged_config_text().splitlines()
    kept = []
    for line in lines:
        if line.strip().split(":")[0] in drop:
            continue
        for old, new in replacements:
            line = line.replace(old, new)
        kept.append(line)
    path = tmp_path / name
    path.write_text("\n".join(kept) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def short_config(tmp_path):
    return write_config(tmp_path, [("duration: 500.0", "duration: 2.0")])


class TestArgumentHandling:
    def test_version_exits_clean(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_subcommand(self, capsys):
        assert main([]) == 2

    def test_unknown_flag(self, capsys):
        assert main(["run", "--config", "x.yaml", "--bogus"]) == 2

    def test_run_requires_config(self, capsys):
        assert main(["run"]) == 2


class TestRun:
    def test_writes_csv_and_metadata(self, short_config, tmp_path, capsys):
        out = tmp_path / "a.csv"
        assert main(["run", "--config", short_config,
                     "--out", str(out)]) == 0
        assert "wrote 201 rows to" in capsys.readouterr().out

        traj = read_trajectory(out)
        assert traj.data.shape == (201, 20)

        meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
        assert meta["rows"] == 201
        assert meta["aborted"] is False
        assert meta["cli_overrides"] == {}
        assert meta["formulation"] == "newton-euler"
        assert meta["code_version"] == __version__
        assert meta["dt"] == 0.01

    def test_overrides_are_applied_and_recorded(self, short_config,
                                                tmp_path, capsys):
        out = tmp_path / "b.csv"
        rc = main(["run", "--config", short_config, "--out", str(out),
                   "--dt", "0.02", "--duration", "1.0",
                   "--formulation", "woolsey", "--decimate", "5"])
        assert rc == 0

        traj = read_trajectory(out)
        # 51 samples decimated by 5 keeps indices 0, 5, ..., 50
        assert traj.data.shape == (11, 20)
        assert traj.column("t")[1] == pytest.approx(0.1)

        meta = json.loads((tmp_path / "b.csv.meta.json").read_text())
        assert meta["cli_overrides"] == {"dt": 0.02, "duration": 1.0,
                                         "formulation": "woolsey",
                                         "decimation": 5}
        assert meta["formulation"] == "woolsey"
        assert meta["rows"] == 11

    def test_bad_config_exits_two(self, tmp_path, capsys):
        path = write_config(tmp_path, [("rho: 1026.0", "rho: heavy")])
        out = tmp_path / "never.csv"
        assert main(["run", "--config", path, "--out", str(out)]) == 2
        err = capsys.readouterr().err
        assert "error: ParseError" in err
        assert not out.exists()

    def test_missing_config_exits_two(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.yaml")
        assert main(["run", "--config", missing]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_unwritable_output_exits_four(self, short_config, capsys):
        rc = main(["run", "--config", short_config,
                   "--out", "/nonexistent/dir/a.csv"])
        assert rc == 4
        assert "error: OutputError" in capsys.readouterr().err

    def test_undamped_run_aborts_with_partial_data(self, tmp_path, capsys):
        # no hydrodynamic damping: the Munk moment tips the vehicle past
        # the pitch guard a few seconds in
        path = write_config(tmp_path, [("duration: 500.0", "duration: 10.0")],
                            drop=DAMPING_KEYS)
        out = tmp_path / "crash.csv"
        assert main(["run", "--config", path, "--out", str(out)]) == 3
        assert "run aborted" in capsys.readouterr().err

        traj = read_trajectory(out)
        t = traj.column("t")
        assert 0 < traj.data.shape[0] < 1001
        assert np.all(np.diff(t) > 0)
        assert np.all(np.isfinite(traj.data))

        meta = json.loads((tmp_path / "crash.csv.meta.json").read_text())
        assert meta["aborted"] is True
        assert "SingularAttitude" in meta["diagnostic"]

    def test_repeated_runs_are_byte_identical(self, short_config, tmp_path):
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        assert main(["run", "--config", short_config,
                     "--out", str(first)]) == 0
        assert main(["run", "--config", short_config,
                     "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()


class TestCompare:
    def test_compare_writes_all_artifacts(self, short_config, tmp_path,
                                          capsys):
        out = tmp_path / "cmp.csv"
        assert main(["compare", "--config", short_config,
                     "--out", str(out)]) == 0

        stdout = capsys.readouterr().out
        assert "max state difference:" in stdout
        assert "max |dq| over first 12 s:" in stdout

        ne = tmp_path / "cmp_ne.csv"
        woolsey = tmp_path / "cmp_woolsey.csv"
        assert ne.exists() and woolsey.exists()
        assert (tmp_path / "cmp_ne.csv.meta.json").exists()
        assert (tmp_path / "cmp_woolsey.csv.meta.json").exists()

        payload = json.loads((tmp_path / "cmp_diff.json").read_text())
        assert payload["n_samples"] == 201
        # compare contrasts the plain and collocated models, which are
        # genuinely different vehicles; the difference must be visible
        assert 1e-6 < payload["max_state_diff"] < 10.0
        assert np.isfinite(payload["max_dq_first_12s"])
        assert set(payload["channels"]) >= {"z", "theta", "u", "q", "x_p"}


class TestCheck:
    def test_default_suite_passes(self, capsys):
        assert main(["check"]) == 0
        stdout = capsys.readouterr().out
        assert stdout.count("PASS ") == 6
        assert "FAIL" not in stdout

    def test_csv_invariants_pass_on_a_real_run(self, short_config, tmp_path,
                                               capsys):
        out = tmp_path / "ok.csv"
        assert main(["run", "--config", short_config,
                     "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["check", "--config", short_config,
                     "--csv", str(out)]) == 0
        assert "PASS csv-invariants" in capsys.readouterr().out

    def test_tampered_csv_fails_the_invariants(self, short_config, tmp_path,
                                               capsys):
        out = tmp_path / "bad.csv"
        assert main(["run", "--config", short_config,
                     "--out", str(out)]) == 0
        capsys.readouterr()

        # push one x_p sample far outside the stroke
        lines = out.read_text().splitlines()
        fields = lines[5].split(",")
        fields[13] = "0.2"
        lines[5] = ",".join(fields)
        out.write_text("\n".join(lines) + "\n")

        assert main(["check", "--config", short_config,
                     "--csv", str(out)]) == 3
        stdout = capsys.readouterr().out
        assert "FAIL csv-invariants: x_p escaped the stroke limits" in stdout
