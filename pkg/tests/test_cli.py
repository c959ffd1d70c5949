"""End-to-end checks of the config-driven command line runner."""

import json
import os

import pytest

from vortexlab.cli import EXPERIMENTS, main, parse_config, validate_config, ConfigError


def write_config(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


GN_CONFIG = """\
[gn-ratio]
seed = 3
n = 32
box_length = 6.283185307179586
count = 3
beta = 2.0
"""


class TestListing:
    def test_list_prints_all_kinds(self, capsys):
        assert main(["--list"]) == 0
        out = capsys.readouterr().out
        assert len(EXPERIMENTS) == 8
        for kind in EXPERIMENTS:
            assert kind in out

    def test_no_command_usage(self, capsys):
        assert main([]) == 2


class TestParsing:
    def test_round_trip_with_defaults(self, tmp_path):
        path = write_config(tmp_path, "gn.ini", GN_CONFIG)
        kind, cfg = parse_config(path)
        assert kind == "gn-ratio"
        assert cfg["seed"] == 3 and cfg["out"] == "."
        assert cfg["n_eval"] is None

    def test_inline_comments(self, tmp_path):
        path = write_config(
            tmp_path, "gn.ini", GN_CONFIG.replace("count = 3", "count = 3  # small")
        )
        _, cfg = parse_config(path)
        assert cfg["count"] == 3

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, "gn.ini", GN_CONFIG + "mystery = 1\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(path)

    def test_unknown_kind_rejected(self, tmp_path):
        path = write_config(tmp_path, "x.ini", "[nonsense]\nseed = 1\n")
        with pytest.raises(ConfigError, match="unknown experiment kind"):
            parse_config(path)

    def test_missing_required_key_named(self, tmp_path):
        path = write_config(
            tmp_path, "gn.ini", GN_CONFIG.replace("seed = 3\n", "")
        )
        with pytest.raises(ConfigError, match="seed"):
            parse_config(path)


class TestValidation:
    def test_validate_subcommand_ok(self, tmp_path, capsys):
        path = write_config(tmp_path, "gn.ini", GN_CONFIG)
        assert main(["validate", path]) == 0
        out = capsys.readouterr().out
        assert out.startswith("ok")
        dumped = json.loads(out[len("ok\n"):])
        assert dumped["experiment"] == "gn-ratio"
        assert dumped["config"]["beta"] == 2.0

    def test_odd_n_named_violation(self, tmp_path, capsys):
        path = write_config(tmp_path, "gn.ini", GN_CONFIG.replace("n = 32", "n = 7"))
        assert main(["validate", path]) == 1
        err = json.loads(capsys.readouterr().err)
        assert "n must be even and >= 8" in err["error"]

    def test_missing_seed_exits_nonzero(self, tmp_path, capsys):
        path = write_config(
            tmp_path, "gn.ini", GN_CONFIG.replace("seed = 3\n", "")
        )
        assert main(["validate", path]) == 1
        err = json.loads(capsys.readouterr().err)
        assert "seed" in err["error"]

    def test_inadmissible_exponents_reported(self, tmp_path, capsys):
        body = """\
[maxwell-strichartz]
seed = 1
n = 16
box_length = 6.283185307179586
count = 1
q = 4.0
r = 4.0
q_tilde = 2.0
s = 0.5
k = 0.25
"""
        path = write_config(tmp_path, "mw.ini", body)
        assert main(["run", path]) == 1
        err = json.loads(capsys.readouterr().err)
        assert "inadmissible" in err["error"]
        assert "q_tilde" in err["error"]

    def test_wide_vortex_named(self):
        cfg = {
            "seed": 0, "n": 32, "box_length": 2.0, "out": ".",
            "alpha0": 1.0, "t_min": 0.001, "t_max": 0.5, "t_count": 3,
        }
        with pytest.raises(ConfigError, match="box_length/16"):
            validate_config("oseen-scaling", cfg)


def run_gn(tmp_path, sub):
    out_dir = tmp_path / sub
    path = write_config(tmp_path, f"gn-{sub}.ini", GN_CONFIG)
    assert main(["--out", str(out_dir), "run", path]) == 0
    return out_dir


def read_outputs(out_dir):
    data = {}
    for name in sorted(os.listdir(out_dir)):
        with open(out_dir / name, "rb") as fh:
            data[name] = fh.read()
    return data


class TestRun:
    def test_outputs_written(self, tmp_path):
        out_dir = run_gn(tmp_path, "a")
        names = set(os.listdir(out_dir))
        assert names == {"gn-ratio-3.csv", "gn-ratio-3.json", "manifest.json"}
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["experiment"] == "gn-ratio"
        assert manifest["config"]["seed"] == 3

    def test_rerun_byte_identical(self, tmp_path):
        a = read_outputs(run_gn(tmp_path, "a"))
        b = read_outputs(run_gn(tmp_path, "b"))
        # manifest carries wall clock time; the data files must match exactly
        for name in ("gn-ratio-3.csv", "gn-ratio-3.json"):
            assert a[name] == b[name]

    def test_thread_count_invariance(self, tmp_path):
        body = GN_CONFIG + "n_eval = 32 64\n"
        path = write_config(tmp_path, "gn-sweep.ini", body)
        outputs = []
        for threads, sub in ((1, "t1"), (4, "t4")):
            out_dir = tmp_path / sub
            assert main(
                ["--threads", str(threads), "--out", str(out_dir), "run", path]
            ) == 0
            outputs.append(read_outputs(out_dir))
        for name in ("gn-ratio-3.csv", "gn-ratio-3.json"):
            assert outputs[0][name] == outputs[1][name]

    def test_wave_fixture_run(self, tmp_path):
        body = """\
[wave-fixture]
seed = 5
n = 16
box_length = 6.283185307179586
nt = 64
"""
        path = write_config(tmp_path, "wf.ini", body)
        out_dir = tmp_path / "wf"
        assert main(["--out", str(out_dir), "run", path]) == 0
        summary = json.loads((out_dir / "wave-fixture-5.json").read_text())
        assert summary["max_error"] < 1e-6
