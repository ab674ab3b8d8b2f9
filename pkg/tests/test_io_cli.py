"""Config serialization, CSV/SVG/manifest output, and the command line."""
import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from forgetsim import (
    BusyPolicy,
    ConfigError,
    DecayMode,
    FixedTimes,
    ForgettingLaw,
    RoundRobin,
    UniformRandom,
    run,
)
from forgetsim import io
from forgetsim.cli import main
from forgetsim.experiments import PRESET_NAMES, preset, sweep_n
from forgetsim.svgplot import LineChart
from conftest import make_config


class TestConfigRoundTrip:
    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_presets_survive_round_trip(self, name):
        cfg = preset(name)
        again = io.config_from_dict(io.config_to_dict(cfg))
        assert again == cfg

    def test_all_policies_and_modes(self):
        variants = [
            make_config(policy=None),
            make_config(policy=UniformRandom(seed=9)),
            make_config(policy=RoundRobin(start=2)),
            make_config(policy=FixedTimes(pairs=((1.0, 1), (2.0, 3)))),
            make_config(
                forgetting=ForgettingLaw(
                    gamma0=0.01,
                    beta=2.0,
                    mode=DecayMode.CONTINUOUS_RATE,
                    dt_ref=1 / 64,
                ),
                busy=BusyPolicy.SKIP_TIME,
            ),
        ]
        for cfg in variants:
            assert io.config_from_dict(io.config_to_dict(cfg)) == cfg

    def test_file_round_trip(self, tmp_path):
        cfg = preset("pr2", n=7)
        path = str(tmp_path / "cfg.json")
        io.dump_config(cfg, path)
        assert io.load_config(path) == cfg

    def test_unknown_key_rejected(self):
        data = io.config_to_dict(make_config())
        data["surprise"] = 1
        with pytest.raises(ConfigError, match="surprise"):
            io.config_from_dict(data)

    def test_unknown_nested_key_rejected(self):
        data = io.config_to_dict(make_config())
        data["forgetting"]["surprise"] = 1
        with pytest.raises(ConfigError):
            io.config_from_dict(data)

    def test_missing_key_rejected(self):
        data = io.config_to_dict(make_config())
        del data["effort"]
        with pytest.raises(ConfigError, match="effort"):
            io.config_from_dict(data)

    def test_bad_enum_values_rejected(self):
        data = io.config_to_dict(make_config())
        data["busy"] = "coffee_break"
        with pytest.raises(ConfigError):
            io.config_from_dict(data)
        data = io.config_to_dict(make_config())
        data["forgetting"]["mode"] = "sometimes"
        with pytest.raises(ConfigError):
            io.config_from_dict(data)
        data = io.config_to_dict(make_config(policy=UniformRandom()))
        data["policy"]["kind"] = "telepathy"
        with pytest.raises(ConfigError):
            io.config_from_dict(data)

    def test_load_errors_become_config_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            io.load_config(str(tmp_path / "absent.json"))
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigError):
            io.load_config(str(bad))

    def test_defaults_fill_in(self):
        data = io.config_to_dict(make_config())
        del data["sample_every"]
        del data["seed"]
        cfg = io.config_from_dict(data)
        assert cfg.sample_every == 1
        assert cfg.seed == 0


class TestCsv:
    def test_trajectory_csv_shape(self, tmp_path):
        result = run(make_config(policy=RoundRobin()))
        path = str(tmp_path / "traj.csv")
        io.write_trajectory_csv(path, result.trajectory)
        lines = open(path).read().splitlines()
        assert lines[0] == "t,Z_total,mean_tau,mean_gamma,active"
        assert len(lines) == len(result.trajectory) + 1
        first = lines[1].split(",")
        assert float(first[0]) == result.trajectory.t[0]
        # 17 significant digits: values survive a text round trip exactly
        assert float(lines[-1].split(",")[1]) == result.trajectory.z_total[-1]

    def test_active_column_empty_when_idle(self, tmp_path):
        from conftest import decay_only_config

        result = run(decay_only_config(0.01, steps=4))
        path = str(tmp_path / "traj.csv")
        io.write_trajectory_csv(path, result.trajectory)
        for line in open(path).read().splitlines()[1:]:
            assert line.endswith(",")

    def test_per_element_csv(self, tmp_path):
        result = run(make_config(n=3, policy=RoundRobin()), record_per_element=True)
        path = str(tmp_path / "pe.csv")
        io.write_per_element_csv(path, result.trajectory)
        lines = open(path).read().splitlines()
        assert lines[0] == "t,Z_1,Z_2,Z_3"
        assert len(lines) == len(result.trajectory) + 1

    def test_per_element_requires_recording(self, tmp_path):
        result = run(make_config())
        with pytest.raises(ValueError):
            io.write_per_element_csv(str(tmp_path / "pe.csv"), result.trajectory)

    def test_sweep_csv(self, tmp_path):
        rows = sweep_n([5, 6], measure_at=400.0)
        path = str(tmp_path / "sweep.csv")
        io.write_sweep_csv(path, rows)
        lines = open(path).read().splitlines()
        assert lines[0] == "N,Z_final,mean_gamma_final,K"
        assert len(lines) == 3
        n, z, g, k = lines[1].split(",")
        assert int(n) == 5
        assert float(z) == rows[0].z_final


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        path = str(tmp_path / "out.txt")
        io.atomic_write_text(path, "one")
        io.atomic_write_text(path, "two")
        assert open(path).read() == "two"
        # no temp file debris left behind
        assert os.listdir(tmp_path) == ["out.txt"]

    def test_failure_leaves_no_debris(self, tmp_path):
        class Boom(str):
            def __str__(self):
                raise RuntimeError("boom")

        path = str(tmp_path / "out.txt")
        io.atomic_write_text(path, "good")
        with pytest.raises(TypeError):
            io.atomic_write_text(path, 12345)  # not a str: write() fails
        assert open(path).read() == "good"
        assert os.listdir(tmp_path) == ["out.txt"]


class TestSvg:
    def test_renders_well_formed_xml(self):
        chart = LineChart(title="demo", x_label="x", y_label="y")
        chart.add_series([0.0, 1.0, 2.0], [0.0, 1.0, 0.5], label="a")
        chart.add_series([0.0, 1.0, 2.0], [1.0, 0.5, 0.25], label="b")
        chart.add_vspan(0.5, 1.5)
        doc = chart.render()
        root = ET.fromstring(doc)
        assert root.tag.endswith("svg")

    def test_escapes_markup_in_text(self):
        chart = LineChart(title="a < b & c", x_label="x", y_label="y")
        chart.add_series([0.0, 1.0], [0.0, 1.0], label="<script>")
        doc = chart.render()
        assert "<script>" not in doc
        ET.fromstring(doc)  # still parses

    def test_large_series_decimated_keeps_last_point(self):
        xs = list(range(10000))
        ys = [x / 10000 for x in xs]
        chart = LineChart(title="big", x_label="x", y_label="y")
        chart.add_series(xs, ys, label="s")
        doc = chart.render()
        assert len(doc) < 300_000  # decimation caps the payload


class TestManifests:
    def test_run_manifest(self, tmp_path):
        cfg = make_config()
        path = str(tmp_path / "m.json")
        io.write_run_manifest(
            path, io.RunManifest(config=cfg, outputs=("trajectory.csv",))
        )
        data = json.loads(open(path).read())
        assert data["format_version"] == io.FORMAT_VERSION
        assert data["outputs"] == ["trajectory.csv"]
        assert io.config_from_dict(data["config"]) == cfg

    def test_sweep_manifest(self, tmp_path):
        path = str(tmp_path / "m.json")
        io.write_sweep_manifest(
            path, n_values=[3, 4], measure_at=700.0, outputs=["sweep.csv"]
        )
        data = json.loads(open(path).read())
        assert data["sweep"] == {"n_values": [3, 4], "measure_at": 700.0}


class TestCli:
    def test_run_preset_writes_outputs(self, tmp_path, capsys):
        out = str(tmp_path / "r")
        assert main(["run", "--preset", "pr1", "--out", out, "--plot"]) == 0
        assert sorted(os.listdir(out)) == [
            "run_manifest.json",
            "trajectory.csv",
            "trajectory.svg",
        ]
        text = capsys.readouterr().out
        assert "final Z_total" in text

    def test_run_config_file(self, tmp_path):
        cfg_path = str(tmp_path / "c.json")
        io.dump_config(make_config(policy=RoundRobin()), cfg_path)
        out = str(tmp_path / "r")
        assert main(["run", "--config", cfg_path, "--out", out, "--per-element"]) == 0
        assert "per_element.csv" in os.listdir(out)

    def test_run_overrides_recorded_in_manifest(self, tmp_path):
        out = str(tmp_path / "r")
        assert (
            main(
                [
                    "run",
                    "--preset",
                    "pr2",
                    "--n",
                    "4",
                    "--seed",
                    "99",
                    "--out",
                    out,
                ]
            )
            == 0
        )
        manifest = json.loads(open(os.path.join(out, "run_manifest.json")).read())
        assert manifest["config"]["n"] == 4
        assert manifest["config"]["seed"] == 99

    def test_identical_invocations_byte_identical(self, tmp_path):
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        argv = ["run", "--preset", "pr2", "--n", "5", "--out"]
        assert main(argv + [out1]) == 0
        assert main(argv + [out2]) == 0
        a = open(os.path.join(out1, "trajectory.csv"), "rb").read()
        b = open(os.path.join(out2, "trajectory.csv"), "rb").read()
        assert a == b

    def test_sweep_prints_optimum(self, tmp_path, capsys):
        out = str(tmp_path / "s")
        assert main(["sweep", "--n", "5..7", "--out", out, "--plot"]) == 0
        assert sorted(os.listdir(out)) == [
            "sweep.csv",
            "sweep.svg",
            "sweep_manifest.json",
        ]
        assert "optimal N:" in capsys.readouterr().out

    def test_presets_listing(self, capsys):
        assert main(["presets"]) == 0
        text = capsys.readouterr().out
        for name in PRESET_NAMES:
            assert name in text

    def test_presets_json_round_trips(self, capsys):
        assert main(["presets", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        for name in PRESET_NAMES:
            assert io.config_from_dict(data[name]) == preset(name)

    def test_exit_codes(self, tmp_path, capsys):
        # 2: argparse rejects unknown preset names and bad ranges
        with pytest.raises(SystemExit) as exc:
            main(["run", "--preset", "pr9"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--n", "7..3"])
        assert exc.value.code == 2
        # 2: --n only modifies the one preset with a free element count
        assert main(["run", "--preset", "pr1", "--n", "5"]) == 2
        # 3: unreadable or invalid config files
        assert main(["run", "--config", str(tmp_path / "absent.json")]) == 3
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 1}')
        assert main(["run", "--config", str(bad)]) == 3
        # 3: overrides that break validation
        assert main(["run", "--preset", "pr1", "--dt", "-0.5"]) == 3
        # 4: output path collides with an existing file
        collide = tmp_path / "file"
        collide.write_text("")
        assert main(["run", "--preset", "pr1", "--out", str(collide)]) == 4
        capsys.readouterr()  # swallow accumulated output

    def test_mode_override_switches_decay_semantics(self, tmp_path):
        out_p = str(tmp_path / "p")
        out_c = str(tmp_path / "c")
        assert main(["run", "--preset", "pr1", "--out", out_p]) == 0
        assert (
            main(["run", "--preset", "pr1", "--mode", "continuous", "--out", out_c])
            == 0
        )
        mp = json.loads(open(os.path.join(out_p, "run_manifest.json")).read())
        mc = json.loads(open(os.path.join(out_c, "run_manifest.json")).read())
        assert mp["config"]["forgetting"]["mode"] == "perstep"
        assert mc["config"]["forgetting"]["mode"] == "continuous"
        # pr1 sets dt_ref = dt, so the two modes decay identically here and
        # the trajectories agree; the configs must still differ
        assert mp["config"] != mc["config"]

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "forgetsim.cli", "presets"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "pr2" in proc.stdout
