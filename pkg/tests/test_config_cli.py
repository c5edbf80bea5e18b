"""Config parsing, unit conversion, CLI exit codes and CSV format."""
import csv
import hashlib
import io
import json
import math
import subprocess
import sys

import pytest

from sqzlab import ConfigError, GridSpec, load_config
from sqzlab.config import default_config_path


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "sqzlab", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def write_variant(tmp_path, mutate, name="variant.json"):
    doc = json.loads(default_config_path().read_text())
    mutate(doc)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


class TestGridSpec:
    def test_values_inclusive_and_clean(self):
        grid = GridSpec(0.0, 0.6, 0.01)
        values = grid.values()
        assert len(values) == 61
        assert values[0] == 0.0
        assert values[-1] == 0.6
        assert values[7] == 0.07  # no float dust

    def test_fine_grid(self):
        values = GridSpec(0.0, 0.99, 0.001).values()
        assert len(values) == 991
        assert values[-1] == 0.99

    def test_single_point(self):
        assert GridSpec(0.3, 0.3, 0.1).values() == [0.3]

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            GridSpec(1.0, 0.0, 0.1)


class TestDefaultsConfig:
    def test_unit_conversions(self, cfg):
        assert cfg.crystal.d_eff == pytest.approx(15e-12)
        assert cfg.crystal.length == pytest.approx(9.5e-3)
        assert cfg.crystal.lambda_fund == pytest.approx(860e-9)
        assert cfg.crystal.poling_period == pytest.approx(3.4e-6)
        assert cfg.focusing.waist == pytest.approx(21e-6)
        assert cfg.focusing.sigma_mode is None  # "optimize"
        assert cfg.opo.round_trip == pytest.approx(0.5)
        assert cfg.opo.measured_threshold == pytest.approx(0.377)
        assert cfg.detection.analysis_omega == pytest.approx(2 * math.pi * 2e6)
        assert cfg.detection.phase_noise_deg == pytest.approx(1.5)

    def test_loss_and_doubler_sections(self, cfg):
        assert cfg.opo.loss.L0 == pytest.approx(0.01236)
        assert cfg.opo.loss.a == pytest.approx(0.0246)
        assert cfg.opo.enl.value == pytest.approx(0.043)
        assert cfg.doubler.T_in == pytest.approx(0.10)
        assert cfg.doubler.L_rt == pytest.approx(0.045)
        assert cfg.doubler.gamma_sp == pytest.approx(0.036)

    def test_alt_coupler_variant(self, cfg):
        assert cfg.opo_alt is not None
        assert cfg.opo_alt.T == pytest.approx(0.113)
        assert cfg.opo_alt.measured_threshold == pytest.approx(0.110)
        assert cfg.opo_alt.loss is cfg.opo.loss

    def test_sweep_defaults(self, cfg):
        assert cfg.sweeps.fig2_p_in.values()[-1] == 0.6
        assert cfg.sweeps.fig3_T.values()[0] == 0.05
        assert cfg.sweeps.fig4b_pump.values()[-1] == 0.35
        assert cfg.sweeps.coupler_x == 1.0
        assert cfg.sweeps.doubler_p_in == pytest.approx(0.57)

    def test_sha256_matches_file_bytes(self, cfg):
        raw = default_config_path().read_bytes()
        assert cfg.sha256 == hashlib.sha256(raw).hexdigest()


class TestConfigErrors:
    def test_unknown_key_names_field_path(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["focusing"].update(sigma_mod=1.0))
        with pytest.raises(ConfigError, match=r"config\.focusing.*sigma_mod"):
            load_config(path)

    def test_unknown_top_level_section(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d.update(extra={}))
        with pytest.raises(ConfigError, match="extra"):
            load_config(path)

    def test_missing_required_key(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["crystal"].pop("d_eff_pm_per_V"))
        with pytest.raises(ConfigError, match="d_eff_pm_per_V"):
            load_config(path)

    def test_wrong_type(self, tmp_path):
        path = write_variant(
            tmp_path, lambda d: d["opo"].update(T="twenty-one percent")
        )
        with pytest.raises(ConfigError, match=r"config\.opo"):
            load_config(path)

    def test_bool_is_not_a_number(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["opo"].update(T=True))
        with pytest.raises(ConfigError):
            load_config(path)

    def test_out_of_range_value(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["opo"].update(T=-0.2))
        with pytest.raises(ConfigError, match=r"config\.opo"):
            load_config(path)

    def test_alt_threshold_without_alt_t(self, tmp_path):
        def mutate(d):
            d["opo"].pop("alt_T")
            # keep alt_measured_threshold_mW behind

        path = write_variant(tmp_path, mutate)
        with pytest.raises(ConfigError, match="alt_T"):
            load_config(path)

    def test_not_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="JSON"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.json")

    def test_sigma_mode_number(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["focusing"].update(sigma_mode=0.8))
        assert load_config(path).focusing.sigma_mode == pytest.approx(0.8)

    def test_sigma_mode_bad_string(self, tmp_path):
        path = write_variant(
            tmp_path, lambda d: d["focusing"].update(sigma_mode="auto")
        )
        with pytest.raises(ConfigError, match="sigma_mode"):
            load_config(path)


class TestCliExitCodes:
    def test_success(self, tmp_path):
        proc = run_cli("enl")
        assert proc.returncode == 0
        assert "enl_per_W" in proc.stdout

    def test_usage_error(self):
        proc = run_cli("reproduce", "fig9")
        assert proc.returncode == 2

    def test_missing_config_file(self, tmp_path):
        proc = run_cli("enl", "--config", str(tmp_path / "absent.json"))
        assert proc.returncode == 2
        assert "absent.json" in proc.stderr

    def test_config_error(self, tmp_path):
        path = write_variant(tmp_path, lambda d: d["opo"].update(T=-0.2))
        proc = run_cli("enl", "--config", str(path))
        assert proc.returncode == 2

    def test_solver_error(self, tmp_path):
        # doubler with no steady state: model failure, not usage failure
        def mutate(d):
            d["doubler"].update(T_in=0.5, L_rt=0.0, gamma_sp_per_W=1.0)
            d["sweeps"]["fig2_p_in_W"] = {"start": 0.0, "stop": 3.0, "step": 0.5}

        path = write_variant(tmp_path, mutate)
        proc = run_cli("reproduce", "fig2", "--config", str(path),
                       "--out", str(path.parent))
        assert proc.returncode == 3
        assert proc.stderr.strip() != ""
        # the failing row is identified in the diagnostic
        assert "p_in" in proc.stderr

    def test_above_threshold_is_model_error(self, tmp_path):
        def mutate(d):
            d["sweeps"]["fig4b_pump_W"] = {"start": 0.0, "stop": 0.4, "step": 0.01}

        path = write_variant(tmp_path, mutate)
        proc = run_cli("reproduce", "fig4b", "--config", str(path),
                       "--out", str(path.parent))
        assert proc.returncode == 3


@pytest.fixture(scope="module")
def fig2_path(tmp_path_factory):
    out = tmp_path_factory.mktemp("csv")
    proc = run_cli("reproduce", "fig2", "--out", str(out))
    assert proc.returncode == 0
    return out / "fig2.csv"


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    out = tmp_path_factory.mktemp("artifacts")
    for fig in ("fig2", "fig3a", "fig3b", "fig4b"):
        proc = run_cli("reproduce", fig, "--out", str(out))
        assert proc.returncode == 0, proc.stderr
    return out


class TestCsvFormat:
    def test_layout(self, fig2_path):
        lines = fig2_path.read_text().splitlines()
        assert lines[0].startswith("# command:")
        assert lines[1].startswith("# config_sha256:")
        assert lines[2] == "p_in_W,p_sh_W,efficiency"
        assert len(lines) == 3 + 61

    def test_no_comments_after_header(self, fig2_path):
        lines = fig2_path.read_text().splitlines()
        assert not any(line.startswith("#") for line in lines[2:])

    def test_unix_newlines_no_trailing_spaces(self, fig2_path):
        raw = fig2_path.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_floats_round_trip_exactly(self, fig2_path):
        from sqzlab import shg_output, DoublerConfig

        cfg = load_config()
        body = [
            line
            for line in fig2_path.read_text().splitlines()
            if not line.startswith("#")
        ]
        rows = list(csv.DictReader(io.StringIO("\n".join(body))))
        assert float(rows[0]["p_in_W"]) == 0.0
        row = next(r for r in rows if float(r["p_in_W"]) == 0.57)
        op = shg_output(0.57, cfg.doubler)
        # repr() serialization: parsing the text recovers the exact float
        assert float(row["p_sh_W"]) == op.p_sh
        assert float(row["efficiency"]) == op.efficiency

    def test_provenance_sha_matches_config(self, fig2_path):
        cfg = load_config()
        sha_line = fig2_path.read_text().splitlines()[1]
        assert sha_line.split(":", 1)[1].strip() == cfg.sha256

    def test_byte_determinism(self, fig2_path, tmp_path):
        proc = run_cli("reproduce", "fig2", "--out", str(tmp_path))
        assert proc.returncode == 0
        assert (tmp_path / "fig2.csv").read_bytes() == fig2_path.read_bytes()


class TestCsvSchemas:
    def read_rows(self, path):
        body = [
            line for line in path.read_text().splitlines() if not line.startswith("#")
        ]
        return list(csv.DictReader(io.StringIO("\n".join(body))))

    def test_fig3a_schema(self, artifacts):
        rows = self.read_rows(artifacts / "fig3a.csv")
        assert list(rows[0]) == ["T", "p_th_W"]
        assert len(rows) == 71
        assert float(rows[0]["T"]) == 0.05
        assert float(rows[-1]["T"]) == 0.4

    def test_fig3a_threshold_anchors(self, artifacts):
        rows = {float(r["T"]): float(r["p_th_W"]) for r in self.read_rows(artifacts / "fig3a.csv")}
        assert rows[0.21] == pytest.approx(0.307346134563, rel=1e-9)

    def test_fig3b_schema(self, artifacts):
        rows = self.read_rows(artifacts / "fig3b.csv")
        assert list(rows[0]) == ["T", "rho_x0", "rho_x07", "rho_x1"]
        row = next(r for r in rows if float(r["T"]) == 0.21)
        assert float(row["rho_x0"]) == pytest.approx(0.944414463033, rel=1e-9)
        assert float(row["rho_x07"]) == pytest.approx(0.928937393891, rel=1e-9)
        assert float(row["rho_x1"]) == pytest.approx(0.913358329118, rel=1e-9)

    def test_fig4b_schema(self, artifacts):
        rows = self.read_rows(artifacts / "fig4b.csv")
        assert list(rows[0]) == ["pump_W", "squeeze_dB", "antisqueeze_dB"]
        assert len(rows) == 36
        first = rows[0]
        assert float(first["pump_W"]) == 0.0
        assert float(first["squeeze_dB"]) == 0.0
        assert float(first["antisqueeze_dB"]) == 0.0
        at_200 = next(r for r in rows if float(r["pump_W"]) == 0.2)
        assert float(at_200["squeeze_dB"]) == pytest.approx(-8.106082779, abs=1e-6)
        assert float(at_200["antisqueeze_dB"]) == pytest.approx(14.006132762, abs=1e-6)


class TestOptimizeAndPredictCommands:
    def test_optimize_coupler_stdout(self):
        proc = run_cli("optimize", "coupler")
        assert proc.returncode == 0
        assert "T_opt" in proc.stdout
        assert "0.2692" in proc.stdout
        # sensitivity rows at +-10%
        assert proc.stdout.count("sensitivity") >= 1

    def test_optimize_doubler_coupler_stdout(self):
        proc = run_cli("optimize", "doubler-coupler")
        assert proc.returncode == 0
        assert "0.1642" in proc.stdout

    def test_optimize_sigma_stdout(self):
        proc = run_cli("optimize", "sigma")
        assert proc.returncode == 0
        assert "sigma_opt" in proc.stdout

    def test_predict_default(self):
        proc = run_cli("predict")
        assert proc.returncode == 0
        assert "-8.118" in proc.stdout

    def test_predict_improved(self):
        proc = run_cli("predict", "--l0", "0.001", "--a", "0", "--theta-deg", "0.3")
        assert proc.returncode == 0
        assert "-13.1" in proc.stdout

    def test_predict_grid_edge_note(self):
        # ideal loss but a real detector: bounded optimum rides the grid edge
        proc = run_cli("predict", "--l0", "0", "--a", "0", "--theta-deg", "0")
        assert proc.returncode == 0
        assert "grid edge" in proc.stdout

    def test_predict_lossless_warns_unbounded(self, tmp_path):
        # a fully ideal chain has no finite optimum at all
        def mutate(d):
            d["detection"].update(
                eta_homodyne=1.0, eta_propagation=1.0, analysis_freq_MHz=0.0
            )

        path = write_variant(tmp_path, mutate)
        proc = run_cli(
            "predict", "--config", str(path),
            "--l0", "0", "--a", "0", "--theta-deg", "0",
        )
        assert proc.returncode == 0
        combined = proc.stdout + proc.stderr
        assert "unbounded" in combined

    def test_predict_bad_override_is_usage_error(self):
        proc = run_cli("predict", "--l0", "-0.5")
        assert proc.returncode == 2
