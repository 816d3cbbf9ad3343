import json

import numpy as np
import pytest

from radreact.cli import main
from radreact.errors import ConfigError
from radreact.runner import (DEFAULTS, Report, emit_report, load_config, run_scenario,
                             scenario_from_dict)


def _write(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return path


STEP = {"family": "smooth_step", "V0": 0.01, "L": 1.0, "z0": 0.0}
BUMP = {"family": "gaussian_bump", "V0": 0.001, "w": 1.0, "z0": -9.0}


class TestLoadConfig:
    def test_minimal_config_gets_defaults(self, tmp_path):
        s = load_config(_write(tmp_path, {"potential": STEP, "p": 1.0}))
        echo = s.echo()
        assert echo["tasks"] == list(DEFAULTS["tasks"])
        assert echo["grids"] == DEFAULTS["grids"]
        assert echo["params"]["alpha"] == DEFAULTS["params"]["alpha"]
        assert s.potential.V0 == 0.01

    def test_partial_section_merges(self, tmp_path):
        s = load_config(_write(tmp_path, {"potential": STEP, "grids": {"n_linear": 100}}))
        assert s.grids["n_linear"] == 100 and s.grids["n_log"] == DEFAULTS["grids"]["n_log"]

    def test_turning_point_names_kinetic_dominance(self, tmp_path):
        path = _write(tmp_path, {"potential": {"family": "gaussian_bump", "V0": 0.6}, "p": 1.0})
        with pytest.raises(ConfigError, match="kinetic dominance"):
            load_config(path)

    def test_pathologies_only_needs_no_potential(self, tmp_path):
        s = load_config(_write(tmp_path, {"tasks": ["pathologies"]}))
        assert s.tasks == ["pathologies"] and s.potential is None
        report = run_scenario(s)
        assert set(report.results) == {"pathologies"} and report.all_passed

    def test_potential_required_by_potential_tasks(self, tmp_path):
        with pytest.raises(ConfigError, match="potential is required"):
            load_config(_write(tmp_path, {"tasks": ["shifts"]}))

    def test_parse_error_has_position(self, tmp_path):
        with pytest.raises(ConfigError, match="line 2, column"):
            load_config(_write(tmp_path, '{"p": 1.0,\n  "potential": }'))

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="grids.n_linaer"):
            load_config(_write(tmp_path, {"potential": STEP, "grids": {"n_linaer": 3}}))

    @pytest.mark.parametrize("bad", [{"tolerances": {"support": 0.0}}, {"tasks": []},
                                     {"tasks": ["dance"]}, {"p": -1.0},
                                     {"params": {"m": -1.0}}])
    def test_invalid_values(self, tmp_path, bad):
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, {"potential": STEP, **bad}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_tabulated_path_relative_to_config(self, tmp_path):
        z = np.linspace(-10, 10, 201)
        np.savetxt(tmp_path / "v.dat", np.column_stack([z, 0.005 * np.exp(-z**2 / 2)]))
        s = load_config(_write(tmp_path, {"potential": {"family": "tabulated", "path": "v.dat"},
                                          "tasks": ["shifts"]}))
        assert s.echo()["potential"]["path"] == str((tmp_path / "v.dat").resolve())
        assert run_scenario(s).checks["final_velocity"]["passed"]


@pytest.fixture(scope="module")
def step_report():
    s = scenario_from_dict({"scenario_id": "step", "potential": STEP,
                            "tasks": ["shifts", "spectral"]})
    return run_scenario(s)


class TestRunScenario:
    def test_free_particle_is_identically_zero(self):
        s = scenario_from_dict({"scenario_id": "free", "potential": {"family": "free"},
                                "tasks": ["shifts", "spectral"]})
        r = run_scenario(s)
        assert r.all_passed
        assert r.results["shifts"]["ode_diff"] == 0.0
        assert r.results["spectral"]["emission_probability"] == 0.0
        assert r.results["spectral"]["photon_energy"]["time_domain"] == 0.0

    def test_step_pipeline(self, step_report):
        shifts = step_report.results["shifts"]
        for key in ("ode_diff", "log_formula", "lowest_order"):
            assert key in shifts
        assert step_report.results["spectral"]["ir_divergent"] is True
        for name in ("parseval", "energy_gap", "final_velocity", "difference_formula",
                     "infrared_law"):
            assert step_report.checks[name]["passed"], name

    def test_module_error_is_recorded_and_others_continue(self):
        s = scenario_from_dict({"potential": STEP, "tasks": ["pathologies", "shifts"],
                                "pathologies": {"span_tau0": 50.0}})
        r = run_scenario(s)
        assert "SpanError" in r.results["pathologies"]["error"]
        assert "ode_diff" in r.results["shifts"]
        assert not r.all_passed

    def test_bump_quantum_sweep_table(self):
        s = scenario_from_dict({"scenario_id": "bump", "potential": BUMP,
                                "packet": {"n": 21}, "tasks": ["convergence_sweeps"],
                                "sweeps": {"hbar_steps": 2}})
        r = run_scenario(s)
        table = r.results["convergence_sweeps"]["sigma_sweep"]
        assert table["sigma_p"] == [0.1, 0.05, 0.025]
        assert table["monotone"] and r.checks["packet_convergence"]["passed"]


class TestEmitReport:
    def test_no_series_gives_json_only(self, tmp_path):
        written = emit_report(Report(scenario={"scenario_id": "empty"}), tmp_path)
        assert [p.name for p in written] == ["report.json"]

    def test_shift_csv_format(self, tmp_path, step_report):
        emit_report(step_report, tmp_path)
        lines = (tmp_path / "step" / "shift_ld.csv").read_text().splitlines()
        assert lines[0] == "# shift_ld, step, t, delta_z, delta_v"
        assert (tmp_path / "step" / "shift_larmor.csv").exists()
        row = lines[-1].split(",")
        assert len(row) == 3
        t_last = float(row[0])
        assert t_last == step_report.series["shift_ld"][1][-1, 0]

    def test_json_round_trip(self, tmp_path, step_report):
        emit_report(step_report, tmp_path, formats=("json",))
        data = json.loads((tmp_path / "step" / "report.json").read_text())
        assert data["scenario"]["scenario_id"] == "step"
        assert data["results"]["shifts"]["ode_diff"] == step_report.results["shifts"]["ode_diff"]
        assert "wall_time_s" not in data["provenance"]
        assert data["provenance"]["grid_sizes"]["k_grid"] > 0

    def test_infinity_serialised_as_text(self, tmp_path):
        r = Report(scenario={"scenario_id": "inf"}, results={"x": {"v": float("inf")}})
        emit_report(r, tmp_path)
        assert json.loads((tmp_path / "inf" / "report.json").read_text())["results"]["x"]["v"] \
            == "inf"

    def test_unwritable_directory(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OSError, match="cannot write report"):
            emit_report(Report(scenario={"scenario_id": "x"}), blocker)

    def test_repeat_runs_are_byte_identical(self, tmp_path):
        data = {"scenario_id": "repeat", "potential": STEP, "tasks": ["shifts", "spectral"]}
        for out in ("a", "b"):
            emit_report(run_scenario(scenario_from_dict(data)), tmp_path / out)
        files = sorted(p.name for p in (tmp_path / "a" / "repeat").iterdir())
        assert files
        for name in files:
            assert (tmp_path / "a" / "repeat" / name).read_bytes() == \
                (tmp_path / "b" / "repeat" / name).read_bytes()


class TestCLI:
    def test_check(self, tmp_path, capsys):
        assert main(["check", "--config", str(_write(tmp_path, {"potential": STEP}))]) == 0
        assert '"scenario_id"' in capsys.readouterr().out

    def test_validation_exit_code(self, tmp_path):
        path = _write(tmp_path, {"potential": STEP, "bogus": 1})
        assert main(["check", "--config", str(path)]) == 2

    def test_run_with_task_override(self, tmp_path):
        path = _write(tmp_path, {"scenario_id": "cli", "potential": STEP})
        code = main(["run", "--config", str(path), "--out", str(tmp_path / "out"),
                     "--tasks", "pathologies", "--formats", "json", "--seedless"])
        assert code == 0
        data = json.loads((tmp_path / "out" / "cli" / "report.json").read_text())
        assert data["scenario"]["tasks"] == ["pathologies"]
        assert not list((tmp_path / "out" / "cli").glob("*.csv"))

    def test_numerical_failure_exit_code(self, tmp_path):
        path = _write(tmp_path, {"tasks": ["pathologies"], "pathologies": {"span_tau0": 50.0}})
        assert main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 3

    def test_io_exit_code(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        path = _write(tmp_path, {"tasks": ["pathologies"]})
        assert main(["run", "--config", str(path), "--out", str(blocker)]) == 4

    def test_sweep(self, tmp_path):
        path = _write(tmp_path, {"scenario_id": "sw", "tasks": ["pathologies"]})
        code = main(["sweep", "--config", str(path), "--vary", "pathologies.F=1.0,2.0",
                     "--out", str(tmp_path / "o"), "--formats", "json"])
        assert code == 0
        names = sorted(p.name for p in (tmp_path / "o").iterdir())
        assert names == ["sw__pathologies.F=1.0", "sw__pathologies.F=2.0"]

    def test_sweep_bad_vary_argument(self, tmp_path):
        path = _write(tmp_path, {"tasks": ["pathologies"]})
        assert main(["sweep", "--config", str(path), "--vary", "novalue"]) == 2
