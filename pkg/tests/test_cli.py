"""Command-line interface: golden outputs, exit codes, schema stability."""

import json
from importlib.resources import files

import jsonschema
import pytest

from mcbounds.cli import main
from mcbounds.finite_chain import build_grid_walk

SCHEMA = json.loads(
    (files("mcbounds") / "schemas" / "report.schema.json").read_text()
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    report = json.loads(out) if out.strip() else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
    return code, report


class TestFinite:
    def test_pseudo_golden(self, capsys):
        code, report = run_cli(capsys, "finite", "pseudo", "--grid", "3x3", "--n0", "2")
        assert code == 0
        res = report["results"]
        assert res["epsilon"] == "1/3"
        assert sorted(map(tuple, res["argmin_pairs"])) == [(1, 9), (3, 7)]
        assert res["threshold_steps"] == 24

    def test_minorization_golden(self, capsys):
        code, report = run_cli(
            capsys, "finite", "minorization", "--grid", "3x3", "--n0", "2"
        )
        assert code == 0
        assert report["results"]["epsilon"] == "9/80"
        assert report["results"]["threshold_steps"] == 78

    def test_minorization_absent_at_lag_one(self, capsys):
        code, report = run_cli(
            capsys, "finite", "minorization", "--grid", "3x3", "--n0", "1"
        )
        assert code == 0
        assert report["results"]["epsilon"] is None

    def test_stationary_single_cell(self, capsys):
        code, report = run_cli(capsys, "finite", "stationary", "--grid", "1x1")
        assert code == 0
        assert report["results"]["pi"] == ["1"]

    def test_stationary_golden(self, capsys):
        code, report = run_cli(capsys, "finite", "stationary", "--grid", "3x3")
        assert code == 0
        assert report["results"]["pi"][4] == "5/33"

    def test_eigen_bound(self, capsys):
        code, report = run_cli(capsys, "finite", "eigen-bound", "--grid", "3x3")
        assert code == 0
        res = report["results"]
        assert res["coefficient"] <= 0.85
        assert abs(res["rate"] - 0.4667) <= 0.001
        assert res["threshold_steps"] == 6

    def test_tv_exact_curve_dominated_by_bound_columns(self, capsys, tmp_path):
        code = main(
            [
                "finite", "tv-exact", "--grid", "3x3", "--n0", "2", "--n", "10",
                "--output", str(tmp_path), "--format", "both",
            ]
        )
        capsys.readouterr()
        assert code == 0
        csv = (tmp_path / "finite-tv-exact-curve.csv").read_text().splitlines()
        assert csv[0] == "n,tv,bound_uniform,bound_pseudo"
        for line in csv[1:]:
            n, tv, bu, bp = line.split(",")
            assert float(tv) <= float(bu) + 1e-12
            assert float(tv) <= float(bp) + 1e-12
        report = json.loads((tmp_path / "finite-tv-exact.json").read_text())
        assert report["results"]["curve"][0]["tv"] == "28/33"

    def test_matrix_file_roundtrip(self, capsys, tmp_path):
        grid = build_grid_walk(3, 3)
        path = tmp_path / "grid.json"
        path.write_text(json.dumps(grid.to_json_dict()))
        code, report = run_cli(
            capsys, "finite", "stationary", "--matrix-file", str(path)
        )
        assert code == 0
        assert report["results"]["pi"][0] == "1/11"

    def test_non_unique_stationary_exits_3(self, capsys, tmp_path):
        path = tmp_path / "identity.json"
        path.write_text(
            json.dumps({"size": 2, "rows": [["1", "0"], ["0", "1"]]})
        )
        code, _ = run_cli(capsys, "finite", "stationary", "--matrix-file", str(path))
        assert code == 3

    def test_missing_model_exits_2(self, capsys):
        code, _ = run_cli(capsys, "finite", "stationary")
        assert code == 2


class TestBound:
    def test_t1_published_crossings(self, capsys):
        code, report = run_cli(
            capsys, "bound", "t1", "--epsilon", "0.117", "--n0", "1"
        )
        assert code == 0
        assert report["results"]["crossing"] == 38

    def test_t1_exact_rational_epsilon(self, capsys):
        code, report = run_cli(
            capsys, "bound", "t1", "--epsilon", "9/80", "--n0", "2"
        )
        assert code == 0
        assert report["results"]["crossing"] == 78

    def test_t1_degenerate(self, capsys):
        code, report = run_cli(
            capsys, "bound", "t1", "--epsilon", "1", "--delta", "0.5"
        )
        assert code == 0
        assert report["results"]["crossing"] == 1

    def test_t1_requires_epsilon(self, capsys):
        code, _ = run_cli(capsys, "bound", "t1")
        assert code == 2

    def test_t1_pointprocess_derived_epsilon(self, capsys):
        code, report = run_cli(capsys, "bound", "t1", "--pointprocess", "0.1,0.1")
        assert code == 0
        assert report["results"]["crossing"] == 38
        assert report["provenance"]["epsilon"].startswith("computed")

    def test_t2_preset_pipeline(self, capsys):
        code, report = run_cli(capsys, "bound", "t2", "--preset", "rwm-laplace")
        assert code == 0
        res = report["results"]
        assert res["crossing"] <= 120_000
        assert res["bound_at_crossing"] < 0.01
        assert res["schedule_point"]["n"] == 120_000
        assert res["schedule_point"]["j"] == 274
        assert res["schedule_point"]["bound"] < 0.01
        assert abs(res["constants"]["alpha_inv"] - 0.9927) <= 5e-4
        assert abs(res["constants"]["B"] - 20.04) <= 0.05
        assert res["constants"]["expected_h"] == 2.0
        assert report["provenance"]["alpha_inv"].startswith("computed")

    def test_t2_fallback_expected_h(self, capsys):
        code, report = run_cli(
            capsys, "bound", "t2", "--expected-h", "fallback"
        )
        assert code == 0
        eh = report["results"]["constants"]["expected_h"]
        assert eh == pytest.approx(0.5 + 0.5 * 3.392857, abs=1e-3)


class TestSimulate:
    def test_grid_run_reports_bound_curve(self, capsys):
        code, report = run_cli(
            capsys,
            "simulate", "--grid", "3x3", "--cert", "pseudo",
            "--n-max", "20", "--reps", "2000", "--seed", "42",
        )
        assert code == 0
        res = report["results"]
        assert res["lattice"] == list(range(0, 21, 2))
        for point, p, se in zip(res["bound_curve"], res["p_neq"], res["p_neq_se"]):
            assert p <= point["bound"] + 3 * se
        assert report["config"]["master_seed"] == 42

    def test_rerun_byte_identical(self, tmp_path, capsys):
        argv = [
            "simulate", "--halfline", "--n-max", "8", "--reps", "1000",
            "--burn-in", "100", "--seed", "9",
        ]
        a = main(argv + ["--output", str(tmp_path / "a")])
        b = main(argv + ["--output", str(tmp_path / "b")])
        capsys.readouterr()
        assert a == b == 0
        assert (tmp_path / "a" / "simulate-halfline.json").read_bytes() == (
            tmp_path / "b" / "simulate-halfline.json"
        ).read_bytes()

    def test_single_replication_warns_but_exits_zero(self, capsys):
        code, report = run_cli(
            capsys,
            "simulate", "--grid", "3x3", "--cert", "pseudo",
            "--n-max", "8", "--reps", "1", "--seed", "333",
        )
        assert code == 0
        if report["results"]["p_neq"][1] == 1.0:
            assert report.get("warnings")

    def test_trajectory_dump(self, tmp_path, capsys):
        traj = tmp_path / "paths.csv"
        code = main(
            [
                "simulate", "--grid", "3x3", "--n-max", "6", "--reps", "5",
                "--seed", "4", "--trajectories", str(traj),
                "--output", str(tmp_path),
            ]
        )
        capsys.readouterr()
        assert code == 0
        lines = traj.read_text().splitlines()
        assert lines[0] == "replication,n,x,x_prime,coupled"
        assert len(lines) == 1 + 5 * 4  # header + reps * lattice points

    def test_model_required(self, capsys):
        code, _ = run_cli(capsys, "simulate", "--reps", "10")
        assert code == 2


class TestVerify:
    def test_drift_preset_passes(self, capsys):
        code, report = run_cli(
            capsys, "verify", "drift", "--grid-step", "0.5"
        )
        assert code == 0
        assert report["results"]["passed"] is True
        assert report["results"]["max_violation"] <= 1e-6

    def test_drift_bad_constants_exit_3(self, capsys):
        code, report = run_cli(
            capsys, "verify", "drift", "--lam", "0.5", "--b", "0",
            "--grid-step", "0.5",
        )
        assert code == 3
        assert report["results"]["passed"] is False
        assert report["results"]["max_violation"] > 0
        assert report["provenance"]["lam"] == "user"

    def test_minorization_halfline_passes(self, capsys):
        code, report = run_cli(
            capsys, "verify", "minorization", "--preset", "halfline",
            "--probe-step", "0.5",
        )
        assert code == 0
        assert report["results"]["passed"] is True
        assert report["results"]["epsilon"] == 0.5

    def test_minorization_rwm_passes(self, capsys):
        code, report = run_cli(
            capsys, "verify", "minorization", "--preset", "rwm-laplace",
            "--probe-step", "0.25",
        )
        assert code == 0
        assert report["results"]["passed"] is True


class TestOutputs:
    def test_csv_without_output_dir_exits_2(self, capsys):
        code, _ = run_cli(
            capsys, "finite", "tv-exact", "--grid", "3x3", "--format", "csv"
        )
        assert code == 2

    def test_all_reports_validate_against_schema(self, capsys):
        # run_cli validates every JSON payload against the shipped schema
        for argv in (
            ["finite", "minorization", "--grid", "2x2", "--n0", "2"],
            ["bound", "t1", "--epsilon", "1/2"],
            ["verify", "drift", "--grid-step", "1.0"],
        ):
            code, report = run_cli(capsys, *argv)
            assert code == 0
            assert report["tool"] == "mcbounds"
