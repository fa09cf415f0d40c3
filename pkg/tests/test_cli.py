import csv
import io
import json
import time

import jsonschema
import numpy as np
import pytest

from bdsw_qaoa import format_rudy
from bdsw_qaoa.cli import main
from conftest import random_graph

TRIANGLE = "3 3\n1 2 1\n2 3 1\n1 3 1\n"

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "instance", "num_vertices", "num_edges", "best_assignment", "qubo_cost", "initial_tabu_cost",
        "windows", "cost_trajectory", "timings", "config", "n", "k", "seed", "subsolver",
        "cut_value", "optimal_cut", "approximation_ratio",
    ],
    "properties": {
        "best_assignment": {"type": "string", "pattern": "^[01]+$"},
        "qubo_cost": {"type": "number"},
        "cut_value": {"type": "number"},
        "approximation_ratio": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
        "seed": {"type": "integer"},
        "cost_trajectory": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "timings": {
            "type": "object",
            "required": ["tabu", "windows", "total"],
            "additionalProperties": {"type": "number", "minimum": 0},
        },
        "config": {"type": "object", "required": ["tabu", "window_size", "backbone_k", "qaoa", "seed", "subsolver"]},
        "windows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["cycle", "start", "indices", "sub_solution", "sub_energy", "lifted_cost", "accepted", "cost_after"],
            },
        },
    },
}


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "triangle.rudy"
    path.write_text(TRIANGLE)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:
    def test_triangle_exact(self, capsys, tri_file):
        code, out, _ = run(
            capsys, "solve", tri_file, "--window-size", 2, "--backbone-frac", 1.0,
            "--subsolver", "exact", "--seed", 7, "--optimal", 2,
        )
        assert code == 0
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert report["cut_value"] == 2
        assert report["qubo_cost"] == -2
        assert report["approximation_ratio"] == 1.0
        assert report["seed"] == 7

    def test_qaoa_subsolver_schema(self, capsys, tmp_path):
        path = tmp_path / "g.rudy"
        path.write_text(format_rudy(random_graph(np.random.default_rng(4), 20, 0.3)))
        code, out, _ = run(capsys, "solve", path, "--window-size", 6, "--shots", 256, "--tabu-iters", 20)
        assert code == 0
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert report["approximation_ratio"] is None
        assert len(report["windows"]) == report["k"] - 6 + 1
        assert report["config"]["tabu"]["iterations"] == 20

    def test_deterministic_and_out_file(self, capsys, tri_file, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            assert run(capsys, "solve", tri_file, "--window-size", 2, "--seed", 5, "--out", tmp_path / name)[0] == 0
            report = json.loads((tmp_path / name).read_text())
            report.pop("timings")
            outs.append(report)
        assert outs[0] == outs[1]

    def test_csv(self, capsys, tri_file):
        code, out, _ = run(capsys, "solve", tri_file, "--window-size", 2, "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 1 and rows[0]["cut_value"] == "2.0"

    def test_missing_file(self, capsys, tmp_path):
        missing = tmp_path / "nope.rudy"
        code, _, err = run(capsys, "solve", missing)
        assert code == 1
        assert str(missing) in err

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.rudy"
        bad.write_text("3 2\n1 2 1\n")
        code, _, err = run(capsys, "solve", bad)
        assert code == 1 and "line" in err

    def test_config_error(self, capsys, tri_file):
        code, _, err = run(capsys, "solve", tri_file)  # default window 15 > 3 vertices
        assert code == 1 and "window size" in err

    def test_bad_flag(self, capsys, tri_file):
        assert run(capsys, "solve", tri_file, "--subsolver", "magic")[0] == 1


class TestBench:
    @pytest.fixture
    def two(self, tmp_path):
        paths = []
        for i in range(2):
            p = tmp_path / f"g{i}.rudy"
            p.write_text(format_rudy(random_graph(np.random.default_rng(i), 8, 0.5)))
            paths.append(p)
        return paths

    def test_counts_runs(self, capsys, two):
        code, out, _ = run(capsys, "bench", *two, "--reps", 3, "--window-size", 4, "--shots", 128, "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert len(data["runs"]) == 6
        assert [s["runs"] for s in data["summary"]] == [3, 3]
        for s in data["summary"]:
            assert s["cut_min"] <= s["cut_median"] <= s["cut_max"]
        assert [r["seed"] for r in data["runs"]] == [0, 1, 2, 0, 1, 2]

    def test_csv_deterministic(self, capsys, two):
        argv = ("bench", *two, "--reps", 2, "--window-size", 4, "--shots", 128, "--optimal", "g0=10", "--optimal", "g1.rudy=12")
        first, second = run(capsys, *argv), run(capsys, *argv)
        assert first[0] == 0 and first[1] == second[1]
        rows = list(csv.DictReader(io.StringIO(first[1])))
        assert [r["optimal_cut"] for r in rows] == ["10.0", "12.0"]
        assert all(0 <= float(r["ratio_min"]) <= float(r["ratio_max"]) for r in rows)

    def test_bare_optimal_needs_one_instance(self, capsys, two):
        code, _, err = run(capsys, "bench", *two, "--optimal", "10")
        assert code == 1 and "exactly one instance" in err

    def test_workers_match_serial(self, capsys, two):
        argv = ("bench", *two, "--reps", 2, "--window-size", 4, "--shots", 64)
        assert run(capsys, *argv)[1] == run(capsys, *argv, "--workers", 2)[1]


class TestOracle:
    def test_triangle(self, capsys, tri_file):
        code, out, _ = run(capsys, "oracle", tri_file)
        assert code == 0
        assert out.splitlines()[0] == "max_cut=2"

    def test_json(self, capsys, tri_file):
        data = json.loads(run(capsys, "oracle", tri_file, "--format", "json")[1])
        assert data["max_cut"] == 2 and len(data["partition"]) == 3

    def test_24_vertices_in_budget(self, capsys, tmp_path):
        path = tmp_path / "g24.rudy"
        path.write_text(format_rudy(random_graph(np.random.default_rng(24), 24, 0.3)))
        t0 = time.perf_counter()
        code, out, _ = run(capsys, "oracle", path)
        assert code == 0 and out.startswith("max_cut=")
        assert time.perf_counter() - t0 < 60

    def test_25_vertices_refused(self, capsys, tmp_path):
        path = tmp_path / "g25.rudy"
        path.write_text("25 1\n1 25 1\n")
        code, _, err = run(capsys, "oracle", path)
        assert code == 1 and "24" in err
