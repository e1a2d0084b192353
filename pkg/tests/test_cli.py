"""End-to-end command-line behavior: exit codes, JSON payloads, determinism."""

import json
import re
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from onecenter.cli import main
from onecenter.formats import save_instance, write_matrix, write_points_csv
from onecenter.generate import generate_planted
from onecenter.normed import halfplus_constant


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    doc = json.loads(out) if out.strip() else None
    return code, doc, err


@pytest.fixture()
def lp_csv(tmp_path):
    inst = generate_planted("lp", n=200, d=3, alpha=0.75, r=1.0, seed=7)
    path = tmp_path / "pts.csv"
    write_points_csv(str(path), inst.ps)
    return str(path), inst


@pytest.fixture()
def metric_matrix(tmp_path):
    inst = generate_planted("metric", n=90, d=3, alpha=0.6, r=1.0, seed=9)
    path = tmp_path / "dist.txt"
    write_matrix(str(path), inst.matrix)
    return str(path), inst


def test_solve_lp_csv_succeeds(lp_csv, capsys):
    path, inst = lp_csv
    code, doc, _ = run_cli(["solve", "--input", path, "--alpha", "0.75"], capsys)
    assert code == 0
    assert doc["command"] == "solve"
    assert doc["space"] == "lp"
    assert doc["solver"] == "lp-median"
    assert doc["verified"] is True
    assert doc["schema_version"] == 1
    assert isinstance(doc["wall_time_s"], float)
    assert len(doc["center"]) == 3
    assert doc["fraction_achieved"] >= 0.75 - 1e-9


def test_solve_normed_halfplus_from_instance(tmp_path, capsys):
    inst = generate_planted("lp", n=256, d=2, alpha=0.6, r=2.0, seed=4)
    path = tmp_path / "inst.json"
    save_instance(str(path), inst)
    code, doc, _ = run_cli(
        ["solve", "--input", str(path), "--solver", "halfplus", "--alpha", "0.6"], capsys
    )
    assert code == 0
    assert doc["r"] == 2.0  # picked up from the instance ground truth
    assert doc["radius"] == halfplus_constant(0.6) * 2.0
    assert doc["approx_constant"] == halfplus_constant(0.6)
    assert doc["verified"] is True


def test_metric_solve_rejects_r(metric_matrix, capsys):
    path, _ = metric_matrix
    code, doc, err = run_cli(
        ["solve", "--input", path, "--alpha", "0.6", "--r", "1.0"], capsys
    )
    assert code == 1
    assert doc is None
    assert "error" in err


def test_metric_halfplus_payload_schema(metric_matrix, capsys):
    path, _ = metric_matrix
    code, doc, _ = run_cli(
        ["solve", "--input", path, "--alpha", "0.6", "--solver", "halfplus", "--C", "2"], capsys
    )
    assert code == 0
    schema = {
        "type": "object",
        "required": [
            "schema_version", "wall_time_s", "command", "space", "solver",
            "alpha", "n", "C", "center", "center_index", "radius",
            "covered_weight", "fraction_achieved", "approx_constant",
            "query_count", "verified",
        ],
        "properties": {
            "schema_version": {"const": 1},
            "wall_time_s": {"type": "number"},
            "space": {"const": "metric"},
            "solver": {"const": "halfplus"},
            "center": {"type": "integer"},
            "center_index": {"type": "integer", "minimum": 0},
            "radius": {"type": "number", "minimum": 0},
            "covered_weight": {"type": "number", "minimum": 0},
            "approx_constant": {"const": 4.0},
            "query_count": {"type": "integer", "minimum": 1},
            "verified": {"const": True},
        },
    }
    jsonschema.validate(doc, schema)


def test_malformed_csv_reports_line_and_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("w,x1,x2\n1.0,2.0,3.0\n1.0,oops,3.0\n")
    code, doc, err = run_cli(["solve", "--input", str(path), "--alpha", "0.75"], capsys)
    assert code == 1
    assert doc is None
    assert "line 3" in err


def test_unverifiable_normed_run_exits_2(tmp_path, capsys):
    path = tmp_path / "spread.csv"
    path.write_text("w,x1\n1.0,0.0\n1.0,100.0\n1.0,200.0\n1.0,300.0\n")
    code, _, _ = run_cli(
        ["solve", "--input", str(path), "--solver", "halfplus", "--alpha", "0.75", "--r", "1e-9"],
        capsys,
    )
    assert code == 2


def test_unknown_solver_exits_1(lp_csv, capsys):
    path, _ = lp_csv
    code, _, err = run_cli(
        ["solve", "--input", path, "--solver", "bogus", "--alpha", "0.75", "--r", "1.0"], capsys
    )
    assert code == 1
    assert "bogus" in err


def test_missing_required_argument_exits_1(lp_csv, capsys):
    path, _ = lp_csv
    code = main(["solve", "--input", path])
    capsys.readouterr()
    assert code == 1


def test_version_exits_0(capsys):
    assert main(["--version"]) == 0
    capsys.readouterr()


def test_search_r_doubles_until_verified(lp_csv, capsys):
    path, inst = lp_csv
    code, doc, _ = run_cli(
        [
            "solve", "--input", path, "--solver", "halfplus", "--alpha", "0.75",
            "--r", "0.015625", "--search-r",
        ],
        capsys,
    )
    assert code == 0
    assert doc["verified"] is True
    assert doc["r"] >= 0.015625
    assert doc["radius"] == halfplus_constant(0.75) * doc["r"]


def test_bench_rejects_short_grid(capsys):
    code, _, err = run_cli(["bench", "--sizes", "64,256,1024"], capsys)
    assert code == 1
    assert "4" in err


def test_bench_slope_matches_brute_force_exponent(capsys):
    code, doc, _ = run_cli(
        ["bench", "--solver", "halfplus", "--C", "1", "--sizes", "16,32,64,128"], capsys
    )
    assert code == 0
    assert doc["expected_slope"] == 2.0
    assert doc["slope_within_tolerance"] is True
    queries = [row["queries"] for row in doc["grid"]]
    assert queries == sorted(queries)
    assert len(queries) == 4


def test_cover_command_on_metric(metric_matrix, capsys):
    path, _ = metric_matrix
    code, doc, _ = run_cli(
        ["cover", "--input", path, "--alpha", "0.4", "--C", "2"], capsys
    )
    assert code == 0
    assert 1 <= len(doc["balls"]) <= 2
    assert doc["approx_constant"] == 4.0  # 2C with the default C = 2
    assert all(b["radius"] >= 0.0 for b in doc["balls"])


def test_verify_command_lp(lp_csv, capsys):
    path, inst = lp_csv
    center = ",".join(repr(float(x)) for x in inst.centers[0])
    code, doc, _ = run_cli(
        ["verify", "--input", path, "--alpha", "0.75", "--radius", "1.0", "--center", center],
        capsys,
    )
    assert code == 0
    assert doc["verified"] is True

    code, doc, _ = run_cli(
        ["verify", "--input", path, "--alpha", "0.75", "--radius", "1e-7", "--center", center],
        capsys,
    )
    assert code == 2
    assert doc["verified"] is False


def test_verify_command_metric_needs_index(metric_matrix, capsys):
    path, inst = metric_matrix
    code, _, err = run_cli(
        ["verify", "--input", path, "--alpha", "0.6", "--radius", "1.0", "--center", "0,0,0"],
        capsys,
    )
    assert code == 1
    assert "center-index" in err

    code, doc, _ = run_cli(
        [
            "verify", "--input", path, "--alpha", "0.6", "--radius", "1.0",
            "--center-index", str(inst.center_indexes[0]),
        ],
        capsys,
    )
    assert code == 0
    assert doc["verified"] is True


def test_baseline_command(tmp_path, capsys):
    inst = generate_planted("lp", n=128, d=2, alpha=0.6, r=1.0, seed=12)
    path = tmp_path / "inst.json"
    save_instance(str(path), inst)
    code, doc, _ = run_cli(["baseline", "--input", str(path), "--alpha", "0.6", "--seed", "1"], capsys)
    assert code == 0
    assert doc["found"] is True
    assert doc["attempts"] >= 1
    assert doc["radius"] == 2.0  # the baseline always reports a 2r ball


def test_opnorm_demo_payload(capsys):
    code, doc, _ = run_cli(
        ["opnorm-demo", "--k", "3", "--mode", "exhaustive"], capsys
    )
    assert code == 0
    assert doc["count"] == 511
    assert doc["median_is_all_ones"] is True
    assert doc["median_matrix_norm"] == 3.0
    assert set(doc["member_quantiles"]) == {"0.1", "0.5", "0.9"}
    assert set(doc["threshold_fractions"]) == {"2.0", "2.1", "2.5"}


def test_gen_is_deterministic_and_emits_formats(tmp_path, capsys):
    args = [
        "gen", "--space", "lp", "--n", "50", "--d", "2", "--alpha", "0.75",
        "--seed", "3", "--emit", "instance",
    ]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()

    csv_path = tmp_path / "pts.csv"
    code, doc, _ = run_cli(
        [
            "gen", "--space", "lp", "--n", "50", "--d", "2", "--alpha", "0.75",
            "--seed", "3", "--emit", "csv", "--out", str(csv_path),
        ],
        capsys,
    )
    assert code == 0
    assert doc["emitted"] == "csv"
    assert csv_path.read_text().splitlines()[0] == "w,x1,x2"

    mat_path = tmp_path / "dist.txt"
    code, doc, _ = run_cli(
        [
            "gen", "--space", "metric", "--n", "40", "--d", "2", "--alpha", "0.6",
            "--seed", "3", "--emit", "matrix", "--out", str(mat_path),
        ],
        capsys,
    )
    assert code == 0
    assert mat_path.read_text().splitlines()[0] == "40"

    code, _, err = run_cli(
        [
            "gen", "--space", "metric", "--n", "40", "--d", "2", "--alpha", "0.6",
            "--seed", "3", "--emit", "csv", "--out", str(tmp_path / "no.csv"),
        ],
        capsys,
    )
    assert code == 1
    assert "metric" in err


def test_output_flag_writes_file_instead_of_stdout(lp_csv, tmp_path, capsys):
    path, _ = lp_csv
    out = tmp_path / "report.json"
    code, doc, _ = run_cli(
        ["solve", "--input", path, "--alpha", "0.75", "--output", str(out)], capsys
    )
    assert code == 0
    assert doc is None  # nothing on stdout
    assert json.loads(out.read_text())["verified"] is True


def _strip_timing(text: str) -> str:
    return re.sub(r'^\s*"wall_time_s": .*$', "", text, flags=re.MULTILINE)


def test_reruns_are_byte_identical_modulo_timing(tmp_path):
    inst = generate_planted("lp", n=150, d=2, alpha=0.6, r=1.0, seed=21)
    path = tmp_path / "inst.json"
    save_instance(str(path), inst)
    cmd = [
        sys.executable, "-m", "onecenter", "solve", "--input", str(path),
        "--solver", "halfplus", "--alpha", "0.6",
    ]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True)
    second = subprocess.run(cmd, capture_output=True, text=True, check=True)
    assert _strip_timing(first.stdout) == _strip_timing(second.stdout)
    assert "wall_time_s" in first.stdout

    demo = [sys.executable, "-m", "onecenter", "opnorm-demo", "--k", "8", "--samples", "300"]
    runs = [subprocess.run(demo, capture_output=True, text=True, check=True) for _ in range(2)]
    assert _strip_timing(runs[0].stdout) == _strip_timing(runs[1].stdout)
