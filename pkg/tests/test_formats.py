"""Round-trip fidelity and error reporting of the three file formats."""

import math

import numpy as np
import pytest

from onecenter import ParseError, WeightedPointSet, generate_planted
from onecenter.formats import (
    detect_format,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    read_matrix,
    read_points_csv,
    save_instance,
    write_matrix,
    write_points_csv,
)


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    coords = rng.normal(size=(37, 4)) * 1e3
    weights = rng.uniform(0.25, 7.0, size=37)
    ps = WeightedPointSet.from_coords(coords, weights)
    path = tmp_path / "pts.csv"
    write_points_csv(str(path), ps)
    back = read_points_csv(str(path))
    assert np.array_equal(back.coords, ps.coords)
    assert np.array_equal(back.weights, ps.weights)


def test_csv_header_and_row_errors(tmp_path):
    path = tmp_path / "bad.csv"

    path.write_text("weight,x1\n1.0,2.0\n")
    with pytest.raises(ParseError) as err:
        read_points_csv(str(path))
    assert err.value.line == 1
    assert "w,x1" in str(err.value)

    path.write_text("w,x1,x2\n1.0,2.0,3.0\n1.0,4.0\n")
    with pytest.raises(ParseError) as err:
        read_points_csv(str(path))
    assert err.value.line == 3
    assert "line 3" in str(err.value)

    path.write_text("w,x1\n1.0,two\n")
    with pytest.raises(ParseError) as err:
        read_points_csv(str(path))
    assert err.value.line == 2
    assert "'two'" in str(err.value)

    path.write_text("w,x1\n1.0,nan\n")
    with pytest.raises(ParseError) as err:
        read_points_csv(str(path))
    assert "NaN" in str(err.value)

    path.write_text("w,x1\n")
    with pytest.raises(ParseError):
        read_points_csv(str(path))

    path.write_text("")
    with pytest.raises(ParseError) as err:
        read_points_csv(str(path))
    assert err.value.line == 1


def test_csv_negative_weight_is_a_parse_error(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("w,x1\n-1.0,2.0\n")
    with pytest.raises(ParseError):
        read_points_csv(str(path))


def test_csv_skips_blank_lines(tmp_path):
    path = tmp_path / "gaps.csv"
    path.write_text("w,x1\n1.0,2.0\n\n0.5,3.0\n")
    ps = read_points_csv(str(path))
    assert ps.n == 2
    assert ps.coords[1, 0] == 3.0


def test_matrix_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(9, 3))
    diff = pts[:, None, :] - pts[None, :, :]
    mat = np.sqrt(np.sum(diff * diff, axis=2))
    path = tmp_path / "dist.txt"
    write_matrix(str(path), mat)
    assert np.array_equal(read_matrix(str(path)), mat)


def test_matrix_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "m.txt"

    path.write_text("two\n0 1\n1 0\n")
    with pytest.raises(ParseError) as err:
        read_matrix(str(path))
    assert err.value.line == 1

    path.write_text("2\n0 1\n1\n")
    with pytest.raises(ParseError) as err:
        read_matrix(str(path))
    assert err.value.line == 3

    path.write_text("3\n0 1 2\n1 0 1\n")
    with pytest.raises(ParseError):
        read_matrix(str(path))

    path.write_text("0\n")
    with pytest.raises(ParseError):
        read_matrix(str(path))

    path.write_text("2\n0 x\n1 0\n")
    with pytest.raises(ParseError) as err:
        read_matrix(str(path))
    assert err.value.line == 2


@pytest.mark.parametrize("space,alpha,mode", [("lp", 0.6, "single"), ("metric", 0.4, "two")])
def test_instance_json_round_trip(tmp_path, space, alpha, mode):
    inst = generate_planted(n=60, d=3, alpha=alpha, r=1.0, space=space, seed=11, mode=mode)
    path = tmp_path / "inst.json"
    save_instance(str(path), inst)
    back = load_instance(str(path))
    assert back.kind == inst.kind
    assert back.alpha == inst.alpha and back.r == inst.r and back.seed == inst.seed
    assert back.p == inst.p
    assert np.array_equal(back.ps.weights, inst.ps.weights)
    if inst.ps.coords is None:
        assert back.ps.coords is None
        assert np.array_equal(back.matrix, inst.matrix)
    else:
        assert np.array_equal(back.ps.coords, inst.ps.coords)
    assert back.center_indexes == inst.center_indexes
    assert all(np.array_equal(a, b) for a, b in zip(back.centers, inst.centers))
    assert np.array_equal(back.inlier_mask, inst.inlier_mask)
    assert back.cluster_weights == inst.cluster_weights
    assert back.min_clearance == inst.min_clearance


def test_instance_json_preserves_infinite_p(tmp_path):
    inst = generate_planted(n=40, d=2, alpha=0.75, r=0.5, space="lp", p=math.inf, seed=5)
    data = instance_to_dict(inst)
    assert data["p"] == "inf"
    assert instance_from_dict(data).p == math.inf


def test_instance_dict_validation():
    inst = generate_planted(n=30, d=2, alpha=0.6, r=1.0, space="lp", seed=2)
    good = instance_to_dict(inst)

    bad = dict(good)
    bad["schema_version"] = 2
    with pytest.raises(ParseError):
        instance_from_dict(bad)

    bad = dict(good)
    bad["kind"] = "graph"
    with pytest.raises(ParseError):
        instance_from_dict(bad)

    bad = dict(good)
    del bad["alpha"]
    with pytest.raises(ParseError):
        instance_from_dict(bad)

    bad = dict(good)
    bad["weights"] = [-1.0] * inst.ps.n
    with pytest.raises(ParseError):
        instance_from_dict(bad)

    with pytest.raises(ParseError):
        instance_from_dict([1, 2, 3])


def test_load_instance_reports_json_syntax_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "schema_version": 1,\n  oops\n}\n')
    with pytest.raises(ParseError) as err:
        load_instance(str(path))
    assert err.value.line == 3


def test_detect_format():
    assert detect_format("points.csv") == "csv"
    assert detect_format("/a/b/INST.JSON") == "instance"
    assert detect_format("dist.txt") == "matrix"
    assert detect_format("noext") == "matrix"
