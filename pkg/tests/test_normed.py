"""Pair-and-join reduction plus centroid refinement for alpha > 1/2."""

import math

import numpy as np
import pytest

from onecenter import (
    ArgumentError,
    DegenerateInputError,
    LpSpace,
    UnsupportedFractionError,
    WeightedPointSet,
    centroid_refine,
    cluster_halfplus,
    generate_planted,
    halfplus_constant,
    pair_reduce,
    refine_iteration_cap,
    validate_norm_axioms,
    verify_ball,
)

from conftest import RowCountingLp

L2_3 = LpSpace(2.0, 3)


def _line(points, weights):
    coords = np.array([[float(x), 0.0, 0.0] for x in points])
    return WeightedPointSet.from_coords(coords, weights)


def test_far_pair_cancels_to_weight_difference():
    ps = _line([0.0, 5.0], [1.0, 1.0])
    red = pair_reduce(ps, L2_3, r=1.0)
    assert red.weights.tolist() == [0.0]
    assert red.points[0, 0] == 0.0  # tie keeps the earlier point


def test_close_pair_merges_onto_heavier_point():
    ps = _line([0.0, 1.0], [2.0, 3.0])
    red = pair_reduce(ps, L2_3, r=1.0)
    assert red.weights.tolist() == [5.0]
    assert red.points[0, 0] == 1.0


def test_odd_input_padded_with_zero_weight_copy_of_first():
    ps = _line([0.0, 10.0, 4.0], [1.0, 2.0, 0.75])
    red = pair_reduce(ps, L2_3, r=1.0)
    assert red.points.shape[0] == 2
    # second pair is (third point, zero-weight copy of the first)
    assert red.weights[1] == 0.75
    assert red.points[1, 0] == 4.0


def test_pair_reduce_costs_exactly_ceil_half_n_distances():
    rng = np.random.default_rng(0)
    for n in (2, 3, 8, 9, 51, 100):
        space = RowCountingLp(2.0, 4)
        ps = WeightedPointSet.from_coords(rng.normal(size=(n, 4)))
        pair_reduce(ps, space, r=0.5)
        assert space.rows == math.ceil(n / 2)


def test_pair_reduce_weight_bounds():
    rng = np.random.default_rng(4)
    for seed in range(10):
        r2 = np.random.default_rng(seed)
        n = int(r2.integers(2, 120))
        coords = r2.normal(size=(n, 3))
        weights = r2.uniform(0.0, 2.0, size=n)
        ps = WeightedPointSet.from_coords(coords, weights)
        red = pair_reduce(ps, L2_3, r=float(rng.uniform(0.05, 2.0)))
        assert np.all(red.weights >= 0.0)
        assert float(red.weights.sum()) <= float(weights.sum()) + 1e-12
        pair_sums = np.array(
            [
                weights[2 * i] + (weights[2 * i + 1] if 2 * i + 1 < n else 0.0)
                for i in range(red.points.shape[0])
            ]
        )
        assert np.all(red.weights <= pair_sums + 1e-12)


def test_pair_reduce_keeps_positive_weight_on_planted_majority():
    for seed in range(6):
        inst = generate_planted("lp", n=257, d=5, alpha=0.6, r=1.0, seed=seed)
        red = pair_reduce(inst.ps, inst.space_ops(), inst.r)
        assert float(red.weights.sum()) > 0.0


def test_pair_reduce_triple_radius_cover_property():
    # a radius-r majority ball survives as a radius-3r majority ball
    for seed in range(6):
        inst = generate_planted(
            "lp", n=400, d=4, alpha=0.62, r=1.0, seed=seed, weights="dyadic"
        )
        space = inst.space_ops()
        red = pair_reduce(inst.ps, space, inst.r)
        total = float(red.weights.sum())
        near = space.distances(red.points, inst.centers[0]) <= 3.0 * inst.r
        assert float(red.weights[near].sum()) >= inst.alpha * total - 1e-9 * total


def test_pair_reduce_rejects_nonpositive_radius():
    ps = _line([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ArgumentError):
        pair_reduce(ps, L2_3, r=0.0)


def test_centroid_of_identical_points_is_that_point():
    q = np.array([2.5, -0.75, 8.0])
    ps = WeightedPointSet.from_coords(np.tile(q, (4, 1)))
    out = centroid_refine(ps, L2_3, a=q + 0.5, K=10.0, r=1.0, alpha=0.75)
    assert np.array_equal(out, q)


def test_centroid_refine_validates_containment_factor():
    ps = WeightedPointSet.from_coords(np.zeros((2, 3)))
    with pytest.raises(ArgumentError):
        centroid_refine(ps, L2_3, a=np.zeros(3), K=5.0, r=1.0, alpha=0.75)
    with pytest.raises(UnsupportedFractionError):
        centroid_refine(ps, L2_3, a=np.zeros(3), K=50.0, r=1.0, alpha=0.5)


def test_centroid_refine_degenerate_when_nothing_in_range():
    ps = WeightedPointSet.from_coords(np.zeros((3, 3)))
    far = np.array([1e6, 0.0, 0.0])
    with pytest.raises(DegenerateInputError):
        centroid_refine(ps, L2_3, a=far, K=10.0, r=1.0, alpha=0.75)


def test_single_refine_step_contracts_k10_to_7p5():
    # alpha 3/4 gives eps 1/4: K=10 contracts the center error to
    # (K - K*eps - 1) r = 6.5 r, i.e. a fresh containment factor of 7.5.
    alpha, K, r = 0.75, 10.0, 1.0
    for seed in range(8):
        # separation 4 puts outliers inside B(a, K r) so they fight the centroid
        inst = generate_planted("lp", n=300, d=4, alpha=alpha, r=r, seed=seed, separation=4.0)
        q = inst.centers[0]
        space = inst.space_ops()
        rng = np.random.default_rng(seed + 1000)
        off = rng.normal(size=4)
        a = q + off / space.norm(off) * (K - 1.0) * r  # B(q, r) inside B(a, K r)
        out = centroid_refine(inst.ps, space, a=a, K=K, r=r, alpha=alpha)
        assert space.norm(out - q) <= (K - K * (alpha - 0.5) - 1.0) * r + 1e-9


def test_refine_iteration_cap_formula():
    assert refine_iteration_cap(0.75) == math.ceil(math.log(5.0) / math.log(4.0 / 3.0))
    # shrinking K from 3C+4 by (1 - eps) per step always fits the cap
    for alpha in (0.51, 0.6, 0.75, 0.9, 1.0):
        eps = alpha - 0.5
        C = halfplus_constant(alpha)
        K = 3.0 * C + 4.0
        steps = 0
        while K > C:
            K *= 1.0 - eps
            steps += 1
        assert steps <= refine_iteration_cap(alpha)


def test_halfplus_constant_values():
    assert halfplus_constant(0.75) == 6.0
    assert halfplus_constant(1.0) == 4.0
    with pytest.raises(UnsupportedFractionError):
        halfplus_constant(0.5)


def test_single_point_returns_itself():
    ps = WeightedPointSet.from_coords([[1.0, 2.0, 3.0]], [2.0])
    ball = cluster_halfplus(ps, L2_3, alpha=0.75, r=2.0)
    assert np.array_equal(ball.center, [1.0, 2.0, 3.0])
    assert ball.radius == 6.0 * 2.0
    assert ball.covered_weight == 2.0


def test_planted_halfplus_instance_verifies():
    inst = generate_planted("lp", n=512, d=8, alpha=0.6, r=1.0, seed=7)
    space = inst.space_ops()
    ball = cluster_halfplus(inst.ps, space, alpha=0.6, r=1.0)
    assert ball.radius == halfplus_constant(0.6) * 1.0
    ok, covered = verify_ball(inst.ps, space, ball.center, ball.radius, 0.6)
    assert ok
    assert covered == ball.covered_weight


@pytest.mark.parametrize("alpha", [0.55, 0.75, 0.95])
def test_halfplus_verifies_across_fractions_and_norms(alpha):
    for p in (1.0, 2.0, math.inf):
        inst = generate_planted(
            "lp", n=301, d=6, alpha=alpha, r=0.5, seed=int(p if p != math.inf else 9), p=p
        )
        space = inst.space_ops()
        ball = cluster_halfplus(inst.ps, space, alpha=alpha, r=inst.r)
        ok, _ = verify_ball(inst.ps, space, ball.center, ball.radius, alpha)
        assert ok
        assert ball.radius == halfplus_constant(alpha) * inst.r


def test_halfplus_deterministic_bit_identical():
    inst = generate_planted("lp", n=200, d=5, alpha=0.7, r=1.0, seed=3)
    space = inst.space_ops()
    a = cluster_halfplus(inst.ps, space, alpha=0.7, r=1.0)
    b = cluster_halfplus(inst.ps, space, alpha=0.7, r=1.0)
    assert np.array_equal(a.center, b.center)
    assert a.radius == b.radius
    assert a.covered_weight == b.covered_weight


def test_halfplus_argument_validation():
    ps = WeightedPointSet.from_coords(np.zeros((4, 3)))
    with pytest.raises(UnsupportedFractionError):
        cluster_halfplus(ps, L2_3, alpha=0.5, r=1.0)
    with pytest.raises(ArgumentError):
        cluster_halfplus(ps, L2_3, alpha=0.75, r=-1.0)
    with pytest.raises(ArgumentError):
        cluster_halfplus(ps.with_weights(np.zeros(4)), L2_3, alpha=0.75, r=1.0)


def test_lp_spaces_satisfy_norm_axioms():
    rng = np.random.default_rng(12)
    samples = rng.normal(size=(40, 5)) * 10.0
    for p in (1.0, 1.5, 2.0, 4.0, math.inf):
        validate_norm_axioms(LpSpace(p, 5), samples)
