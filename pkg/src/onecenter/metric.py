"""Solvers for distance-oracle metric spaces with unknown r.

These never see coordinates: all geometry flows through a
DistanceOracle, and the oracle's query counter is the complexity
measure.  ``metric_halfplus`` is the block-recursive search whose query
count scales as C * n^(1 + 1/C); ``metric_quadratic`` is the O(n^2)
peeling baseline; ``metric_cover`` is the full induction on (1/alpha, C)
combining both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CandidateBall, WeightedPointSet, require_positive_weight
from .errors import ArgumentError, UnsupportedFractionError
from .oracle import DistanceOracle, PaddedOracle
from .selection import smallest_radius_at_weight

_TIE_EPS = 1e-12  # loop caps only; never used in comparisons


@dataclass(frozen=True)
class MetricCover:
    """Cover returned by the metric solvers.

    At most floor(1/fraction) point indices with radii; any radius-r
    ball holding fraction*w weight intersects some listed ball whose
    radius is at most approx_constant * r (approx_constant = 2C).
    """

    centers: tuple[int, ...]
    radii: tuple[float, ...]
    fraction: float
    approx_constant: float


def exact_ceil_root(n: int, C: int) -> int:
    """Smallest m with m**C >= n, immune to float-power rounding."""
    if n < 1 or C < 1:
        raise ArgumentError("need n >= 1 and C >= 1")
    m = max(1, int(round(n ** (1.0 / C))))
    while m > 1 and (m - 1) ** C >= n:
        m -= 1
    while m**C < n:
        m += 1
    return m


def metric_query_bound(C: int, n: int) -> float:
    """Measured-constant-free query bound c0 * C * n^(1+1/C) with c0 = 4."""
    return 4.0 * C * float(n) ** (1.0 + 1.0 / C)


def _validate_metric_args(ps: WeightedPointSet, oracle: DistanceOracle) -> None:
    if ps.n != oracle.size:
        raise ArgumentError("point set and oracle sizes differ")
    require_positive_weight(ps)


def _pad_for_blocks(
    ps: WeightedPointSet, oracle: DistanceOracle, C: int
) -> tuple[DistanceOracle, np.ndarray, int]:
    m = exact_ceil_root(ps.n, C)
    total = m**C
    if total == ps.n:
        return oracle, ps.weights.astype(np.float64), m
    padded = PaddedOracle(oracle, total)
    weights = np.concatenate([ps.weights, np.zeros(total - ps.n)])
    return padded, weights, m


def _halfplus_range(
    oracle: DistanceOracle,
    weights: np.ndarray,
    lo: int,
    hi: int,
    level: int,
    alpha: float,
    m: int,
) -> tuple[int, float]:
    """Best (index, radius) for the block [lo, hi) at the given level."""
    block_w = weights[lo:hi]
    y = alpha * float(np.sum(block_w))
    if level == 1:
        candidates = range(lo, hi)
    else:
        sub = (hi - lo) // m
        candidates = [
            _halfplus_range(oracle, weights, lo + j * sub, lo + (j + 1) * sub, level - 1, alpha, m)[0]
            for j in range(m)
        ]
    eval_idx = np.arange(lo, hi)
    best_i = -1
    best_s = math.inf
    for c in candidates:
        d = oracle.dist_many(c, eval_idx)
        s = smallest_radius_at_weight(d, block_w, y)
        if s < best_s or (s == best_s and c < best_i):
            best_i = c
            best_s = s
    return best_i, best_s


def metric_halfplus(
    ps: WeightedPointSet, oracle: DistanceOracle, alpha: float, C: int
) -> CandidateBall:
    """Point p and the smallest s with ball (p, s) covering >= alpha*w,
    guaranteed s <= 2C*r whenever some radius-r ball holds alpha*w.

    alpha must exceed 1/2.  n is padded with zero-weight aliases of
    point 0 up to the next perfect C-th power m^C; the recursion visits
    m blocks per level and spends about C * m^(C+1) oracle queries.
    C = 1 is exactly the brute-force sweep over all centers (lowest
    index wins ties).
    """
    if not 0.5 < alpha <= 1.0:
        raise UnsupportedFractionError(f"alpha must be in (1/2, 1], got {alpha}")
    if C < 1 or int(C) != C:
        raise ArgumentError(f"C must be a positive integer, got {C}")
    _validate_metric_args(ps, oracle)
    C = int(C)
    padded, weights, m = _pad_for_blocks(ps, oracle, C)
    idx, radius = _halfplus_range(padded, weights, 0, m**C, C, alpha, m)
    if idx >= ps.n:  # padded alias of point 0
        idx = 0
    d = padded.dist_many(idx, np.arange(m**C))
    covered = float(np.sum(weights[d <= radius]))
    return CandidateBall(center=int(idx), radius=float(radius), covered_weight=covered, center_index=int(idx))


def _cover_range(
    oracle: DistanceOracle,
    w_local: np.ndarray,
    lo: int,
    fraction: float,
    level: int,
    m: int,
) -> list[tuple[int, float]]:
    """Peeling cover of the block starting at lo; mutates w_local.

    Returns (index, radius) pairs.  The threshold is fixed at
    fraction * (block total at entry), per the induction: peeling never
    lowers the absolute bar.
    """
    span = w_local.shape[0]
    total = float(np.sum(w_local))
    if total <= 0.0:
        return []
    y = fraction * total
    eval_idx = np.arange(lo, lo + span)
    out: list[tuple[int, float]] = []
    for _ in range(int(math.floor(1.0 / fraction + _TIE_EPS))):
        remaining = float(np.sum(w_local))
        if remaining < y or remaining <= 0.0:
            break
        if level == 1:
            candidates: list[int] = list(range(lo, lo + span))
        else:
            boosted = min(y / remaining, 1.0)
            sub = span // m
            candidates = []
            for j in range(m):
                sub_w = w_local[j * sub : (j + 1) * sub].copy()
                candidates += [
                    idx for idx, _ in _cover_range(oracle, sub_w, lo + j * sub, boosted, level - 1, m)
                ]
            if not candidates:
                break
        best_i = -1
        best_s = math.inf
        best_d = None
        for c in candidates:
            d = oracle.dist_many(c, eval_idx)
            s = smallest_radius_at_weight(d, w_local, y)
            if s < best_s or (s == best_s and c < best_i):
                best_i, best_s, best_d = c, s, d
        if best_d is None or not math.isfinite(best_s):
            break
        out.append((best_i, best_s))
        w_local[best_d <= best_s] = 0.0
    return out


def metric_quadratic(ps: WeightedPointSet, oracle: DistanceOracle, alpha: float) -> MetricCover:
    """O(n^2 / alpha)-query peeling baseline.

    Repeatedly picks the center minimizing the radius that covers at
    least y = alpha * (original total weight) of the remaining weight
    (the threshold stays y, not alpha times the shrinking total), zeroes
    the covered weights, and stops when less than y remains.  Any
    radius-r ball holding y weight intersects a recorded ball of radius
    at most 2r.
    """
    if not 0.0 < alpha <= 1.0:
        raise ArgumentError(f"alpha must be in (0, 1], got {alpha}")
    _validate_metric_args(ps, oracle)
    found = _cover_range(oracle, ps.weights.copy(), 0, alpha, 1, ps.n)
    centers = tuple(int(i) for i, _ in found)
    radii = tuple(float(s) for _, s in found)
    return MetricCover(centers, radii, alpha, 2.0)


def metric_cover(
    ps: WeightedPointSet, oracle: DistanceOracle, alpha: float, C: int
) -> MetricCover:
    """Full metric cover: <= floor(1/alpha) balls; any radius-r ball
    holding alpha*w weight intersects a listed ball of radius <= 2C*r.

    Induction on (floor(1/alpha), C): alpha > 1/2 delegates to
    metric_halfplus; C = 1 is metric_quadratic; otherwise each peel
    round recurses into the m blocks at level C-1, evaluates all block
    candidates globally at the fixed threshold alpha * w_original, keeps
    the minimal-radius one (ties to the lowest point index), zeroes its
    ball, and repeats on the remaining weight.
    """
    if not 0.0 < alpha <= 1.0:
        raise ArgumentError(f"alpha must be in (0, 1], got {alpha}")
    if C < 1 or int(C) != C:
        raise ArgumentError(f"C must be a positive integer, got {C}")
    _validate_metric_args(ps, oracle)
    C = int(C)
    if math.floor(1.0 / alpha + _TIE_EPS) == 1:
        ball = metric_halfplus(ps, oracle, alpha, C)
        return MetricCover((int(ball.center_index),), (float(ball.radius),), alpha, 2.0 * C)
    if C == 1:
        cover = metric_quadratic(ps, oracle, alpha)
        return MetricCover(cover.centers, cover.radii, alpha, 2.0)
    padded, weights, m = _pad_for_blocks(ps, oracle, C)
    found = _cover_range(padded, weights.copy(), 0, alpha, C, m)
    centers = tuple(int(i) if i < ps.n else 0 for i, _ in found)
    radii = tuple(float(s) for _, s in found)
    return MetricCover(centers, radii, alpha, 2.0 * C)
