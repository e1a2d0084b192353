"""Coordinate-median solver for l_p spaces.

When some radius-r ball holds a weight fraction alpha > 1/2, the vector
of per-coordinate weighted medians is itself close to that ball's
center: within (alpha / (alpha - 1/2))^(1/p) * r for finite p.  The
solver never needs to know r or the ball; it is a single selection pass
per coordinate.
"""

from __future__ import annotations

import math

import numpy as np

from .core import WeightedPointSet, require_positive_weight
from .errors import ArgumentError, UnsupportedFractionError
from .selection import weighted_median
from .spaces import LpSpace


def lp_median_bound(alpha: float, p: float) -> float:
    """Distance bound (in units of r) from the coordinate median to the
    center of any radius-r ball holding a weight fraction alpha > 1/2.

    For finite p this is (alpha / (alpha - 1/2))^(1/p).  At p = inf the
    exponent collapses and the bound is the trivial constant 1.
    """
    if not alpha > 0.5:
        raise UnsupportedFractionError(f"alpha must exceed 1/2, got {alpha}")
    if not p >= 1.0:
        raise ArgumentError(f"p must be >= 1, got {p}")
    if math.isinf(p):
        return 1.0
    return (alpha / (alpha - 0.5)) ** (1.0 / p)


def lp_coordinate_median(ps: WeightedPointSet, space: LpSpace, alpha: float) -> np.ndarray:
    """Per-coordinate weighted median of a coordinate-backed point set.

    alpha is the weight fraction the caller assumes some radius-r ball
    holds; it only gates validity (alpha > 1/2) and the reported bound,
    the median itself is alpha-free.
    """
    if not 0.5 < alpha <= 1.0:
        raise UnsupportedFractionError(f"alpha must be in (1/2, 1], got {alpha}")
    if ps.coords is None:
        raise ArgumentError("lp_coordinate_median needs explicit coordinates")
    if ps.coords.shape[1] != space.d:
        raise ArgumentError("point set and space dimensions differ")
    require_positive_weight(ps)
    out = np.empty(space.d)
    for k in range(space.d):
        out[k] = weighted_median(ps.coords[:, k], ps.weights)
    return out
