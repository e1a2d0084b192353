"""Core data types: weighted point sets and candidate balls.

Points live either in a real coordinate space (an (n, d) float array) or
behind a distance oracle, in which case a point handle is simply its
index and ``coords`` is None.  All balls are closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ArgumentError
from .oracle import DistanceOracle

PointHandle = Union[np.ndarray, int]


@dataclass(frozen=True)
class WeightedPointSet:
    """Immutable weighted point set.

    ``coords`` is an (n, d) float64 array for coordinate-backed sets or
    None for oracle-backed sets (where points are indices 0..n-1).
    Weights are nonnegative; a zero total is representable but every
    solver entry point requires a positive total.
    """

    coords: np.ndarray | None
    weights: np.ndarray
    total_weight: float = field(init=False)

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ArgumentError("weights must be one-dimensional")
        if w.shape[0] == 0:
            raise ArgumentError("point set must be nonempty")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ArgumentError("weights must be finite and nonnegative")
        c = self.coords
        if c is not None:
            c = np.ascontiguousarray(c, dtype=np.float64)
            if c.ndim != 2:
                raise ArgumentError("coords must be an (n, d) array")
            if c.shape[0] != w.shape[0]:
                raise ArgumentError("coords and weights differ in length")
            if not np.all(np.isfinite(c)):
                raise ArgumentError("coords must be finite")
            c.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_weight", float(np.sum(w)))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def d(self) -> int:
        if self.coords is None:
            raise ArgumentError("oracle-backed point set has no coordinate dimension")
        return self.coords.shape[1]

    @classmethod
    def from_coords(cls, coords, weights=None) -> "WeightedPointSet":
        coords = np.asarray(coords, dtype=np.float64)
        if weights is None:
            weights = np.ones(coords.shape[0])
        return cls(coords, np.asarray(weights, dtype=np.float64))

    @classmethod
    def indexed(cls, n: int, weights=None) -> "WeightedPointSet":
        """Oracle-backed set of n points with the given (default unit) weights."""
        if weights is None:
            weights = np.ones(n)
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape[0] != n:
            raise ArgumentError("weights length must equal n")
        return cls(None, weights)

    def with_weights(self, weights) -> "WeightedPointSet":
        return WeightedPointSet(self.coords, np.asarray(weights, dtype=np.float64))


@dataclass(frozen=True)
class CandidateBall:
    """A closed ball: center, radius, and the exact weight it covers.

    ``center`` is a coordinate vector for vector-space solvers or a point
    index for oracle-backed solvers; ``center_index`` is additionally set
    whenever the center is one of the input points.
    """

    center: PointHandle
    radius: float
    covered_weight: float
    center_index: int | None = None


def require_positive_weight(ps: WeightedPointSet) -> None:
    if ps.total_weight <= 0.0:
        raise ArgumentError("total weight must be positive")


def covered_weight(ps: WeightedPointSet, space, center: PointHandle, radius: float) -> float:
    """Total weight within distance <= radius of center (closed ball).

    ``space`` is a NormedSpaceOps for coordinate-backed sets (center must
    then be a coordinate vector) or a DistanceOracle (center must be a
    point index, and the sweep is counted against the oracle's budget).
    """
    if radius < 0:
        raise ArgumentError("radius must be nonnegative")
    if isinstance(space, DistanceOracle):
        if not isinstance(center, (int, np.integer)):
            raise ArgumentError("oracle-backed covered_weight needs a center index")
        if ps.n != space.size:
            raise ArgumentError("point set and oracle sizes differ")
        dists = space.sweep(int(center))
    else:
        if ps.coords is None:
            raise ArgumentError("coordinate-backed covered_weight needs coords")
        center = np.asarray(center, dtype=np.float64)
        dists = space.distances(ps.coords, center)
    return float(np.sum(ps.weights[dists <= radius]))
