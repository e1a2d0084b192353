"""Normed vector spaces the coordinate solvers run in."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np

from .errors import ArgumentError


class NormedSpaceOps(ABC):
    """Norm plus the linear operations solvers need.

    Addition, subtraction, and scaling are plain numpy arithmetic;
    subclasses supply the norm.  ``norms`` is the batched primitive
    (row-wise norm of an (m, d) array); the default loops over rows, and
    vector subclasses should vectorize it.
    """

    def __init__(self, d: int):
        if d <= 0:
            raise ArgumentError("dimension must be positive")
        self.d = int(d)

    @abstractmethod
    def norm(self, v: np.ndarray) -> float: ...

    def norms(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.float64)
        return np.array([self.norm(row) for row in vs], dtype=np.float64)

    def distances(self, points: np.ndarray, center: np.ndarray) -> np.ndarray:
        """Distance from every row of points to center."""
        points = np.asarray(points, dtype=np.float64)
        center = np.asarray(center, dtype=np.float64)
        return self.norms(points - center)


class LpSpace(NormedSpaceOps):
    """R^d under the l_p norm, p in [1, inf]."""

    def __init__(self, p: float, d: int):
        super().__init__(d)
        if not (p >= 1.0):
            raise ArgumentError(f"p must be >= 1, got {p}")
        self.p = float(p)

    def norm(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=np.float64)
        return float(self._norms(np.abs(v[None, :]))[0])

    def norms(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.float64)
        return self._norms(np.abs(vs))

    def _norms(self, a: np.ndarray) -> np.ndarray:
        if math.isinf(self.p):
            return a.max(axis=1)
        if self.p == 1.0:
            return a.sum(axis=1)
        if self.p == 2.0:
            return np.sqrt((a * a).sum(axis=1))
        return (a ** self.p).sum(axis=1) ** (1.0 / self.p)


def validate_norm_axioms(ops: NormedSpaceOps, samples: np.ndarray, tol: float = 1e-9) -> None:
    """Spot-check norm axioms on sample vectors; raises on violation.

    Checks norm(0) = 0, absolute homogeneity, and the triangle
    inequality over consecutive sample pairs, all at tolerance tol.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] != ops.d:
        raise ArgumentError("samples must be (m, d)")
    zero = np.zeros(ops.d)
    if abs(ops.norm(zero)) > tol:
        raise ArgumentError("norm of the zero vector is not zero")
    norms = ops.norms(samples)
    if np.any(norms < -tol):
        raise ArgumentError("negative norm")
    for c in (-2.0, 0.5, 3.0):
        scaled = ops.norms(c * samples)
        if np.any(np.abs(scaled - abs(c) * norms) > tol * np.maximum(1.0, norms)):
            raise ArgumentError("norm is not absolutely homogeneous")
    a, b = samples[:-1], samples[1:]
    lhs = ops.norms(a + b)
    rhs = ops.norms(a) + ops.norms(b)
    if np.any(lhs > rhs + tol * np.maximum(1.0, rhs)):
        raise ArgumentError("triangle inequality violated")
