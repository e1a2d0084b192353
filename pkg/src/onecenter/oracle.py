"""Distance oracles with query counting.

Metric-space solvers see points only through an oracle; the query
counter is the complexity measure those solvers are benchmarked on.
Each scalar distance evaluation costs one query and a batched row of k
distances costs k.  There is deliberately no global memoization: counts
must reflect what a from-scratch run would pay.  ``MemoizedOracle``
exists separately for callers that want caching and know it skews
counts.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod

import numpy as np

from .errors import ArgumentError


class DistanceOracle(ABC):
    """Abstract pairwise-distance access over points 0..size-1."""

    def __init__(self, size: int):
        if size <= 0:
            raise ArgumentError("oracle size must be positive")
        self._size = int(size)
        self._queries = 0
        self._lock = threading.Lock()

    @property
    def size(self) -> int:
        return self._size

    @property
    def query_count(self) -> int:
        """Total scalar distance evaluations so far (thread-safe)."""
        with self._lock:
            return self._queries

    def reset_query_count(self) -> None:
        with self._lock:
            self._queries = 0

    def _bump(self, k: int) -> None:
        with self._lock:
            self._queries += k

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self._size:
            raise ArgumentError(f"point index {i} out of range [0, {self._size})")

    @abstractmethod
    def _dist_impl(self, i: int, j: int) -> float: ...

    def _dist_many_impl(self, i: int, idx: np.ndarray) -> np.ndarray:
        return np.array([self._dist_impl(i, int(j)) for j in idx], dtype=np.float64)

    def dist(self, i: int, j: int) -> float:
        """Distance between points i and j; costs exactly one query."""
        self._check_index(i)
        self._check_index(j)
        self._bump(1)
        return float(self._dist_impl(i, j))

    def dist_many(self, i: int, idx) -> np.ndarray:
        """Distances from i to each index in idx; costs len(idx) queries."""
        self._check_index(i)
        idx = np.asarray(idx, dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= self._size):
            raise ArgumentError("point index out of range")
        self._bump(int(idx.size))
        return self._dist_many_impl(i, idx)

    def sweep(self, i: int) -> np.ndarray:
        """Distances from i to every point; costs size queries."""
        return self.dist_many(i, np.arange(self._size))


def _triangle_violation(m: np.ndarray) -> float:
    # max over (i, j, k) of d(i,j) - d(i,k) - d(k,j), chunked over k to
    # keep memory at O(n^2)
    worst = 0.0
    n = m.shape[0]
    for k in range(n):
        slack = m - (m[:, k : k + 1] + m[k : k + 1, :])
        worst = max(worst, float(slack.max()))
    return worst


class MatrixOracle(DistanceOracle):
    """Oracle backed by an explicit n x n distance matrix.

    Validation requires a symmetric, nonnegative matrix with a zero
    diagonal.  The O(n^3) triangle-inequality check (tolerance 1e-9)
    runs when ``validate='full'``, or under ``'auto'`` only for n <= 512.
    """

    TRIANGLE_TOL = 1e-9
    AUTO_TRIANGLE_LIMIT = 512

    def __init__(self, matrix, validate: str = "auto"):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ArgumentError("distance matrix must be square")
        super().__init__(matrix.shape[0])
        if validate not in ("auto", "full", "none"):
            raise ArgumentError("validate must be 'auto', 'full', or 'none'")
        if validate != "none":
            if not np.all(np.isfinite(matrix)):
                raise ArgumentError("distance matrix must be finite")
            if np.any(matrix < 0):
                raise ArgumentError("distances must be nonnegative")
            if np.any(np.diagonal(matrix) != 0):
                raise ArgumentError("distance matrix diagonal must be zero")
            if not np.array_equal(matrix, matrix.T):
                raise ArgumentError("distance matrix must be symmetric")
            if validate == "full" or matrix.shape[0] <= self.AUTO_TRIANGLE_LIMIT:
                worst = _triangle_violation(matrix)
                if worst > self.TRIANGLE_TOL:
                    raise ArgumentError(
                        f"triangle inequality violated by {worst:.3e}"
                    )
        matrix.setflags(write=False)
        self.matrix = matrix

    def _dist_impl(self, i: int, j: int) -> float:
        return self.matrix[i, j]

    def _dist_many_impl(self, i: int, idx: np.ndarray) -> np.ndarray:
        return self.matrix[i, idx].astype(np.float64, copy=True)


class CallableOracle(DistanceOracle):
    """Oracle over an arbitrary distance function f(i, j) -> float.

    Useful for hiding coordinates behind distance-only access; no
    validation is (or can be) performed.
    """

    def __init__(self, fn, size: int):
        super().__init__(size)
        self._fn = fn

    def _dist_impl(self, i: int, j: int) -> float:
        return float(self._fn(i, j))


class PaddedOracle(DistanceOracle):
    """View of a base oracle extended to ``size`` points.

    Indices past the base size alias point 0; queries are charged to the
    base oracle's counter so instrumentation sees the true cost.
    """

    def __init__(self, base: DistanceOracle, size: int):
        if size < base.size:
            raise ArgumentError("padded size must be >= base size")
        super().__init__(size)
        self.base = base

    def _map(self, i: int) -> int:
        return i if i < self.base.size else 0

    @property
    def query_count(self) -> int:
        return self.base.query_count

    def reset_query_count(self) -> None:
        self.base.reset_query_count()

    def dist(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return self.base.dist(self._map(i), self._map(j))

    def dist_many(self, i: int, idx) -> np.ndarray:
        self._check_index(i)
        idx = np.asarray(idx, dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise ArgumentError("point index out of range")
        mapped = np.where(idx < self.base.size, idx, 0)
        return self.base.dist_many(self._map(i), mapped)

    def _dist_impl(self, i: int, j: int) -> float:  # pragma: no cover
        return self.base._dist_impl(self._map(i), self._map(j))


class MemoizedOracle(DistanceOracle):
    """Caching wrapper: repeated pairs cost nothing after the first hit.

    Counts reflect cache misses only, so they understate from-scratch
    complexity; never use this when measuring query bounds.
    """

    def __init__(self, base: DistanceOracle):
        super().__init__(base.size)
        self.base = base
        self._cache: dict[tuple[int, int], float] = {}

    def _dist_impl(self, i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        if key not in self._cache:
            self._cache[key] = self.base.dist(*key)
        return self._cache[key]

    def dist(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return float(self._dist_impl(i, j))

    def dist_many(self, i: int, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.intp)
        return np.array([self._dist_impl(i, int(j)) for j in idx], dtype=np.float64)

    @property
    def query_count(self) -> int:
        return self.base.query_count
