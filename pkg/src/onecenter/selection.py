"""Weighted selection primitives.

Everything in this library reduces to one question: given values with
nonnegative weights, what is the smallest value v such that the total
weight of entries <= v reaches a target?  ``weighted_median`` and
``weighted_quantile_radius`` are thin wrappers around that selection.

Two interchangeable backends answer it:

* a compiled median-of-medians kernel (``onecenter._kernels``),
  worst-case O(n) and allocation-light;
* a numpy stable-argsort + cumsum scan, O(n log n), used when the
  extension is unavailable or when ``ONECENTER_KERNEL=python`` is set.

Both are fully deterministic.  ``benchmarks/kernel_bench.py`` compares
them head to head.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import ArgumentError

try:
    from ._kernels import weighted_select as _kernel_select
except ImportError:  # extension not built; numpy path takes over
    _kernel_select = None

_BACKEND_ENV = "ONECENTER_KERNEL"


def _pick_backend() -> str:
    requested = os.environ.get(_BACKEND_ENV, "auto").strip().lower()
    if requested in ("", "auto"):
        return "cython" if _kernel_select is not None else "numpy"
    if requested == "cython":
        if _kernel_select is None:
            raise ImportError(
                f"{_BACKEND_ENV}=cython but the compiled kernel is not available"
            )
        return "cython"
    if requested in ("python", "numpy"):
        return "numpy"
    raise ArgumentError(f"unknown {_BACKEND_ENV} value: {requested!r}")


_ACTIVE_BACKEND = _pick_backend()


def kernel_backend() -> str:
    """Name of the selection backend chosen at import: 'cython' or 'numpy'."""
    return _ACTIVE_BACKEND


def _select_sorted(values: np.ndarray, weights: np.ndarray, target: float) -> float:
    order = np.argsort(values, kind="stable")
    cum = np.cumsum(weights[order])
    idx = int(np.searchsorted(cum, target, side="left"))
    if idx >= len(cum):
        idx = len(cum) - 1
    return float(values[order[idx]])


def _select(values: np.ndarray, weights: np.ndarray, target: float) -> float:
    # Preconditions (validated by the public wrappers): nonempty, finite,
    # weights >= 0, 0 < target <= total weight.
    if _ACTIVE_BACKEND == "cython":
        return _kernel_select(values, weights, target)
    return _select_sorted(values, weights, target)


def _clean(values, weights) -> tuple[np.ndarray, np.ndarray]:
    v = np.ascontiguousarray(values, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    if v.ndim != 1 or w.ndim != 1:
        raise ArgumentError("values and weights must be one-dimensional")
    if v.shape[0] != w.shape[0]:
        raise ArgumentError("values and weights differ in length")
    if v.shape[0] == 0:
        raise ArgumentError("empty input")
    if not np.all(np.isfinite(v)):
        raise ArgumentError("values must be finite")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ArgumentError("weights must be finite and nonnegative")
    return v, w


def weighted_median(values, weights) -> float:
    """Smallest value v whose cumulative weight reaches half the total.

    With uniform weights this is the classical lower median.
    """
    v, w = _clean(values, weights)
    total = float(np.sum(w))
    if total <= 0.0:
        raise ArgumentError("total weight must be positive")
    return _select(v, w, 0.5 * total)

def smallest_radius_at_weight(distances, weights, target_weight: float) -> float:
    """Smallest d with total weight of entries <= d reaching ``target_weight``.

    Absolute-threshold variant used by the peeling solvers.  Returns
    ``inf`` when the target exceeds the total available weight, and the
    minimum entry when the target is zero or negative.
    """
    v, w = _clean(distances, weights)
    total = float(np.sum(w))
    if target_weight > total:
        return math.inf
    if target_weight <= 0.0:
        return float(np.min(v))
    return _select(v, w, float(target_weight))


def weighted_quantile_radius(distances, weights, alpha: float) -> float:
    """Smallest d such that entries <= d carry at least alpha of the weight."""
    if not (0.0 < alpha <= 1.0):
        raise ArgumentError(f"alpha must be in (0, 1], got {alpha}")
    v, w = _clean(distances, weights)
    total = float(np.sum(w))
    if total <= 0.0:
        raise ArgumentError("total weight must be positive")
    target = alpha * total
    if target > total:  # unreachable for alpha <= 1; kept as an explicit guard
        return math.inf
    return _select(v, w, target)
