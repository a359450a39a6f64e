"""Compiled inner loops for supremum scans.

A handful of tight loops dominate the exact-supremum and verification
workloads; everything else in the package is vectorized numpy.  They are
isolated here so the surrounding modules stay pure-Python and the kernels
stay trivial to audit:

* :func:`per_offset_abs_max` — for each node/grid offset ``d``, the maximum
  of ``|v[i+d] - v[i]|``; the workhorse of the independent grid oracle.
* :func:`sliding_range_max` — maximum over all windows of ``window + 1``
  consecutive values of (window max - window min), via monotonic deques.
* :func:`pair_exceeds_thresholds` — earliest-exit existence test for a pair
  at offset ``d`` in ``[d_lo, d_hi]`` with ``|v[i+d] - v[i]|`` strictly
  above ``thresholds[d - d_lo]``; the base case of the branch-and-bound
  gap scan.
* :func:`pairwise_extrema` / :func:`windowed_range_max` — block max/min
  table construction and windowed range queries for the branch-and-bound
  pruning bounds.

All kernels are allocation-free after warm-up and deterministic (the
parallel kernel writes disjoint output slots).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = [
    "per_offset_abs_max",
    "sliding_range_max",
    "pair_exceeds_thresholds",
    "pairwise_extrema",
    "windowed_range_max",
]


@njit(cache=True, parallel=True)
def per_offset_abs_max(values: np.ndarray, max_offset: int) -> np.ndarray:
    """Return ``out`` with ``out[d] = max_i |values[i+d] - values[i]|``.

    ``out`` has ``max_offset + 1`` entries; ``out[0]`` is 0.  Offsets with
    no admissible pair (``d >= len(values)``) report 0.
    """
    n = values.size
    out = np.zeros(max_offset + 1)
    for d in prange(1, max_offset + 1):
        best = 0.0
        for i in range(n - d):
            diff = values[i + d] - values[i]
            if diff < 0.0:
                diff = -diff
            if diff > best:
                best = diff
        out[d] = best
    return out


@njit(cache=True)
def sliding_range_max(values: np.ndarray, window: int) -> float:
    """Max over ``i`` of ``max(values[i:i+window+1]) - min(values[i:i+window+1])``.

    Classic two-deque sliding extrema in O(n).  ``window`` is the offset
    span, so each window holds ``window + 1`` values; windows are clipped
    at the right edge (equivalently: the result is the maximum of
    ``|values[j] - values[i]|`` over ``0 < j - i <= window``).
    """
    n = values.size
    if n < 2:
        return 0.0
    if window >= n - 1:
        return values.max() - values.min()
    max_idx = np.empty(n, dtype=np.int64)
    min_idx = np.empty(n, dtype=np.int64)
    max_lo = max_hi = 0  # deque in max_idx[max_lo:max_hi]
    min_lo = min_hi = 0
    best = 0.0
    for j in range(n):
        # drop indices that left the window [j - window, j]
        while max_lo < max_hi and max_idx[max_lo] < j - window:
            max_lo += 1
        while min_lo < min_hi and min_idx[min_lo] < j - window:
            min_lo += 1
        v = values[j]
        while max_lo < max_hi and values[max_idx[max_hi - 1]] <= v:
            max_hi -= 1
        max_idx[max_hi] = j
        max_hi += 1
        while min_lo < min_hi and values[min_idx[min_hi - 1]] >= v:
            min_hi -= 1
        min_idx[min_hi] = j
        min_hi += 1
        if j >= 1:
            span = values[max_idx[max_lo]] - values[min_idx[min_lo]]
            if span > best:
                best = span
    return best


@njit(cache=True)
def pairwise_extrema(
    prev_max: np.ndarray, prev_min: np.ndarray, out_max: np.ndarray, out_min: np.ndarray
) -> None:
    """Halve block max/min tables: ``out[i] = extremum(prev[2i], prev[2i+1])``.

    ``out_max``/``out_min`` must have ``ceil(len(prev) / 2)`` entries; an odd
    tail block repeats its single child, which adds no new extremes.  Passing
    the raw value array as both ``prev`` tables builds the base (block-2)
    level.
    """
    m = prev_max.size
    half = out_max.size
    for i in range(half):
        a = 2 * i
        b = a + 1
        if b >= m:
            b = a
        hi = prev_max[a]
        if prev_max[b] > hi:
            hi = prev_max[b]
        out_max[i] = hi
        lo = prev_min[a]
        if prev_min[b] < lo:
            lo = prev_min[b]
        out_min[i] = lo


@njit(cache=True)
def windowed_range_max(maxima: np.ndarray, minima: np.ndarray, span: int) -> float:
    """Max over ``i`` of ``max(maxima[i:i+span]) - min(minima[i:i+span])``.

    ``span`` is small (usually 2), so the direct inner loop beats a deque.
    Requires ``span <= len(maxima)``.
    """
    count = maxima.size - span + 1
    best = -np.inf
    for i in range(count):
        hi = maxima[i]
        lo = minima[i]
        for k in range(1, span):
            if maxima[i + k] > hi:
                hi = maxima[i + k]
            if minima[i + k] < lo:
                lo = minima[i + k]
        spread = hi - lo
        if spread > best:
            best = spread
    return best


@njit(cache=True)
def pair_exceeds_thresholds(
    values: np.ndarray, d_lo: int, d_hi: int, thresholds: np.ndarray
) -> bool:
    """True if ``|values[i+d] - values[i]| > thresholds[d - d_lo]`` for some pair.

    Strict comparison; exits on the first witness.
    """
    n = values.size
    for d in range(d_lo, d_hi + 1):
        if d >= n:
            break
        threshold = thresholds[d - d_lo]
        for i in range(n - d):
            diff = values[i + d] - values[i]
            if diff > threshold or -diff > threshold:
                return True
    return False
