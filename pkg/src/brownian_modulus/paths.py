"""Dyadic tent-series construction of Brownian motion on [0, 1].

A Brownian path is represented through its Levy-Ciesielski (Schauder)
expansion.  With independent standard normals ``x0`` and ``X[j][k]``
(level ``j >= 0``, position ``0 <= k < 2^j``), the level-``n`` truncation is::

    W_n(t) = t * x0 + sum_{j=0}^{n} 2^(-j/2) * sum_k tent(j, k, t) * X[j][k]

where ``tent(j, k, .)`` is the triangular bump supported on the half-open
dyadic cell ``[k 2^-j, (k+1) 2^-j)`` with peak value 1/2 at the cell
midpoint.  ``W_n`` is piecewise linear between consecutive level-``(n+1)``
dyadics, and because every deeper tent vanishes at those dyadics, the node
values ``W_n(k 2^-(n+1))`` already equal the values of the full series
there.  Node values are built once at construction by exact midpoint
refinement::

    W_j(mid) = (W_j(left) + W_j(right)) / 2 + 2^-(j/2) * X[j][k] / 2

Sampling is counter-based and reproducible: coefficient ``x0`` and each
level draw from their own Philox stream keyed by ``(seed, stream, slot)``
with ``x0 -> slot 0`` and level ``j -> slot j+1``.  Normals come from
Box-Muller pairs over 53-bit uniforms, generated pairwise so that any
prefix of a level's coefficient vector is unchanged when more coefficients
(or more levels) are requested later.  Consequences used elsewhere:

* resampling at a deeper truncation level extends the same path (levels
  ``0..n`` reproduce bit-for-bit);
* node arrays restricted to a prefix interval ``[0, upto]`` can be built
  while drawing only the coefficients whose tents meet that interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .modulus import DomainError

__all__ = [
    "HaarCoefficients",
    "TruncatedPath",
    "schauder",
    "sample_coefficients",
    "sample_level_coefficients",
    "sample_node_values_prefix",
    "evaluate_truncated",
    "evaluate_truncated_many",
    "cell_affine",
    "path_to_json",
    "path_from_json",
]

_JSON_SCHEMA_VERSION = 1
_UNIFORM_BITS = 53
_UNIFORM_SCALE = float(2**_UNIFORM_BITS)


def schauder(level: int, position: int, t: float) -> float:
    """Evaluate the tent function ``tent(level, position, t)``.

    The tent is supported on the half-open cell
    ``[position * 2^-level, (position + 1) * 2^-level)``; it rises linearly
    from 0 at the left edge to 1/2 at the midpoint and back to 0, and is 0
    at ``t = 1`` (the right edge of the final cell is outside the half-open
    support).
    """
    level = int(level)
    position = int(position)
    if level < 0:
        raise IndexError(f"tent level must be >= 0, got {level}")
    if not 0 <= position < 2**level:
        raise IndexError(
            f"tent position must satisfy 0 <= position < 2^level, got {position} at level {level}"
        )
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"tent functions are defined on [0, 1], got t={t!r}")
    u = math.ldexp(t, level) - position  # 2^level * t - position, exact
    if u < 0.0 or u >= 1.0:
        return 0.0
    return min(u, 1.0 - u)


def _coefficient_generator(seed: int, stream: int, slot: int) -> np.random.Generator:
    """Philox generator for one coefficient block of one sampled path."""
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed!r}")
    if not 0 <= int(stream) < 2**32:
        raise ValueError(f"stream must fit in an unsigned 32-bit integer, got {stream!r}")
    key = np.array([np.uint64(seed), np.uint64((int(stream) << 32) | int(slot))], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _standard_normals(gen: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` standard normals via Box-Muller with prefix stability.

    Uniform pairs are drawn with shape ``(pairs, 2)`` so the underlying bit
    stream is consumed pairwise; asking for a longer vector later reproduces
    this one as its prefix.
    """
    if count == 0:
        return np.empty(0)
    pairs = (count + 1) // 2
    raw = gen.integers(0, 2**_UNIFORM_BITS, size=(pairs, 2), dtype=np.uint64)
    u = (raw.astype(np.float64) + 0.5) / _UNIFORM_SCALE
    radius = np.sqrt(-2.0 * np.log(u[:, 0]))
    angle = (2.0 * np.pi) * u[:, 1]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def sample_level_coefficients(
    seed: int, level: int, count: int | None = None, *, stream: int = 0
) -> np.ndarray:
    """Sample the first ``count`` tent coefficients of one level.

    ``count`` defaults to the full ``2^level``.  Prefixes are stable: the
    first ``c`` entries do not depend on ``count >= c``.
    """
    full = 2**int(level)
    count = full if count is None else int(count)
    if not 0 <= count <= full:
        raise ValueError(f"count must lie in [0, 2^level], got {count} at level {level}")
    return _standard_normals(_coefficient_generator(seed, stream, int(level) + 1), count)


@dataclass(frozen=True)
class HaarCoefficients:
    """Gaussian coefficients of a level-``level_n`` truncated path.

    ``levels[j]`` holds the ``2^j`` tent coefficients of level ``j`` for
    ``j = 0 .. level_n``; ``linear`` is the coefficient of the ramp ``t``.
    ``seed``/``stream`` record provenance when the coefficients were sampled
    (``seed`` is None for hand-built paths).
    """

    linear: float
    levels: tuple[np.ndarray, ...]
    seed: int | None = None
    stream: int = 0

    def __post_init__(self) -> None:
        coerced = []
        for j, arr in enumerate(self.levels):
            arr = np.asarray(arr, dtype=np.float64)
            if arr.shape != (2**j,):
                raise ValueError(
                    f"level {j} must hold exactly 2^{j} coefficients, got shape {arr.shape}"
                )
            coerced.append(arr)
        object.__setattr__(self, "levels", tuple(coerced))
        object.__setattr__(self, "linear", float(self.linear))

    @property
    def level_n(self) -> int:
        return len(self.levels) - 1


def sample_coefficients(level_n: int, seed: int, *, stream: int = 0) -> HaarCoefficients:
    """Sample all coefficients of a level-``level_n`` truncated path."""
    level_n = int(level_n)
    if level_n < 0:
        raise ValueError(f"truncation level must be >= 0, got {level_n}")
    linear = float(_standard_normals(_coefficient_generator(seed, stream, 0), 1)[0])
    levels = tuple(
        sample_level_coefficients(seed, j, stream=stream) for j in range(level_n + 1)
    )
    return HaarCoefficients(linear=linear, levels=levels, seed=int(seed), stream=int(stream))


def _refined_nodes(linear: float, levels: tuple[np.ndarray, ...]) -> np.ndarray:
    """Exact node values on the level-``(n+1)`` grid by midpoint refinement."""
    nodes = np.array([0.0, linear])
    for j, coeffs in enumerate(levels):
        mids = 0.5 * (nodes[:-1] + nodes[1:]) + (0.5 * 2.0 ** (-j / 2.0)) * coeffs
        merged = np.empty(nodes.size + mids.size)
        merged[0::2] = nodes
        merged[1::2] = mids
        nodes = merged
    return nodes


@dataclass(frozen=True)
class TruncatedPath:
    """A truncated tent-series path with precomputed exact node values.

    ``node_values[i]`` is the exact value of the path (equivalently, of the
    full series) at ``i * width`` where ``width = 2^-(level_n + 1)``; the
    path is affine between consecutive nodes.
    """

    coefficients: HaarCoefficients
    node_values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = 2 ** (self.coefficients.level_n + 1) + 1
        values = np.asarray(self.node_values, dtype=np.float64)
        if values.shape != (expected,):
            raise ValueError(
                f"node_values must have 2^(level_n+1)+1 = {expected} entries, got {values.shape}"
            )
        object.__setattr__(self, "node_values", values)

    @classmethod
    def from_coefficients(cls, coefficients: HaarCoefficients) -> "TruncatedPath":
        return cls(
            coefficients=coefficients,
            node_values=_refined_nodes(coefficients.linear, coefficients.levels),
        )

    @classmethod
    def sample(cls, level_n: int, seed: int, *, stream: int = 0) -> "TruncatedPath":
        return cls.from_coefficients(sample_coefficients(level_n, seed, stream=stream))

    @classmethod
    def zero(cls, level_n: int) -> "TruncatedPath":
        """The identically-zero path (all coefficients zero)."""
        levels = tuple(np.zeros(2**j) for j in range(int(level_n) + 1))
        return cls.from_coefficients(HaarCoefficients(linear=0.0, levels=levels))

    @property
    def level_n(self) -> int:
        return self.coefficients.level_n

    @property
    def width(self) -> float:
        """Cell width of the piecewise-linear grid, ``2^-(level_n+1)``."""
        return 2.0 ** -(self.level_n + 1)

    @property
    def num_cells(self) -> int:
        return 2 ** (self.level_n + 1)

    def extended(self, level_n: int) -> "TruncatedPath":
        """Resample this path at a deeper truncation of the same series.

        Requires sampled provenance.  Levels ``0..self.level_n`` (hence all
        shared node values) are reproduced exactly.
        """
        if self.coefficients.seed is None:
            raise ValueError("cannot extend a path without sampling provenance")
        if level_n < self.level_n:
            raise ValueError(
                f"extension level {level_n} is shallower than current level {self.level_n}"
            )
        return type(self).sample(
            level_n, self.coefficients.seed, stream=self.coefficients.stream
        )

    def interpolate(self, t: float) -> float:
        """Evaluate by affine interpolation between the bracketing nodes."""
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"paths are defined on [0, 1], got t={t!r}")
        scaled = math.ldexp(t, self.level_n + 1)
        cell = min(int(scaled), self.num_cells - 1)
        frac = scaled - cell
        values = self.node_values
        return float(values[cell] * (1.0 - frac) + values[cell + 1] * frac)


def evaluate_truncated(path: TruncatedPath, t: float) -> float:
    """Evaluate the truncated series at ``t`` by direct tent summation.

    At most one tent contributes per level (their supports tile [0, 1)), so
    this costs ``O(level_n)``.  Exact up to float64 rounding and equal to
    the affine interpolation of the node grid.
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"paths are defined on [0, 1], got t={t!r}")
    coeffs = path.coefficients
    total = t * coeffs.linear
    if t >= 1.0:
        return total  # every tent vanishes at t = 1
    for j, level in enumerate(coeffs.levels):
        u = math.ldexp(t, j)
        k = int(u)
        frac = u - k
        total += 2.0 ** (-j / 2.0) * min(frac, 1.0 - frac) * level[k]
    return total


def evaluate_truncated_many(path: TruncatedPath, ts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`evaluate_truncated` over an array of times.

    Sums the tent series directly from the coefficients; it never touches
    the precomputed node grid, so it can serve as an independent check of
    the midpoint-refinement construction.
    """
    ts = np.asarray(ts, dtype=np.float64)
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
        raise DomainError("paths are defined on [0, 1]")
    coeffs = path.coefficients
    total = ts * coeffs.linear
    interior = ts < 1.0
    for j, level in enumerate(coeffs.levels):
        u = np.ldexp(ts, j)
        k = np.minimum(u.astype(np.int64), 2**j - 1)
        frac = u - k
        tent = np.where(interior, np.minimum(frac, 1.0 - frac), 0.0)
        total = total + 2.0 ** (-j / 2.0) * tent * level[k]
    return total


def cell_affine(path: TruncatedPath, cell: int) -> tuple[float, float]:
    """Return ``(slope, intercept)`` of the path on dyadic cell ``cell``.

    The path equals ``slope * t + intercept`` for ``t`` in the closed cell
    ``[cell * width, (cell + 1) * width]``.
    """
    cell = int(cell)
    if not 0 <= cell < path.num_cells:
        raise IndexError(f"cell must lie in [0, {path.num_cells}), got {cell}")
    values = path.node_values
    slope = (values[cell + 1] - values[cell]) * path.num_cells
    intercept = values[cell] - slope * (cell * path.width)
    return float(slope), float(intercept)


def sample_node_values_prefix(
    level_n: int, seed: int, upto: float, *, stream: int = 0
) -> np.ndarray:
    """Exact node values of a sampled path on the prefix grid ``[0, upto]``.

    ``upto`` must be a positive multiple of the node width
    ``2^-(level_n+1)``.  Returns the values at ``0, width, ..., upto`` —
    identical to the corresponding prefix of
    ``TruncatedPath.sample(level_n, seed).node_values`` — while drawing only
    the coefficients whose tents meet ``[0, upto)``.  Each level consumes a
    prefix of its coefficient stream, so consistency with full sampling is
    by construction.
    """
    level_n = int(level_n)
    if level_n < 0:
        raise ValueError(f"truncation level must be >= 0, got {level_n}")
    width_exp = level_n + 1
    upto_cells = upto * 2.0**width_exp
    if not 0.0 < upto <= 1.0 or abs(upto_cells - round(upto_cells)) > 1e-9:
        raise ValueError(
            f"upto must be a positive multiple of 2^-{width_exp} in (0, 1], got {upto!r}"
        )
    upto_cells = round(upto_cells)

    linear = float(_standard_normals(_coefficient_generator(seed, stream, 0), 1)[0])
    nodes = np.array([0.0, linear])
    cover_cells = 1  # current grid covers [0, cover_cells * 2^-(j+1)] after level j
    for j in range(level_n + 1):
        ncells = nodes.size - 1
        coeffs = sample_level_coefficients(seed, j, ncells, stream=stream)
        mids = 0.5 * (nodes[:-1] + nodes[1:]) + (0.5 * 2.0 ** (-j / 2.0)) * coeffs
        merged = np.empty(nodes.size + mids.size)
        merged[0::2] = nodes
        merged[1::2] = mids
        nodes = merged
        cover_cells = 2 * ncells
        # cells of the refined grid needed to cover [0, upto]
        needed = -(-upto_cells // 2 ** (width_exp - 1 - j))
        if needed < cover_cells:
            nodes = nodes[: needed + 1]
    return nodes[: upto_cells + 1]


def path_to_json(path: TruncatedPath) -> str:
    """Serialize a path's coefficients to JSON.

    Fields (frozen): ``schema_version``, ``seed``, ``stream``, ``level_n``,
    ``x0``, ``levels`` (list of per-level coefficient lists).  Node values
    are reconstructed on load, not stored.
    """
    coeffs = path.coefficients
    record = {
        "schema_version": _JSON_SCHEMA_VERSION,
        "seed": coeffs.seed,
        "stream": coeffs.stream,
        "level_n": coeffs.level_n,
        "x0": coeffs.linear,
        "levels": [level.tolist() for level in coeffs.levels],
    }
    return json.dumps(record)


def path_from_json(text: str) -> TruncatedPath:
    """Inverse of :func:`path_to_json`; round-trips bit-exactly."""
    record = json.loads(text)
    version = record.get("schema_version")
    if version != _JSON_SCHEMA_VERSION:
        raise ValueError(f"unsupported path schema_version: {version!r}")
    levels = tuple(np.asarray(level, dtype=np.float64) for level in record["levels"])
    if len(levels) != record["level_n"] + 1:
        raise ValueError("levels list inconsistent with level_n")
    coeffs = HaarCoefficients(
        linear=record["x0"],
        levels=levels,
        seed=record["seed"],
        stream=record.get("stream", 0),
    )
    return TruncatedPath.from_coefficients(coeffs)
