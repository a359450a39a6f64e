"""Exact suprema of modulus-normalized statistics over truncated paths.

A level-``n`` truncated path is piecewise linear on the ``2^(n+1)`` dyadic
cells of width ``w = 2^-(n+1)``.  Over such a path, each supremum computed
here is a finite maximum over an explicitly enumerable candidate set, so
the values are exact up to float64 rounding — no grids, no tolerance knobs.

Global (two-point) statistics
-----------------------------
For a denominator ``D(t, s) = G(gamma)`` depending only on the gap
``gamma = s - t`` (kinds ``gap_global`` with ``G = g``,
``gap_global_corrected`` with ``G = g * r``) or constant
(``fixed_global`` with ``G = g(delta) r(delta)``), the statistic is::

    sup { |W(s) - W(t)| / D(t, s) : 0 <= t < s <= 1, 0 < s - t <= delta }.

Candidate completeness argument.  Restrict (t, s) to one pair of cells:
the feasible set is a convex polygon (see :func:`cell_pair_polygon`) and
``W(s) - W(t)`` is affine there, so for fixed gap the numerator is
maximized at the boundary.  Along an edge of fixed gamma the ratio is
affine over ``1/G`` (constant), hence maximized at edge endpoints, which
are polygon vertices.  Along the sliding edges (t or s pinned at a node,
gamma varying) the ratio has the form ``(c * gamma + A) / G(gamma)`` with
``A`` the increment accumulated at the pinned endpoint.  Its derivative
vanishes where ``c (G - gamma G') = A G'``; for ``G = g`` one computes
``g - gamma g' = g (L + 1) / (2 L)`` with ``L = ln(1/gamma)``, which is
increasing in gamma, while ``A g'`` is decreasing, and the corrected
``G = g r`` adds the increasing term ``2.65 sqrt(gamma/2)`` to
``G - gamma G'``; either way the ratio is decreasing-then-increasing in
gamma and is maximized at the edge's gamma-endpoints.  Those endpoints are
(a) node pairs — both coordinates on the dyadic grid, gap a multiple of
``w`` — or (b) pairs at the extreme gap ``gamma = delta`` anchored at a
node (``(i w, i w + delta)`` or ``(i w - delta, i w)``).  The engines scan
exactly these two families.  When ``delta`` is itself a multiple of ``w``
family (b) is a subset of (a).

Local (one-point) statistics
----------------------------
For ``D(t) = h(t)`` (``local_plain``) or ``h(t) s(t, epsilon)``
(``local_corrected``), the statistic over ``(0, delta]`` is::

    sup { W(t) / D(t) : 0 < t <= delta }        (signed, one-sided).

On a cell where ``W`` is affine, ``W(t)/D(t) = (slope * t + b)/D(t)``;
since ``t/D(t)`` (slope part) and ``1/D(t)`` (intercept part) are both
monotone in ``t`` on ``(0, 2^-4)`` (``t/h`` increasing, ``1/h`` and
``1/(h s)`` decreasing, ``t/(h s)``'s failure of monotonicity is immaterial
as the two parts are handled separately: a ratio of an affine function to a
positive function whose reciprocal is convex on an interval attains its
maximum at the interval ends — here simply: the candidate set below is the
zero-dimensional boundary of the cells, and maxima of ``(a t + b)/D(t)``
over a cell interior would require ``(a t + b)``'s sign pattern to make the
derivative vanish; differentiating, interior critical points satisfy
``a (D - t D') = b D'`` and a direct sign check on ``(0, 2^-4)`` shows
``D - t D' > 0`` and ``D' > 0``, so with ``a, b`` of arbitrary sign there
is at most one interior critical point and it is a minimum of the ratio
when the ratio is positive there; positive maxima therefore sit at cell
endpoints, while non-positive suprema are dominated by the limit 0 at
``t -> 0+``).  Candidates: the nodes in ``(0, delta]`` plus ``delta``
itself; the supremum additionally majorizes the one-sided limit 0 at 0+,
so a path that is negative on the whole prefix has supremum exactly 0,
approached but not attained.

The block statistic (:func:`block_sup`) is the same ratio with plain
``h`` over one dyadic block ``[2^-(m+1), 2^-m)``; no limit at 0 applies,
so its value can be negative, and a supremum realized only at the excluded
right edge is reported with ``attained=False``.

Independent grid oracle
-----------------------
:func:`grid_oracle` recomputes each statistic by brute force on a uniform
grid, evaluating the path by direct tent-series summation
(:func:`~brownian_modulus.paths.evaluate_truncated_many`) — it shares no
code path with the node/candidate engines.  The oracle is a guaranteed
lower bound for the exact value, and :func:`oracle_slack` returns a
certified upper bound for ``exact - oracle``:

* gap kinds: any feasible pair moves inward to grid points at distance
  ``<= res`` each, losing at most ``2 Lambda res`` of numerator
  (``Lambda`` = max |cell slope|) while the gap stays in ``[gamma - 2 res,
  gamma]``; if the optimal gap is ``< 2 res`` the whole value is at most
  ``Lambda gamma / G(gamma) <= 2 Lambda res / G(2 res)`` because
  ``gamma / G(gamma)`` is increasing.  Hence
  ``slack = 2 Lambda res / min(G(2 res), G(delta))`` (the min covers
  ``G``'s unimodality when ``delta > 1/e``).
* fixed kind: constant denominator, ``slack = 2 Lambda res / (g(delta)
  r(delta))``.
* local kinds: for an optimizer ``t* >= res``, the grid point ``t0`` just
  below loses at most ``Lambda res`` of numerator and only shrinks the
  denominator; for ``t* < res``, ``W(t*)/D(t*) <= Lambda t*/h(t*) <=``
  ``Lambda res/h(res)`` since ``t/h`` is increasing and ``s >= 1``.
  Hence ``slack = Lambda res / h(res)`` (the oracle includes the limit
  value 0, which covers paths negative at every grid point).
* block: with ``a`` the block's left edge, ``|W(t0)/h(t0) - W(t*)/h(t*)|
  <= Lambda res / h(a) + Vmax res h'(a) / h(a)^2`` where ``Vmax`` bounds
  ``|W|`` on the block and ``h'(t) = (LL(1/t) - 1/L(1/t)) / h(t)`` is
  positive and decreasing there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import _kernels
from .bounds import m_of_epsilon
from .modulus import (
    DomainError,
    corrected_global_modulus,
    global_correction,
    global_modulus,
    local_correction,
    local_modulus,
)
from .paths import TruncatedPath, evaluate_truncated_many

__all__ = [
    "DenominatorKind",
    "GAP_GLOBAL",
    "FIXED_GLOBAL",
    "GAP_GLOBAL_CORRECTED",
    "LOCAL_PLAIN",
    "BandSupremum",
    "LevelMismatchError",
    "local_corrected",
    "global_band_sup",
    "uniform_band_sup",
    "local_sup",
    "block_sup",
    "cell_pair_polygon",
    "grid_oracle",
    "oracle_slack",
    "block_grid_oracle",
    "block_oracle_slack",
    "grid_oracle_global_many",
    "fixed_gap_range_statistic",
    "gap_pairs_exceed",
    "range_spread_upper",
]

_GLOBAL_KIND_IDS = ("gap_global", "fixed_global", "gap_global_corrected")
_LOCAL_KIND_IDS = ("local_plain", "local_corrected")
_ALIGN_TOL = 1e-9


class LevelMismatchError(ValueError):
    """Path truncation level does not match the level required by a statistic."""


@dataclass(frozen=True)
class DenominatorKind:
    """Which normalizer divides the increment (see module docstring).

    ``epsilon`` is present exactly for ``local_corrected``, where the
    correction ``s(t, epsilon)`` needs it.
    """

    kind: str
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _GLOBAL_KIND_IDS + _LOCAL_KIND_IDS:
            raise ValueError(f"unknown denominator kind {self.kind!r}")
        if self.kind == "local_corrected":
            if self.epsilon is None:
                raise ValueError("local_corrected requires epsilon")
            if not self.epsilon > 0.0:
                raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")
            object.__setattr__(self, "epsilon", float(self.epsilon))
        elif self.epsilon is not None:
            raise ValueError(f"kind {self.kind!r} does not take epsilon")

    @property
    def is_global(self) -> bool:
        return self.kind in _GLOBAL_KIND_IDS

    @property
    def is_local(self) -> bool:
        return self.kind in _LOCAL_KIND_IDS

    @property
    def gap_dependent(self) -> bool:
        """True when the denominator varies with the pair gap."""
        return self.kind in ("gap_global", "gap_global_corrected")

    @classmethod
    def from_id(cls, kind: str, epsilon: float | None = None) -> "DenominatorKind":
        return cls(kind=kind, epsilon=epsilon)

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        return out


GAP_GLOBAL = DenominatorKind("gap_global")
FIXED_GLOBAL = DenominatorKind("fixed_global")
GAP_GLOBAL_CORRECTED = DenominatorKind("gap_global_corrected")
LOCAL_PLAIN = DenominatorKind("local_plain")


def local_corrected(epsilon: float) -> DenominatorKind:
    """The ``h(t) s(t, epsilon)`` denominator."""
    return DenominatorKind("local_corrected", epsilon=float(epsilon))


@dataclass(frozen=True)
class BandSupremum:
    """An exactly computed supremum with its witness.

    ``arg_t``/``arg_s`` locate the maximizing pair (equal for one-point
    statistics); ``cell_k`` is the dyadic cell containing ``arg_t`` under
    the half-open convention (right edge 1 assigned to the last cell) and
    ``cell_l`` the cell offset to ``arg_s``.  ``attained`` is False when the
    supremum is only approached — at ``t -> 0+`` for a local statistic that
    is negative on its whole domain, or at the excluded right edge of a
    block — in which case the witness records the approached point and the
    value must not be re-evaluated there.
    """

    value: float
    arg_t: float
    arg_s: float
    cell_k: int
    cell_l: int
    kind: DenominatorKind
    attained: bool = True

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"supremum must be finite, got {self.value!r}")
        if not 0.0 <= self.arg_t <= self.arg_s <= 1.0:
            raise ValueError(
                f"witness must satisfy 0 <= arg_t <= arg_s <= 1, got ({self.arg_t!r}, {self.arg_s!r})"
            )

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "value": self.value,
            "arg_t": self.arg_t,
            "arg_s": self.arg_s,
            "cell_k": self.cell_k,
            "cell_l": self.cell_l,
            "kind": self.kind.kind,
            "attained": self.attained,
        }
        if self.kind.epsilon is not None:
            out["epsilon"] = self.kind.epsilon
        return out


# --------------------------------------------------------------------------
# denominators


def _gap_denominator_scalar(kind: DenominatorKind, gap: float, delta: float) -> float:
    if kind.kind == "gap_global":
        return global_modulus(gap)
    if kind.kind == "gap_global_corrected":
        return corrected_global_modulus(gap)
    return global_modulus(delta) * global_correction(delta)


def _gap_denominator_array(kind: DenominatorKind, gaps: np.ndarray, delta: float) -> np.ndarray:
    gaps = np.asarray(gaps, dtype=np.float64)
    if kind.kind == "fixed_global":
        return np.full(gaps.shape, global_modulus(delta) * global_correction(delta))
    log_term = np.log(1.0 / gaps)
    base = np.sqrt(2.0 * gaps)
    if kind.kind == "gap_global":
        return base * np.sqrt(log_term)
    return base * (np.sqrt(log_term) + 2.65)


def _local_denominator_array(kind: DenominatorKind, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=np.float64)
    log_term = np.log(1.0 / ts)
    plain = np.sqrt(2.0 * ts * np.log(log_term))
    if kind.kind == "local_plain":
        return plain
    eps = kind.epsilon
    if eps <= 1.0:
        branch = np.maximum(np.sqrt(np.log(log_term)), np.sqrt(log_term ** (eps / 2.0)))
        corr = 1.0 + 3.61 / (math.sqrt(eps) * branch)
    else:
        corr = 1.0 + 3.61 / log_term ** (eps / 4.0)
    return plain * corr


def _check_global_delta(kind: DenominatorKind, delta: float) -> None:
    if kind.kind in ("fixed_global", "gap_global_corrected"):
        if not 0.0 < delta <= 2.0**-5:
            raise DomainError(
                f"kind {kind.kind!r} needs 0 < delta <= 2^-5, got {delta!r}"
            )
    elif not 0.0 < delta < 1.0:
        raise DomainError(f"kind 'gap_global' needs 0 < delta < 1, got {delta!r}")


def _interp_nodes(values: np.ndarray, num_cells: int, ts: np.ndarray) -> np.ndarray:
    """Exact affine interpolation of the node grid at arbitrary times."""
    scaled = np.asarray(ts, dtype=np.float64) * num_cells
    cells = np.minimum(scaled.astype(np.int64), num_cells - 1)
    frac = scaled - cells
    return values[cells] * (1.0 - frac) + values[cells + 1] * frac


def _cell_of(t: float, num_cells: int) -> int:
    return min(int(t * num_cells), num_cells - 1)


# --------------------------------------------------------------------------
# exact engines


def global_band_sup(path: TruncatedPath, delta: float, kind: DenominatorKind) -> BandSupremum:
    """Exact supremum of a two-point statistic over gaps in ``(0, delta]``.

    Scans the complete candidate set (module docstring): node pairs at every
    gap ``d * w <= delta``, then — when ``delta`` is not a node multiple —
    the gap-``delta`` pairs anchored at a node on the left, then on the
    right.  Ties in the maximum are resolved by the first candidate in that
    scan order (gap ascending, position ascending within a gap), which
    makes the witness deterministic.
    """
    delta = float(delta)
    if not kind.is_global:
        raise ValueError(f"global_band_sup needs a global kind, got {kind.kind!r}")
    _check_global_delta(kind, delta)

    values = path.node_values
    num_cells = path.num_cells
    width = path.width
    max_nodes = delta / width
    node_gaps = min(int(max_nodes + _ALIGN_TOL), num_cells)
    aligned = abs(max_nodes - round(max_nodes)) <= _ALIGN_TOL * max(1.0, max_nodes)

    best = -math.inf
    witness: tuple[float, float] = (0.0, width)
    for d in range(1, node_gaps + 1):
        diffs = np.abs(values[d:] - values[:-d])
        i = int(np.argmax(diffs))
        ratio = diffs[i] / _gap_denominator_scalar(kind, d * width, delta)
        if ratio > best:
            best = ratio
            witness = (i * width, (i + d) * width)

    if not aligned:
        denominator = _gap_denominator_scalar(kind, delta, delta)
        # right-anchored: (i w, i w + delta)
        count = int((1.0 - delta) / width + _ALIGN_TOL)
        lefts = np.arange(count + 1) * width
        diffs = np.abs(_interp_nodes(values, num_cells, lefts + delta) - values[: count + 1])
        i = int(np.argmax(diffs))
        if diffs.size and diffs[i] / denominator > best:
            best = diffs[i] / denominator
            witness = (lefts[i], lefts[i] + delta)
        # left-anchored: (i w - delta, i w)
        start = int(math.ceil(delta / width - _ALIGN_TOL))
        rights = np.arange(start, num_cells + 1) * width
        diffs = np.abs(values[start:] - _interp_nodes(values, num_cells, rights - delta))
        i = int(np.argmax(diffs))
        if diffs.size and diffs[i] / denominator > best:
            best = diffs[i] / denominator
            witness = (rights[i] - delta, rights[i])

    if not math.isfinite(best):  # unreachable: node_gaps >= 1 or straddles exist
        raise DomainError(f"delta {delta!r} admits no candidate pair at level {path.level_n}")
    arg_t, arg_s = witness
    cell_k = _cell_of(arg_t, num_cells)
    return BandSupremum(
        value=float(best),
        arg_t=float(arg_t),
        arg_s=float(arg_s),
        cell_k=cell_k,
        cell_l=_cell_of(arg_s, num_cells) - cell_k,
        kind=kind,
        attained=True,
    )


def uniform_band_sup(path: TruncatedPath, delta0: float) -> BandSupremum:
    """Exact supremum of the gap-corrected statistic over gaps up to ``delta0``.

    This is exactly ``global_band_sup`` with the ``gap_global_corrected``
    kind: the supremum over ``delta <= delta0`` of the fixed-``delta``
    statistics coincides with the single scan because for each candidate
    pair the best feasible ``delta`` is its own gap (``g(x) r(x)`` is
    increasing on the domain), which the gap-dependent denominator already
    applies.  Domain: ``0 < delta0 <= 2^-5``.
    """
    return global_band_sup(path, delta0, GAP_GLOBAL_CORRECTED)


def local_sup(path: TruncatedPath, delta: float, kind: DenominatorKind) -> BandSupremum:
    """Exact one-sided supremum of ``W(t)/D(t)`` over ``0 < t <= delta``.

    Domain: ``0 < delta <= 2^-4`` for ``local_plain``; strictly
    ``delta < 2^-4`` for ``local_corrected`` (domain of ``s``).  The
    supremum majorizes the ``t -> 0+`` limit 0; a path negative on the
    whole prefix therefore has value exactly 0 with ``attained=False``.
    """
    delta = float(delta)
    if not kind.is_local:
        raise ValueError(f"local_sup needs a local kind, got {kind.kind!r}")
    if kind.kind == "local_corrected":
        if not 0.0 < delta < 2.0**-4:
            raise DomainError(f"local_corrected needs 0 < delta < 2^-4, got {delta!r}")
    elif not 0.0 < delta <= 2.0**-4:
        raise DomainError(f"local_plain needs 0 < delta <= 2^-4, got {delta!r}")

    values = path.node_values
    width = path.width
    num_cells = path.num_cells
    max_nodes = delta / width
    node_count = int(max_nodes + _ALIGN_TOL)
    aligned = abs(max_nodes - round(max_nodes)) <= _ALIGN_TOL * max(1.0, max_nodes)

    ts = (np.arange(1, node_count + 1) * width).tolist()
    heights = values[1 : node_count + 1].tolist()
    if not aligned:
        ts.append(delta)
        heights.append(float(_interp_nodes(values, num_cells, np.array([delta]))[0]))
    ts_arr = np.array(ts)
    ratios = np.array(heights) / _local_denominator_array(kind, ts_arr)

    i = int(np.argmax(ratios))
    if ratios[i] >= 0.0:
        arg = float(ts_arr[i])
        cell_k = _cell_of(arg, num_cells)
        return BandSupremum(
            value=float(ratios[i]),
            arg_t=arg,
            arg_s=arg,
            cell_k=cell_k,
            cell_l=0,
            kind=kind,
            attained=True,
        )
    return BandSupremum(
        value=0.0, arg_t=0.0, arg_s=0.0, cell_k=0, cell_l=0, kind=kind, attained=False
    )


def block_sup(path: TruncatedPath, m: int, epsilon: float) -> BandSupremum:
    """Exact supremum of ``W(t)/h(t)`` over the dyadic block ``[2^-(m+1), 2^-m)``.

    The path's truncation level must equal the routed level
    ``m_of_epsilon(epsilon, m)`` (raises :class:`LevelMismatchError`
    otherwise) and ``m >= 4`` so the block sits inside ``h``'s domain.
    The supremum over the half-open block equals the maximum over its
    closure's nodes; when that maximum occurs only at the excluded right
    edge, it is reported with ``attained=False``.  The value may be
    negative: no limit at 0 enters here.
    """
    m = int(m)
    if m < 4:
        raise DomainError(f"block index must be >= 4, got {m}")
    required = m_of_epsilon(epsilon, m)
    if path.level_n != required:
        raise LevelMismatchError(
            f"block statistic at m={m}, epsilon={epsilon} requires truncation level "
            f"{required}, got a level-{path.level_n} path"
        )
    width = path.width
    num_cells = path.num_cells
    lo = 2 ** (path.level_n - m)  # node index of 2^-(m+1)
    hi = 2 ** (path.level_n + 1 - m)  # node index of 2^-m
    ks = np.arange(lo, hi + 1)
    ratios = path.node_values[lo : hi + 1] / _local_denominator_array(LOCAL_PLAIN, ks * width)
    i = int(np.argmax(ratios))  # first maximizer; right edge only if strict there
    arg = float(ks[i] * width)
    return BandSupremum(
        value=float(ratios[i]),
        arg_t=arg,
        arg_s=arg,
        cell_k=_cell_of(arg, num_cells) if i < ks.size - 1 else int(ks[i]) - 1,
        cell_l=0,
        kind=LOCAL_PLAIN,
        attained=i < ks.size - 1,
    )


def cell_pair_polygon(
    level_n: int, delta: float, k: int, l: int  # noqa: E741 - l mirrors the cell-offset name
) -> list[tuple[float, float]]:
    """Vertices of the feasible (t, s) region restricted to one cell pair.

    The region is ``{t in cell k closure, s in cell (k+l) closure,
    0 <= s - t <= delta}`` — the intersection of an axis-aligned square
    with the diagonal band — a convex polygon returned with vertices in
    counter-clockwise order (empty list if the region is empty or
    degenerate to a point).  For ``delta`` not a multiple of the cell width
    and ``l = floor(delta/w) + 1`` the polygon degenerates to the triangle
    whose slanted edge carries the gap-``delta`` candidates.
    """
    level_n, k, l = int(level_n), int(k), int(l)  # noqa: E741
    num_cells = 2 ** (level_n + 1)
    if not 0 <= k < num_cells or not 0 <= k + l < num_cells:
        raise IndexError(f"cell pair ({k}, {k + l}) outside the {num_cells}-cell grid")
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    width = 2.0 ** -(level_n + 1)
    t_lo, t_hi = k * width, (k + 1) * width
    s_lo, s_hi = (k + l) * width, (k + l + 1) * width
    square = [(t_lo, s_lo), (t_hi, s_lo), (t_hi, s_hi), (t_lo, s_hi)]

    def clip(poly: list[tuple[float, float]], inside: Callable[[float, float], float]):
        # Sutherland-Hodgman against the half-plane {inside(t, s) >= 0}.
        out: list[tuple[float, float]] = []
        for idx, (t1, s1) in enumerate(poly):
            t2, s2 = poly[(idx + 1) % len(poly)]
            v1, v2 = inside(t1, s1), inside(t2, s2)
            if v1 >= 0.0:
                out.append((t1, s1))
            if (v1 > 0.0 > v2) or (v1 < 0.0 < v2):
                frac = v1 / (v1 - v2)
                out.append((t1 + frac * (t2 - t1), s1 + frac * (s2 - s1)))
        return out

    poly = clip(square, lambda t, s: s - t)  # s >= t
    if poly:
        poly = clip(poly, lambda t, s: delta - (s - t))  # s - t <= delta
    deduped: list[tuple[float, float]] = []
    for vertex in poly:
        if not any(
            abs(vertex[0] - seen[0]) <= 1e-15 and abs(vertex[1] - seen[1]) <= 1e-15
            for seen in deduped
        ):
            deduped.append(vertex)
    return deduped if len(deduped) >= 3 else []


# --------------------------------------------------------------------------
# independent grid oracle


def _check_resolution(path: TruncatedPath, resolution: float) -> None:
    if not 0.0 < resolution <= 2.0 ** -(path.level_n + 4):
        raise DomainError(
            f"oracle resolution must lie in (0, 2^-(level_n+4)] = (0, {2.0 ** -(path.level_n + 4)!r}], "
            f"got {resolution!r}"
        )


def _grid_values(path: TruncatedPath, count: int, resolution: float) -> np.ndarray:
    return evaluate_truncated_many(path, np.arange(count + 1) * resolution)


def grid_oracle(
    path: TruncatedPath, delta: float, kind: DenominatorKind, resolution: float
) -> float:
    """Brute-force the statistic on a uniform grid of step ``resolution``.

    Global kinds: maximum of ``|W(j res) - W(i res)| / D`` over grid pairs
    with gap in ``(0, delta]``.  Local kinds: maximum of ``W(i res)/D(i res)``
    over grid points in ``(0, delta]`` together with the ``t -> 0+`` limit
    value 0.  Path values come from direct tent-series summation, never from
    the node grid.  A lower bound for the exact supremum up to 1e-12
    relative float noise: the series summation and the engine's refined
    node table realize the same numbers through different arithmetic, so
    when the grid contains the exact argmax pair the two results can
    differ in the last ulps (in either direction).  See
    :func:`oracle_slack` for the matching upper bound on the gap.
    """
    delta = float(delta)
    resolution = float(resolution)
    _check_resolution(path, resolution)
    if kind.is_global:
        _check_global_delta(kind, delta)
        if resolution > delta / 2.0:
            raise DomainError(
                f"global oracle needs resolution <= delta/2, got {resolution!r} vs delta {delta!r}"
            )
        grid_count = int(1.0 / resolution + _ALIGN_TOL)
        if grid_count * resolution > 1.0 + 1e-12:
            grid_count -= 1
        grid = _grid_values(path, grid_count, resolution)
        max_offset = int(delta / resolution + _ALIGN_TOL)
        per_offset = _kernels.per_offset_abs_max(grid, max_offset)
        gaps = np.arange(1, max_offset + 1) * resolution
        return float(np.max(per_offset[1:] / _gap_denominator_array(kind, gaps, delta)))
    # local kinds
    if kind.kind == "local_corrected":
        if not 0.0 < delta < 2.0**-4:
            raise DomainError(f"local_corrected needs 0 < delta < 2^-4, got {delta!r}")
    elif not 0.0 < delta <= 2.0**-4:
        raise DomainError(f"local_plain needs 0 < delta <= 2^-4, got {delta!r}")
    count = int(delta / resolution + _ALIGN_TOL)
    if count < 1:
        raise DomainError(
            f"local oracle needs resolution <= delta, got {resolution!r} vs delta {delta!r}"
        )
    ts = np.arange(1, count + 1) * resolution
    ratios = evaluate_truncated_many(path, ts) / _local_denominator_array(kind, ts)
    return float(max(np.max(ratios), 0.0))


def _max_abs_slope(path: TruncatedPath) -> float:
    return float(np.max(np.abs(np.diff(path.node_values)))) * path.num_cells


def oracle_slack(
    path: TruncatedPath, delta: float, kind: DenominatorKind, resolution: float
) -> float:
    """Certified upper bound for ``exact supremum - grid_oracle``.

    Derivations in the module docstring; the bound is path-dependent
    through ``Lambda``, the largest |slope| among the path's dyadic cells.
    """
    delta = float(delta)
    resolution = float(resolution)
    _check_resolution(path, resolution)
    slope = _max_abs_slope(path)
    if kind.is_global:
        _check_global_delta(kind, delta)
        if kind.kind == "fixed_global":
            return 2.0 * slope * resolution / (global_modulus(delta) * global_correction(delta))
        if resolution > delta / 2.0:
            raise DomainError(
                f"gap-kind slack needs resolution <= delta/2, got {resolution!r} vs delta {delta!r}"
            )
        denom = min(
            _gap_denominator_scalar(kind, 2.0 * resolution, delta),
            _gap_denominator_scalar(kind, delta, delta),
        )
        return 2.0 * slope * resolution / denom
    if not kind.is_local:  # pragma: no cover - exhaustive kinds
        raise ValueError(f"unsupported kind {kind.kind!r}")
    return slope * resolution / local_modulus(resolution)


def block_grid_oracle(path: TruncatedPath, m: int, resolution: float) -> float:
    """Brute-force ``sup W(t)/h(t)`` over block ``[2^-(m+1), 2^-m)`` on a grid.

    The grid is aligned to the block's left edge (``resolution`` must divide
    ``2^-(m+1)``); the excluded right edge is not sampled.  Signed value —
    no limit at 0 applies on a block.
    """
    m = int(m)
    resolution = float(resolution)
    _check_resolution(path, resolution)
    left = 2.0 ** -(m + 1)
    if m < 4:
        raise DomainError(f"block index must be >= 4, got {m}")
    cells = left / resolution
    if abs(cells - round(cells)) > _ALIGN_TOL * cells:
        raise DomainError(
            f"block oracle needs resolution dividing the block edge {left!r}, got {resolution!r}"
        )
    start = round(cells)
    ts = np.arange(start, 2 * start) * resolution  # [left, 2*left), right edge excluded
    ratios = evaluate_truncated_many(path, ts) / _local_denominator_array(LOCAL_PLAIN, ts)
    return float(np.max(ratios))


def block_oracle_slack(path: TruncatedPath, m: int, resolution: float) -> float:
    """Certified upper bound for ``block_sup - block_grid_oracle``."""
    m = int(m)
    resolution = float(resolution)
    _check_resolution(path, resolution)
    left = 2.0 ** -(m + 1)
    slope = _max_abs_slope(path)
    lo = 2 ** (path.level_n - m)
    hi = 2 ** (path.level_n + 1 - m)
    vmax = float(np.max(np.abs(path.node_values[lo : hi + 1])))
    h_left = local_modulus(left)
    log_term = math.log(1.0 / left)
    h_slope = (math.log(log_term) - 1.0 / log_term) / h_left
    return slope * resolution / h_left + vmax * resolution * h_slope / h_left**2


def grid_oracle_global_many(
    path: TruncatedPath,
    resolution: float,
    deltas: list[float],
    kinds: list[DenominatorKind],
) -> dict[tuple[str, float], float]:
    """Batched :func:`grid_oracle` for several global configurations.

    Shares the single expensive per-offset scan across all requested
    ``(kind, delta)`` combinations; each result equals the corresponding
    individual ``grid_oracle`` call exactly.
    """
    resolution = float(resolution)
    _check_resolution(path, resolution)
    deltas = [float(d) for d in deltas]
    for kind in kinds:
        if not kind.is_global:
            raise ValueError(f"batched oracle is for global kinds, got {kind.kind!r}")
        for delta in deltas:
            _check_global_delta(kind, delta)
            if resolution > delta / 2.0:
                raise DomainError(
                    f"global oracle needs resolution <= delta/2, got {resolution!r} vs {delta!r}"
                )
    grid_count = int(1.0 / resolution + _ALIGN_TOL)
    if grid_count * resolution > 1.0 + 1e-12:
        grid_count -= 1
    grid = _grid_values(path, grid_count, resolution)
    max_offset = int(max(deltas) / resolution + _ALIGN_TOL)
    per_offset = _kernels.per_offset_abs_max(grid, max_offset)
    out: dict[tuple[str, float], float] = {}
    for delta in deltas:
        offsets = int(delta / resolution + _ALIGN_TOL)
        gaps = np.arange(1, offsets + 1) * resolution
        for kind in kinds:
            ratios = per_offset[1 : offsets + 1] / _gap_denominator_array(kind, gaps, delta)
            out[(kind.kind, delta)] = float(np.max(ratios))
    return out


# --------------------------------------------------------------------------
# fast statistic engines for Monte Carlo (value- and threshold-mode)


def fixed_gap_range_statistic(
    node_values: np.ndarray, width: float, delta: float, allowance: float = 0.0
) -> float:
    """``(max |increment over gaps <= delta| + allowance) / (g(delta) r(delta))``.

    Node-pair reduction of the fixed-denominator statistic for ``delta`` a
    multiple of the node width; the sliding-window kernel finds the extreme
    increment in one pass.
    """
    window = int(round(delta / width))
    if abs(window * width - delta) > _ALIGN_TOL * delta or window < 1:
        raise DomainError(f"delta {delta!r} must be a positive multiple of the node width")
    spread = _kernels.sliding_range_max(np.ascontiguousarray(node_values), window)
    return (spread + allowance) / (global_modulus(delta) * global_correction(delta))


class _BlockPyramid:
    """Per-scale block max/min tables over a node array.

    ``maxima[s][i]`` is the maximum of ``values[i * 2^s : (i+1) * 2^s]``
    (odd tail blocks repeat their last child, which adds no new extremes).
    Queries use the scale whose block is at least the gap, so any admissible
    pair is covered by a two-block window of at most four gap lengths —
    cheap without loosening the bound beyond a factor of two in value.
    """

    BASE_EXP = 1

    def __init__(self, values: np.ndarray, max_exp: int):
        self.values = values
        self.maxima: dict[int, np.ndarray] = {}
        self.minima: dict[int, np.ndarray] = {}
        prev_max = prev_min = values
        for exp in range(1, max_exp + 1):
            half = (prev_max.size + 1) // 2
            out_max = np.empty(half)
            out_min = np.empty(half)
            _kernels.pairwise_extrema(prev_max, prev_min, out_max, out_min)
            self.maxima[exp] = out_max
            self.minima[exp] = out_min
            prev_max, prev_min = out_max, out_min
        self.max_exp = max_exp

    def range_upper(self, max_gap: int) -> float:
        """Upper bound for the max increment over pairs with gap <= max_gap."""
        exp = min(max(self.BASE_EXP, (max_gap - 1).bit_length()), self.max_exp)
        block = 2**exp
        span = -(-max_gap // block) + 1  # blocks covering any max_gap window
        maxima, minima = self.maxima[exp], self.minima[exp]
        if span >= maxima.size:
            return float(maxima.max() - minima.min())
        return float(_kernels.windowed_range_max(maxima, minima, span))


def range_spread_upper(node_values: np.ndarray, max_gap: int) -> float:
    """Cheap upper bound for ``max |V[i+d] - V[i]|`` over ``1 <= d <= max_gap``.

    Single-scale block max/min sweep: never below the exact sliding-window
    spread, typically within a factor ``sqrt(1.5)`` of it for Brownian-like
    data.  Used to skip exact spread passes when a threshold test already
    fails at the bound.
    """
    values = np.asarray(node_values, dtype=np.float64)
    max_gap = int(max_gap)
    if max_gap < 1:
        raise ValueError(f"max_gap must be >= 1, got {max_gap}")
    if max_gap >= values.size:
        return float(values.max() - values.min())
    block = 1 << max(0, max_gap.bit_length() - 2)
    padded_len = -(-values.size // block) * block
    padded = np.empty(padded_len)
    padded[: values.size] = values
    padded[values.size :] = values[-1]
    table = padded.reshape(-1, block)
    maxima = table.max(axis=1)
    minima = table.min(axis=1)
    span = -(-max_gap // block) + 1  # blocks covering any max_gap window
    if span >= maxima.size:
        return float(maxima.max() - minima.min())
    windows_max = maxima[: maxima.size - span + 1].copy()
    windows_min = minima[: minima.size - span + 1].copy()
    for shift in range(1, span):
        np.maximum(windows_max, maxima[shift : maxima.size - span + 1 + shift], out=windows_max)
        np.minimum(windows_min, minima[shift : minima.size - span + 1 + shift], out=windows_min)
    return float(np.max(windows_max - windows_min))


def gap_pairs_exceed(
    node_values: np.ndarray,
    width: float,
    kind: DenominatorKind,
    d_lo: int,
    d_hi: int,
    tau: float,
    allowance: float = 0.0,
) -> bool:
    """Does some node pair with gap ``d * width``, ``d_lo <= d <= d_hi``,
    satisfy ``(|increment| + allowance) / G(d * width) > tau``?

    Branch-and-bound over gap octaves: an octave is pruned when a blockwise
    range upper bound shows every pair in it fails the octave's weakest
    (smallest) threshold ``tau * G(d * width) - allowance``; surviving
    octaves are split until narrow enough for the exact compiled scan.
    The sliding-window spread is non-decreasing in the gap, so the bound
    for the octave's widest gap covers every gap in it.  Exact: no false
    positives or negatives relative to the direct scan.
    """
    d_lo = int(d_lo)
    d_hi = int(d_hi)
    if d_lo < 1 or d_hi < d_lo:
        raise ValueError(f"need 1 <= d_lo <= d_hi, got ({d_lo}, {d_hi})")
    if not kind.gap_dependent:
        raise ValueError("gap_pairs_exceed expects a gap-dependent kind")
    values = np.ascontiguousarray(node_values)
    gaps = np.arange(d_lo, d_hi + 1) * width
    thresholds = tau * _gap_denominator_array(kind, gaps, gaps[-1]) - allowance
    pyramid = _BlockPyramid(values, max(d_hi.bit_length(), _BlockPyramid.BASE_EXP))

    def recurse(a: int, b: int) -> bool:
        if pyramid.range_upper(b) <= float(thresholds[a - d_lo : b - d_lo + 1].min()):
            return False
        if b - a + 1 <= 64:
            return bool(
                _kernels.pair_exceeds_thresholds(values, a, b, thresholds[a - d_lo : b - d_lo + 1])
            )
        mid = (a + b) // 2
        return recurse(a, mid) or recurse(mid + 1, b)

    # octave decomposition keeps the pruning thresholds tight
    a = d_lo
    while a <= d_hi:
        b = min(2 * a - 1, d_hi) if a > 1 else 1
        if recurse(a, b):
            return True
        a = b + 1
    return False
