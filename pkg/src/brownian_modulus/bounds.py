"""Closed-form upper bounds for modulus-normalized increment suprema.

Each evaluator returns a :class:`BoundEvaluation` carrying the raw value of
the printed formula, the clamp ``min(raw, 1)`` (the quantities bounded are
probabilities), and a ``vacuous`` flag (``raw >= 1``).  Evaluators never
weaken or re-derive the formulas: they are transcriptions with domain
guards, so Monte Carlo verification retains its meaning.

Conventions shared by the evaluators (``L = ln``, ``LL = ln ln``):

* ``truncated_global_bound``: exceedance of the gap-normalized global
  statistic of a level-``n`` truncated path over threshold
  ``sqrt(1 + epsilon)``;
* ``fixed_delta_bound`` / ``uniform_bound``: exceedance of the fixed-gap
  (resp. uniform-gap) corrected statistics of the full process, with
  horizon-``T`` variants ``scaled_fixed_delta_bound`` /
  ``scaled_uniform_bound`` reducing to them at ``T = 1``;
* ``tail_bound``: probability that any tent coefficient at level ``j >= n``
  exceeds ``sqrt(2 (d+1) ln(2^j))``;
* ``truncated_local_bound`` / ``block_bound``: local statistics of truncated
  paths, on a small-time interval resp. one dyadic block;
* ``local_deviation_bound``: the corrected local statistic of the full
  process near 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .modulus import DomainError

__all__ = [
    "BoundEvaluation",
    "SeriesAudit",
    "THEOREM_IDS",
    "A_UNIFORM",
    "truncated_global_constant",
    "fixed_delta_constant",
    "uniform_constant",
    "truncated_global_bound",
    "fixed_delta_bound",
    "uniform_bound",
    "scaled_fixed_delta_bound",
    "scaled_uniform_bound",
    "tail_bound",
    "truncated_local_bound",
    "m_of_epsilon",
    "block_bound",
    "local_deviation_bound",
    "series_audit",
]

#: Identifiers of the supported bound families, used in reports and the CLI.
THEOREM_IDS = (
    "truncated_global",
    "fixed_delta",
    "uniform",
    "scaled_fixed",
    "scaled_uniform",
    "tail",
    "truncated_local",
    "block_local",
    "local_deviation",
)

#: Branch point of the uniform-statistic constant: ``a = 1/(8 ln 2 - 1)``.
A_UNIFORM = 1.0 / (8.0 * math.log(2.0) - 1.0)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundEvaluation:
    """One evaluated bound: raw formula value, clamp, and parameters."""

    theorem: str
    raw: float
    params: dict[str, Any]

    def __post_init__(self) -> None:
        if self.theorem not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem!r}")
        if not math.isfinite(self.raw) or self.raw < 0.0:
            raise ValueError(f"bound formulas must evaluate finite and >= 0, got {self.raw!r}")

    @property
    def clamped(self) -> float:
        """The usable probability bound, ``min(raw, 1)``."""
        return min(self.raw, 1.0)

    @property
    def vacuous(self) -> bool:
        """True when the raw value is >= 1 and the bound says nothing."""
        return self.raw >= 1.0

    def scaled(self, factor: float) -> "BoundEvaluation":
        """A copy with the raw value multiplied by ``factor`` (test hook)."""
        factor = float(factor)
        if factor <= 0.0:
            raise ValueError(f"bound scale factor must be > 0, got {factor!r}")
        if factor == 1.0:
            return self
        return BoundEvaluation(
            theorem=self.theorem,
            raw=self.raw * factor,
            params={**self.params, "bound_scale": factor},
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "raw": self.raw,
            "clamped": self.clamped,
            "vacuous": self.vacuous,
            "params": dict(self.params),
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def truncated_global_constant(epsilon: float, delta: float, n: int) -> float:
    """The coarse-gap constant ``K`` of :func:`truncated_global_bound`.

    Defined for ``delta >= 2^-(n+1)`` (the regime where the gap may span
    several cells): with ``x = 2^(n+1) delta``::

        K = 1 + 9 * 2^eps + 4 x^(1+eps) + 2 x^(2+eps)
    """
    x = 2.0 ** (n + 1) * delta
    return 1.0 + 9.0 * 2.0**epsilon + 4.0 * x ** (1.0 + epsilon) + 2.0 * x ** (2.0 + epsilon)


def truncated_global_bound(epsilon: float, delta: float, n: int) -> BoundEvaluation:
    """Exceedance bound for the gap-normalized global statistic, level ``n``.

    Event: ``sup |W_n(s) - W_n(t)| / g(s - t)`` over ``0 < s - t <= delta``
    exceeds ``sqrt(1 + epsilon)``.  Value::

        3 delta^eps / sqrt(pi L(1/delta))                      if delta < 2^-(n+1)
        2^(-eps (n+1)) K / sqrt(pi L(1/delta))                 otherwise

    Domain: ``epsilon > 0``, ``n >= 4``, ``0 < delta < 1``.
    """
    epsilon, delta, n = float(epsilon), float(delta), int(n)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(n >= 4, f"truncation level must be >= 4, got {n}")
    _require(0.0 < delta < 1.0, f"delta must lie in (0, 1), got {delta!r}")
    root = math.sqrt(math.pi * math.log(1.0 / delta))
    if delta < 2.0 ** -(n + 1):
        raw = 3.0 * delta**epsilon / root
    else:
        raw = 2.0 ** (-epsilon * (n + 1)) * truncated_global_constant(epsilon, delta, n) / root
    return BoundEvaluation(
        theorem="truncated_global",
        raw=raw,
        params={"epsilon": epsilon, "delta": delta, "level_n": n},
    )


def fixed_delta_constant(epsilon: float) -> float:
    """``K1(eps) = 27.95 + 0.11/eps`` for ``eps < 1``, else ``27.95``."""
    epsilon = float(epsilon)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    return 27.95 + (0.11 / epsilon if epsilon < 1.0 else 0.0)


def fixed_delta_bound(epsilon: float, delta: float) -> BoundEvaluation:
    """Exceedance bound for the fixed-gap corrected statistic.

    Event: ``sup |W(s) - W(t)| / (g(delta) r(delta))`` over
    ``0 < s - t <= delta`` exceeds ``sqrt(1 + epsilon)``.  Value::

        K1(eps) delta^eps (L(1/delta))^(3/2)

    Domain: ``epsilon > 0``, ``0 < delta <= 2^-5``.
    """
    epsilon, delta = float(epsilon), float(delta)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(0.0 < delta <= 2.0**-5, f"delta must lie in (0, 2^-5], got {delta!r}")
    raw = fixed_delta_constant(epsilon) * delta**epsilon * math.log(1.0 / delta) ** 1.5
    return BoundEvaluation(
        theorem="fixed_delta", raw=raw, params={"epsilon": epsilon, "delta": delta}
    )


def uniform_constant(epsilon: float) -> float:
    """``K2(eps)``: ``9.57/eps^3 + 24.05`` for ``eps <= 2a``, else
    ``14.59/eps + 9.9 + 24.05``, with ``a = 1/(8 ln 2 - 1)``."""
    epsilon = float(epsilon)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    if epsilon <= 2.0 * A_UNIFORM:
        return 9.57 / epsilon**3 + 24.05
    return 14.59 / epsilon + 9.9 + 24.05


def uniform_bound(epsilon: float, delta0: float) -> BoundEvaluation:
    """Exceedance bound for the uniform-gap corrected statistic.

    Event: ``sup |W(s) - W(t)| / (g(s-t) r(s-t))`` over
    ``0 < s - t <= delta0`` exceeds ``sqrt(1 + epsilon)``.  Value::

        K2(eps) delta0^eps (L(1/delta0))^(3/2)

    Domain: ``epsilon > 0``, ``0 < delta0 <= 2^-5``.
    """
    epsilon, delta0 = float(epsilon), float(delta0)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(0.0 < delta0 <= 2.0**-5, f"delta0 must lie in (0, 2^-5], got {delta0!r}")
    raw = uniform_constant(epsilon) * delta0**epsilon * math.log(1.0 / delta0) ** 1.5
    return BoundEvaluation(
        theorem="uniform", raw=raw, params={"epsilon": epsilon, "delta0": delta0}
    )


def _check_scaled_domain(delta: float, horizon: float) -> None:
    _require(horizon >= 1.0, f"horizon T must be >= 1, got {horizon!r}")
    _require(
        0.0 < delta <= horizon * 2.0**-5,
        f"delta must lie in (0, T * 2^-5], got delta={delta!r}, T={horizon!r}",
    )


def scaled_fixed_delta_bound(epsilon: float, delta: float, horizon: float) -> BoundEvaluation:
    """Horizon-``T`` fixed-gap bound: ``K1(eps) (delta/T)^eps (L(T/delta))^(3/2)``.

    Applies to paths on ``[0, T]`` with gaps pinned at ``delta`` and
    denominator ``g_T = sqrt(2 delta L(T/delta)) * r(delta, T)``.  Reduces
    exactly to :func:`fixed_delta_bound` at ``T = 1``.
    """
    epsilon, delta, horizon = float(epsilon), float(delta), float(horizon)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _check_scaled_domain(delta, horizon)
    ratio = delta / horizon
    raw = fixed_delta_constant(epsilon) * ratio**epsilon * math.log(horizon / delta) ** 1.5
    return BoundEvaluation(
        theorem="scaled_fixed",
        raw=raw,
        params={"epsilon": epsilon, "delta": delta, "horizon": horizon},
    )


def scaled_uniform_bound(epsilon: float, delta0: float, horizon: float) -> BoundEvaluation:
    """Horizon-``T`` uniform-gap bound: ``K2(eps) (delta0/T)^eps (L(T/delta0))^(3/2)``."""
    epsilon, delta0, horizon = float(epsilon), float(delta0), float(horizon)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _check_scaled_domain(delta0, horizon)
    ratio = delta0 / horizon
    raw = uniform_constant(epsilon) * ratio**epsilon * math.log(horizon / delta0) ** 1.5
    return BoundEvaluation(
        theorem="scaled_uniform",
        raw=raw,
        params={"epsilon": epsilon, "delta0": delta0, "horizon": horizon},
    )


def tail_bound(n: int, d: float) -> BoundEvaluation:
    """Coefficient-tail bound.

    Event: some tent coefficient at level ``j >= n`` satisfies
    ``|X[j][k]| > sqrt(2 (d+1) ln(2^j))``.  Value::

        2^(-d n) / ((1 - 2^-d) sqrt(pi n ln 2))

    Domain: ``n >= 1``, ``d > 0``.
    """
    n, d = int(n), float(d)
    _require(n >= 1, f"tail level must be >= 1, got {n}")
    _require(d > 0.0, f"tail exponent d must be > 0, got {d!r}")
    raw = 2.0 ** (-d * n) / ((1.0 - 2.0**-d) * math.sqrt(math.pi * n * _LN2))
    return BoundEvaluation(theorem="tail", raw=raw, params={"level_n": n, "d": d})


def truncated_local_bound(epsilon: float, delta: float, n: int) -> BoundEvaluation:
    """Exceedance bound for the local statistic of a level-``n`` path.

    Event: ``sup W_n(t) / h(t)`` over ``0 < t <= delta`` reaches
    ``sqrt(1 + epsilon)``.  Value::

        (L(1/delta))^(-1-eps) / (2 sqrt(pi LL(1/delta)))          if delta < 2^-(n+1)
        (floor(2^(n+1) delta) + 1) (L(1/delta))^(-1-eps)
            / sqrt(pi LL(1/delta))                                otherwise

    Domain: ``epsilon > 0``, ``0 < delta <= 2^-4``.
    """
    epsilon, delta, n = float(epsilon), float(delta), int(n)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(0.0 < delta <= 2.0**-4, f"delta must lie in (0, 2^-4], got {delta!r}")
    log_term = math.log(1.0 / delta)
    root = math.sqrt(math.pi * math.log(log_term))
    power = log_term ** (-1.0 - epsilon)
    if delta < 2.0 ** -(n + 1):
        raw = power / (2.0 * root)
    else:
        cells = math.floor(2.0 ** (n + 1) * delta) + 1.0
        raw = cells * power / root
    return BoundEvaluation(
        theorem="truncated_local",
        raw=raw,
        params={"epsilon": epsilon, "delta": delta, "level_n": n},
    )


def m_of_epsilon(epsilon: float, m: int) -> int:
    """Truncation level routing for the dyadic-block statistic.

    ``m(eps) = floor(eps/(2 ln 2) * LL(2^(m+1)) + f(eps)) + m + 1`` with
    ``f(eps) = 1 - 1/ln 2`` for ``eps <= 1`` and ``0`` otherwise, clamped
    below at ``m + 1`` (for small ``eps`` the printed floor term can reach
    ``-1``; at least one refinement level past the block is always needed,
    so the documented post-condition ``m(eps) >= m + 1`` wins).
    """
    epsilon, m = float(epsilon), int(m)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(m >= 1, f"block index must be >= 1, got {m}")
    f_eps = (1.0 - 1.0 / _LN2) if epsilon <= 1.0 else 0.0
    loglog = math.log(math.log(2.0 ** (m + 1)))
    raw = math.floor(epsilon / (2.0 * _LN2) * loglog + f_eps) + m + 1
    return max(m + 1, int(raw))


def block_bound(epsilon: float, m: int) -> BoundEvaluation:
    """Exceedance bound for the block statistic on ``[2^-(m+1), 2^-m)``.

    Event: ``sup W_n(t) / h(t)`` over the block reaches ``sqrt(1+epsilon)``,
    where ``n = m_of_epsilon(epsilon, m)`` is the routed truncation level.
    Value::

        2^(m(eps) - m - 1) (L(2^(m+2)))^(-(1+eps))
            / sqrt(pi (1+eps) LL(2^(m+1)))

    Domain: ``epsilon > 0``, ``m >= 4`` (so the block sits inside the domain
    of ``h``).
    """
    epsilon, m = float(epsilon), int(m)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(m >= 4, f"block index must be >= 4, got {m}")
    routed = m_of_epsilon(epsilon, m)
    raw = (
        2.0 ** (routed - m - 1)
        * math.log(2.0 ** (m + 2)) ** (-(1.0 + epsilon))
        / math.sqrt(math.pi * (1.0 + epsilon) * math.log(math.log(2.0 ** (m + 1))))
    )
    return BoundEvaluation(
        theorem="block_local",
        raw=raw,
        params={"epsilon": epsilon, "m": m, "routed_level": routed},
    )


def local_deviation_bound(epsilon: float, delta: float) -> BoundEvaluation:
    """Exceedance bound for the corrected local statistic of the full process.

    Event: ``sup W(t) / (h(t) s(t, epsilon))`` over ``0 < t <= delta``
    exceeds ``sqrt(1 + epsilon)``.  Value ``J(eps, delta)``::

        (1.302/eps if eps <= 1 else 1.18)
            / ((L(1/delta))^(eps/2) sqrt(LL(1/delta)))

    clamped at 1.  Domain: ``epsilon > 0``, ``0 < delta < 2^-4``.
    """
    epsilon, delta = float(epsilon), float(delta)
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")
    _require(0.0 < delta < 2.0**-4, f"delta must lie in (0, 2^-4), got {delta!r}")
    coeff = 1.302 / epsilon if epsilon <= 1.0 else 1.18
    log_term = math.log(1.0 / delta)
    raw = coeff / (log_term ** (epsilon / 2.0) * math.sqrt(math.log(log_term)))
    return BoundEvaluation(
        theorem="local_deviation", raw=raw, params={"epsilon": epsilon, "delta": delta}
    )


@dataclass(frozen=True)
class SeriesAudit:
    """Comparison of a bounding series against its claimed closed-form cap.

    ``direct_sum`` is the numerically summed value of
    ``I_k(eps) = sum_{m >= 0} 2^(-eps m) (1 + m/8)^(k + eps)`` with
    ``error_bound`` controlling the discarded tail; ``claimed_bound`` is the
    closed-form cap asserted for the applicable ``eps`` regime, and
    ``consistent`` records whether the direct sum actually respects it.
    An inconsistent audit is informational: it flags a slack constant in a
    derivation, not a defect in this library.
    """

    k: int
    epsilon: float
    direct_sum: float
    error_bound: float
    claimed_bound: float
    consistent: bool
    regime: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "direct_sum": self.direct_sum,
            "error_bound": self.error_bound,
            "claimed_bound": self.claimed_bound,
            "consistent": self.consistent,
            "regime": self.regime,
        }


def series_audit(k: int, epsilon: float, *, tol: float = 1e-12) -> SeriesAudit:
    """Sum ``I_k(eps)`` directly and compare with its claimed regime cap.

    The terms ``a_m = 2^(-eps m) (1 + m/8)^(k+eps)`` eventually decay by a
    factor approaching ``2^-eps < 1``; summation stops once a geometric
    majorant of the remaining tail drops below ``tol``.  Claimed caps:
    ``1.15 / eps^(eps+2)`` (k=1) resp. ``0.70 / eps^(eps+3)`` (k=2) for
    ``eps <= 2a``, and ``1/(eps ln 2) + 1`` for ``eps > 2a``.
    """
    k, epsilon = int(k), float(epsilon)
    _require(k in (1, 2), f"series order k must be 1 or 2, got {k}")
    _require(epsilon > 0.0, f"epsilon must be > 0, got {epsilon!r}")

    power = k + epsilon
    decay = 2.0**-epsilon

    def term(m: int) -> float:
        return decay**m * (1.0 + m / 8.0) ** power

    total = 0.0
    m = 0
    error_bound = math.inf
    while True:
        total += term(m)
        m += 1
        # For m' >= m the ratio a_{m'+1}/a_{m'} is at most
        # rho_m = 2^-eps ((1 + (m+1)/8)/(1 + m/8))^power, decreasing in m,
        # so once rho_m < 1 the tail is under a geometric series.
        rho = decay * ((1.0 + (m + 1) / 8.0) / (1.0 + m / 8.0)) ** power
        if rho < 1.0:
            error_bound = term(m) / (1.0 - rho)
            if error_bound < tol:
                break
        if m > 1_000_000:  # unreachable for epsilon > 0; defensive
            raise RuntimeError("series audit failed to converge")

    if epsilon <= 2.0 * A_UNIFORM:
        regime = "small_epsilon"
        claimed = 1.15 / epsilon ** (epsilon + 2.0) if k == 1 else 0.70 / epsilon ** (epsilon + 3.0)
    else:
        regime = "large_epsilon"
        claimed = 1.0 / (epsilon * _LN2) + 1.0
    return SeriesAudit(
        k=k,
        epsilon=epsilon,
        direct_sum=total,
        error_bound=error_bound,
        claimed_bound=claimed,
        consistent=total <= claimed,
        regime=regime,
    )
