"""Modulus-of-continuity normalizers and their correction factors.

Two normalizer families recur throughout this library.  Writing
``L(x) = ln(x)`` and ``LL(x) = ln(ln(x))``:

* the global (uniform-increment) modulus ``g(x) = sqrt(2 x L(1/x))`` on
  ``0 < x < 1``, which calibrates increments ``W(s) - W(t)`` over gaps of
  size ``x``;
* the local (law-of-the-iterated-logarithm) modulus
  ``h(t) = sqrt(2 t LL(1/t))`` on ``0 < t < 1/e``, which calibrates ``W(t)``
  for small ``t``.

Both are multiplied by correction factors that absorb the second-order
behaviour of the corresponding suprema:

* ``global_correction(delta) = 1 + 2.65 / sqrt(L(1/delta))`` for gaps pinned
  at ``delta`` (a looser classical variant uses 3.5 in place of 2.65; the
  sharper 2.65 is used everywhere here);
* ``scaled_correction(delta, horizon)``, the horizon-``T`` analogue, which
  reduces to ``global_correction`` at ``T = 1``;
* ``local_correction(t, epsilon)``, the deviation correction for the local
  statistic, with separate branches for ``epsilon <= 1`` and ``epsilon > 1``.

All functions are pure scalar float64 maps.  Domain violations raise
:class:`DomainError` (a ``ValueError``) before any logarithm can see a
non-positive argument, so no NaNs or infinities ever escape.
"""

from __future__ import annotations

import math

__all__ = [
    "DomainError",
    "GLOBAL_CORRECTION_COEFF",
    "LOCAL_CORRECTION_COEFF",
    "global_modulus",
    "local_modulus",
    "global_correction",
    "scaled_correction",
    "local_correction",
    "corrected_global_modulus",
]

#: Coefficient of the fixed-gap correction term.
GLOBAL_CORRECTION_COEFF = 2.65

#: Coefficient of the local deviation correction term.
LOCAL_CORRECTION_COEFF = 3.61


class DomainError(ValueError):
    """Argument outside the open domain of a modulus or correction factor."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def global_modulus(x: float) -> float:
    """Return ``g(x) = sqrt(2 x ln(1/x))`` for ``0 < x < 1``.

    ``g`` is strictly increasing on ``(0, 1/e]`` and strictly positive on the
    whole domain; ``x / g(x)`` is strictly increasing on all of ``(0, 1)``.
    """
    x = float(x)
    _require(0.0 < x < 1.0, f"global modulus needs 0 < x < 1, got {x!r}")
    return math.sqrt(2.0 * x * math.log(1.0 / x))


def local_modulus(t: float) -> float:
    """Return ``h(t) = sqrt(2 t ln ln(1/t))`` for ``0 < t < 1/e``.

    The iterated logarithm is positive exactly when ``ln(1/t) > 1``, hence
    the right domain edge.  ``t / h(t)`` is strictly increasing on
    ``(0, 2^-4]``, which the exact-supremum candidate reductions rely on.
    """
    t = float(t)
    _require(0.0 < t < math.exp(-1.0), f"local modulus needs 0 < t < 1/e, got {t!r}")
    return math.sqrt(2.0 * t * math.log(math.log(1.0 / t)))


def global_correction(delta: float) -> float:
    """Return ``r(delta) = 1 + 2.65 / sqrt(ln(1/delta))`` for ``0 < delta < 1``.

    Decreases to 1 as ``delta -> 0`` and equals 2 at ``delta = exp(-2.65^2)``.
    """
    delta = float(delta)
    _require(0.0 < delta < 1.0, f"global correction needs 0 < delta < 1, got {delta!r}")
    return 1.0 + GLOBAL_CORRECTION_COEFF / math.sqrt(math.log(1.0 / delta))


def scaled_correction(delta: float, horizon: float) -> float:
    """Return the horizon-``T`` gap correction ``r(delta, T)``.

    ``r(delta, T) = r(delta/T) * sqrt(ln(T/delta) / ln(1/delta))`` for
    ``T >= 1``, ``0 < delta <= T * 2^-5`` and ``delta < 1``.  At ``T = 1``
    this reduces exactly to :func:`global_correction`.
    """
    delta = float(delta)
    horizon = float(horizon)
    _require(horizon >= 1.0, f"scaled correction needs horizon T >= 1, got {horizon!r}")
    _require(
        0.0 < delta <= horizon * 2.0**-5,
        f"scaled correction needs 0 < delta <= T * 2^-5, got delta={delta!r}, T={horizon!r}",
    )
    _require(delta < 1.0, f"scaled correction needs delta < 1, got {delta!r}")
    return global_correction(delta / horizon) * math.sqrt(
        math.log(horizon / delta) / math.log(1.0 / delta)
    )


def local_correction(t: float, epsilon: float) -> float:
    """Return the local deviation correction ``s(t, epsilon)``.

    For ``0 < epsilon <= 1``::

        s(t, eps) = 1 + 3.61 / (sqrt(eps) * max(sqrt(LL(1/t)), sqrt(L(1/t)^(eps/2))))

    and for ``epsilon > 1``::

        s(t, eps) = 1 + 3.61 / L(1/t)^(eps/4)

    on the strict domain ``0 < t < 2^-4``.  Both branches are increasing in
    ``t`` (the denominators decrease as ``t`` grows), which the candidate
    reductions for ``h * s``-normalized suprema use.
    """
    t = float(t)
    epsilon = float(epsilon)
    _require(epsilon > 0.0, f"local correction needs epsilon > 0, got {epsilon!r}")
    _require(0.0 < t < 2.0**-4, f"local correction needs 0 < t < 2^-4, got {t!r}")
    log_term = math.log(1.0 / t)
    if epsilon <= 1.0:
        branch = max(math.sqrt(math.log(log_term)), math.sqrt(log_term ** (epsilon / 2.0)))
        return 1.0 + LOCAL_CORRECTION_COEFF / (math.sqrt(epsilon) * branch)
    return 1.0 + LOCAL_CORRECTION_COEFF / log_term ** (epsilon / 4.0)


def corrected_global_modulus(gap: float) -> float:
    """Return ``g(gap) * r(gap)`` in the numerically stable closed form.

    Expanding the product gives ``sqrt(2 gap ln(1/gap)) + 2.65 sqrt(2 gap)``,
    a strictly increasing function of ``gap`` on ``(0, 1/e)`` (each summand
    is increasing there); ``gap / (g(gap) r(gap))`` simplifies to
    ``sqrt(gap) / (sqrt(2) (sqrt(ln(1/gap)) + 2.65))`` and is therefore
    strictly increasing on all of ``(0, 1)``.  Both monotonicity facts are
    load-bearing for the gap-corrected supremum engines.
    """
    gap = float(gap)
    _require(0.0 < gap < 1.0, f"corrected global modulus needs 0 < gap < 1, got {gap!r}")
    root_two_gap = math.sqrt(2.0 * gap)
    return root_two_gap * (math.sqrt(math.log(1.0 / gap)) + GLOBAL_CORRECTION_COEFF)
