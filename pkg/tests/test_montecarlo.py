"""Unit tests for the Monte Carlo verification engine."""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np
import pytest

from brownian_modulus import DomainError
from brownian_modulus.montecarlo import (
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    block_tail_allowance,
    clopper_pearson,
    pair_tail_allowance,
    run_block_local,
    run_experiment,
    run_truncated_local,
    scaling_check,
)

import _expected as X

REL = 1e-12


def close(a: float, b: float, rel: float = REL) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)


def cheap_config(**overrides) -> ExperimentConfig:
    base = dict(
        theorem="truncated_local", trials=50, seed=7, epsilon=1.0, delta=2.0**-4, level_n=4
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestClopperPearson:
    def test_boundary_counts_pin_endpoints(self):
        lo, hi = clopper_pearson(0, 40)
        assert lo == 0.0 and 0.0 < hi < 1.0
        lo, hi = clopper_pearson(40, 40)
        assert 0.0 < lo < 1.0 and hi == 1.0

    def test_matches_binomial_definition(self):
        # independent check: the lower endpoint p solves
        # P(Bin(n, p) >= k) = alpha/2, the upper P(Bin(n, p) <= k) = alpha/2
        n, k, ci = 50, 7, 0.99
        alpha = 1.0 - ci

        def binom_cdf(p: float, upto: int) -> float:
            return sum(math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(upto + 1))

        def bisect(fn, target):
            lo, hi = 0.0, 1.0
            increasing = fn(1.0) > fn(0.0)
            for _ in range(200):
                mid = (lo + hi) / 2
                if (fn(mid) < target) == increasing:
                    lo = mid
                else:
                    hi = mid
            return (lo + hi) / 2

        want_lo = bisect(lambda p: 1.0 - binom_cdf(p, k - 1), alpha / 2)  # increasing
        want_hi = bisect(lambda p: binom_cdf(p, k), alpha / 2)  # decreasing
        got_lo, got_hi = clopper_pearson(k, n, ci)
        assert close(got_lo, want_lo, rel=1e-9)
        assert close(got_hi, want_hi, rel=1e-9)

    def test_interval_contains_point_estimate(self):
        for k, n in [(1, 10), (5, 10), (37, 100), (999, 1000)]:
            lo, hi = clopper_pearson(k, n)
            assert lo <= k / n <= hi

    def test_narrows_with_more_trials(self):
        lo1, hi1 = clopper_pearson(10, 100)
        lo2, hi2 = clopper_pearson(100, 1000)
        assert hi2 - lo2 < hi1 - lo1

    def test_conservative_coverage(self):
        # Clopper-Pearson guarantees coverage >= ci_level; check empirically
        rng = np.random.default_rng(5)
        p, n, reps = 0.13, 100, 1500
        covered = 0
        for k in rng.binomial(n, p, reps):
            lo, hi = clopper_pearson(int(k), n, 0.99)
            covered += lo <= p <= hi
        assert covered / reps >= 0.97

    def test_validation(self):
        with pytest.raises(ValueError):
            clopper_pearson(1, 0)
        with pytest.raises(ValueError):
            clopper_pearson(5, 4)
        with pytest.raises(ValueError):
            clopper_pearson(-1, 4)
        with pytest.raises(ValueError):
            clopper_pearson(1, 4, 1.0)


class TestAllowances:
    def test_pair_allowance_series(self):
        js = np.arange(19, 3000)
        series = float(np.sum(2.0 ** (-js / 2.0) * np.sqrt(js)))
        want = math.sqrt(3.0) * math.sqrt(2.0 * math.log(2.0)) * series
        assert close(pair_tail_allowance(18, 2.0), want, rel=1e-10)

    def test_pair_allowance_epsilon_scaling(self):
        ratio = pair_tail_allowance(18, 2.0) / pair_tail_allowance(18, 0.5)
        assert close(ratio, math.sqrt(3.0 / 1.5))

    def test_pair_allowance_shrinks_with_level(self):
        assert pair_tail_allowance(20, 2.0) < pair_tail_allowance(18, 2.0)

    def test_block_allowance_series(self):
        m, n, d = 4, 18, 3.0
        start = n + 1 - m
        js = np.arange(start, 3000)
        series = float(np.sum(2.0 ** (-js / 2.0) * np.sqrt(js)))
        want = 0.5 * math.sqrt(2.0 * (d + 1.0) * math.log(2.0)) * 2.0 ** (-m / 2.0) * series
        assert close(block_tail_allowance(m, n, d), want, rel=1e-10)

    def test_block_allowance_shrinks_with_level(self):
        assert block_tail_allowance(4, 20, 3.0) < block_tail_allowance(4, 18, 3.0)


class TestConfigValidation:
    def test_happy_path(self):
        cheap_config().validate()

    @pytest.mark.parametrize(
        "overrides",
        [
            dict(trials=0),
            dict(trials=-3),
            dict(seed=-1),
            dict(seed=2**64),
            dict(ci_level=0.0),
            dict(ci_level=1.0),
            dict(workers=0),
            dict(bound_scale=0.0),
            dict(theorem="nonsense"),
            dict(epsilon=None),
            dict(epsilon=-1.0),
            dict(delta=1.5),
            dict(gamma_floor=2.0**-8),  # only the uniform runner takes it
        ],
        ids=lambda o: next(iter(o.items()))[0] + "=" + repr(next(iter(o.items()))[1]),
    )
    def test_rejects(self, overrides):
        with pytest.raises(ConfigError):
            cheap_config(**overrides).validate()

    def test_bracketed_level_floors(self):
        for theorem, floor in [("fixed_delta", 14), ("uniform", 14), ("local_deviation", 16)]:
            good = ExperimentConfig(
                theorem=theorem, trials=1, seed=0, epsilon=1.0, delta=2.0**-5,
                approx_level_n=floor,
            )
            good.validate()
            with pytest.raises(ConfigError):
                dataclasses.replace(good, approx_level_n=floor - 1).validate()

    def test_bracketed_delta_alignment(self):
        config = ExperimentConfig(
            theorem="fixed_delta", trials=1, seed=0, epsilon=1.0,
            delta=0.7 * 2.0**-5, approx_level_n=14,
        )
        with pytest.raises(ConfigError):
            config.validate()

    def test_approx_level_must_cover_level(self):
        config = ExperimentConfig(
            theorem="truncated_global", trials=1, seed=0, epsilon=1.0,
            delta=2.0**-5, level_n=6, approx_level_n=5,
        )
        with pytest.raises(ConfigError):
            config.validate()

    def test_uniform_gamma_floor_range(self):
        base = dict(
            theorem="uniform", trials=1, seed=0, epsilon=2.0,
            delta=2.0**-5, approx_level_n=14,
        )
        ExperimentConfig(**base, gamma_floor=2.0**-8).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(**base, gamma_floor=2.0**-4).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(**base, gamma_floor=0.0).validate()

    def test_tail_requirements(self):
        good = ExperimentConfig(
            theorem="tail", trials=1, seed=0, level_n=4, d=1.0, tail_horizon=10
        )
        good.validate()
        with pytest.raises(ConfigError):
            dataclasses.replace(good, tail_horizon=3).validate()
        with pytest.raises(ConfigError):
            dataclasses.replace(good, level_n=0, tail_horizon=10).validate()
        with pytest.raises(ConfigError):
            dataclasses.replace(good, d=None).validate()

    def test_missing_requirement_named(self):
        with pytest.raises(ConfigError, match="delta"):
            ExperimentConfig(
                theorem="fixed_delta", trials=1, seed=0, epsilon=1.0, approx_level_n=14
            ).validate()


class TestVerdicts:
    def test_zero_path_consistent(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="fixed_delta", trials=200, seed=0, epsilon=2.0,
                delta=2.0**-5, approx_level_n=14, zero_path=True,
            )
        )
        assert report.exceedances == 0
        assert report.bracket_low_exceedances == 0
        assert report.bracket_high_exceedances == 0
        assert report.verdict == "consistent"

    def test_zero_path_single_trial_inconclusive(self):
        # CP(0, 1) at 99% reaches 0.995, far above the bound: neither side settles
        report = run_experiment(
            ExperimentConfig(
                theorem="fixed_delta", trials=1, seed=0, epsilon=2.0,
                delta=2.0**-5, approx_level_n=14, zero_path=True,
            )
        )
        assert report.verdict == "inconclusive"

    def test_bound_scale_forces_violation(self):
        report = run_experiment(cheap_config(trials=300, bound_scale=1e-9))
        assert report.verdict == "violated"
        assert report.ci_low > report.bound.clamped + report.error_budget

    def test_vacuous_bound_short_circuits(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="uniform", trials=5, seed=0, epsilon=0.3,
                delta=2.0**-5, approx_level_n=14, zero_path=True,
            )
        )
        assert report.bound.vacuous
        assert report.verdict == "vacuous"


class TestDeterminismAndBrackets:
    def test_reports_compare_equal_across_runs(self):
        a = run_experiment(cheap_config())
        b = run_experiment(cheap_config())
        assert a == b  # wall_time excluded from comparison
        assert a.wall_time > 0.0

    def test_workers_do_not_change_counts(self):
        serial = run_experiment(cheap_config(trials=300, workers=1))
        parallel = run_experiment(cheap_config(trials=300, workers=2))
        # identical up to the workers knob itself (and wall time)
        assert serial == dataclasses.replace(
            parallel, config=dataclasses.replace(parallel.config, workers=1)
        )

    def test_bracket_ordering(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="fixed_delta", trials=60, seed=3, epsilon=2.0,
                delta=2.0**-5, approx_level_n=14,
            )
        )
        assert report.bracket_low_exceedances <= report.bracket_high_exceedances
        assert report.exceedances == report.bracket_low_exceedances

    def test_exact_theorem_has_no_bracket_counts(self):
        report = run_experiment(cheap_config())
        assert report.bracket_low_exceedances is None
        assert report.bracket_high_exceedances is None
        assert report.error_budget == 0.0


class TestBudgets:
    def test_fixed_delta_budget_is_tail_event(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="fixed_delta", trials=1, seed=0, epsilon=2.0,
                delta=2.0**-5, approx_level_n=18, zero_path=True,
            )
        )
        assert set(report.budget_parts) == {"tail_event"}
        assert close(report.budget_parts["tail_event"], X.TAIL_BUDGET_N18_EPS2, rel=1e-9)
        assert report.error_budget == sum(report.budget_parts.values())

    def test_uniform_budget_adds_gap_floor(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="uniform", trials=1, seed=0, epsilon=2.0,
                delta=2.0**-5, approx_level_n=18, zero_path=True,
            )
        )
        assert set(report.budget_parts) == {"tail_event", "small_gaps"}
        # default gap floor: max(2^-18, delta/64) = 2^-11
        assert close(report.budget_parts["small_gaps"], X.UNIFORM_FLOOR_2_2POW11, rel=1e-9)
        assert any("not scanned" in note for note in report.notes)

    def test_local_deviation_budget_parts(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="local_deviation", trials=1, seed=0, epsilon=1.0,
                delta=2.0**-10, approx_level_n=18, zero_path=True,
            )
        )
        assert set(report.budget_parts) == {"tail_events_per_block", "small_t"}
        assert close(report.budget_parts["small_t"], X.LOCAL_DEV_1_2POW18, rel=1e-9)
        assert 0.0 < report.budget_parts["tail_events_per_block"] < 0.05
        assert report.error_budget == sum(report.budget_parts.values())

    def test_tail_runner_carries_no_budget(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="tail", trials=1, seed=0, level_n=4, d=1.0,
                tail_horizon=6, zero_path=True,
            )
        )
        assert report.error_budget == 0.0
        assert any("undercounts" in note for note in report.notes)


class TestReportShape:
    def test_json_round_trip(self):
        report = run_experiment(cheap_config())
        payload = json.loads(json.dumps(report.to_json_dict()))
        assert payload["verdict"] == report.verdict
        assert payload["exceedances"] == report.exceedances
        assert payload["config"]["theorem"] == "truncated_local"
        assert payload["bound"]["clamped"] == report.bound.clamped
        assert set(payload) >= {
            "config", "exceedances", "rate", "ci_low", "ci_high", "bound",
            "verdict", "threshold", "error_budget", "budget_parts", "notes",
        }

    def test_thresholds(self):
        report = run_experiment(cheap_config(epsilon=1.0))
        assert close(report.threshold, math.sqrt(2.0))
        tail = run_experiment(
            ExperimentConfig(
                theorem="tail", trials=1, seed=0, level_n=4, d=1.0,
                tail_horizon=6, zero_path=True,
            )
        )
        assert close(tail.threshold, math.sqrt(4.0))

    def test_named_runner_dispatch(self):
        report = run_truncated_local(cheap_config())
        assert report.config.theorem == "truncated_local"
        with pytest.raises(ConfigError):
            run_block_local(cheap_config())


class TestScalingCheck:
    @pytest.mark.parametrize("horizon", [1.0, 2.0, 4.0])
    def test_identity_holds(self, horizon):
        for seed in (0, 1, 2):
            assert scaling_check(seed, 8, 2.0**-5 * horizon, horizon)

    def test_unaligned_gap_still_exact(self):
        # delta/horizon = 3.5 node widths at level 6
        assert scaling_check(5, 6, 3.5 * 2.0**-7 * 2.0, 2.0)

    def test_horizon_domain(self):
        with pytest.raises(DomainError):
            scaling_check(0, 6, 2.0**-5, 0.5)
