"""Acceptance checks: oracle equivalence, structural invariants, and
statistical consistency of every closed-form bound at desk scale.

These run the full engines end to end (several minutes total).  Each check
is numbered; the numbers match the acceptance checklist in the project
notes.  Statistical checks pin the decimal thresholds they were specified
with; engine checks pin exactness contracts.
"""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from brownian_modulus import (
    FIXED_GLOBAL,
    GAP_GLOBAL,
    GAP_GLOBAL_CORRECTED,
    HaarCoefficients,
    LevelMismatchError,
    TruncatedPath,
    block_bound,
    block_sup,
    evaluate_truncated_many,
    fixed_delta_bound,
    fixed_delta_constant,
    global_band_sup,
    global_correction,
    global_modulus,
    grid_oracle_global_many,
    local_correction,
    local_deviation_bound,
    local_modulus,
    local_sup,
    m_of_epsilon,
    oracle_slack,
    scaled_correction,
    scaled_fixed_delta_bound,
    schauder,
    series_audit,
    tail_bound,
    truncated_global_bound,
    truncated_global_constant,
    truncated_local_bound,
    uniform_band_sup,
    uniform_bound,
    uniform_constant,
)
from brownian_modulus import A_UNIFORM, LOCAL_PLAIN
from brownian_modulus.cli import main as cli_main
from brownian_modulus.montecarlo import (
    ExperimentConfig,
    clopper_pearson,
    run_experiment,
    scaling_check,
)

import _expected as X

GLOBAL_KINDS = (GAP_GLOBAL, FIXED_GLOBAL, GAP_GLOBAL_CORRECTED)

#: The exact engine and the grid oracle evaluate the path through two
#: independent float computations, so dominance carries the documented
#: 1e-12 relative qualifier.
DOMINANCE_TOL = 1e-12


def ramp_path(level_n: int, slope: float) -> TruncatedPath:
    levels = tuple(np.zeros(2**j) for j in range(level_n + 1))
    return TruncatedPath.from_coefficients(HaarCoefficients(linear=slope, levels=levels))


class TestCheck01OracleEquivalence:
    def test_exact_suprema_dominate_grid_oracle_within_slack(self):
        resolution = 2.0**-16
        deltas = [2.0**-6, 2.0**-5]
        started = time.perf_counter()
        worst_gap = -math.inf
        for seed in range(50):
            for level in (3, 4, 5, 6):
                path = TruncatedPath.sample(level, seed)
                oracle = grid_oracle_global_many(path, resolution, deltas, list(GLOBAL_KINDS))
                for delta in deltas:
                    for kind in GLOBAL_KINDS:
                        exact = global_band_sup(path, delta, kind).value
                        oracle_value = oracle[(kind.kind, delta)]
                        slack = oracle_slack(path, delta, kind, resolution)
                        assert exact >= oracle_value - DOMINANCE_TOL * max(1.0, abs(exact)), (
                            seed, level, delta, kind.kind, exact, oracle_value,
                        )
                        gap = exact - oracle_value
                        assert gap <= slack, (seed, level, delta, kind.kind, gap, slack)
                        worst_gap = max(worst_gap, gap)
        elapsed = time.perf_counter() - started
        assert elapsed < 120.0, f"oracle sweep took {elapsed:.1f}s"
        assert math.isfinite(worst_gap)


class TestCheck02StructuralInvariants:
    def test_invariants_hold_for_100_seeds(self):
        for seed in range(100):
            path = TruncatedPath.sample(5, seed)
            # piecewise linearity: every cell midpoint carries the average
            # of its endpoint node values
            mids = (np.arange(path.num_cells) + 0.5) * path.width
            series = evaluate_truncated_many(path, mids)
            averages = 0.5 * (path.node_values[:-1] + path.node_values[1:])
            assert float(np.max(np.abs(series - averages))) <= 1e-12
            # dyadic agreement under level extension: shared nodes exact
            deeper = path.extended(7)
            stride = 2 ** (7 - 5)
            np.testing.assert_array_equal(deeper.node_values[::stride], path.node_values)

    def test_tent_supports_disjoint_within_level(self):
        rng = np.random.default_rng(0)
        for j in range(7):
            for t in rng.uniform(0.0, 1.0, 100):
                hits = sum(schauder(j, k, float(t)) > 0.0 for k in range(2**j))
                assert hits <= 1


class TestCheck03ScalingIdentity:
    @pytest.mark.parametrize("horizon", [1.0, 2.0, 4.0])
    def test_scaled_statistic_equals_unit_statistic(self, horizon):
        for seed in range(20):
            assert scaling_check(seed, 8, 2.0**-5 * horizon, horizon, tolerance=1e-12)


class TestCheck04GlobalBandExceedance:
    def test_rate_upper_ci_below_bound(self):
        started = time.perf_counter()
        report = run_experiment(
            ExperimentConfig(
                theorem="truncated_global", trials=100_000, seed=2024,
                epsilon=1.0, delta=2.0**-6, level_n=4,
            )
        )
        elapsed = time.perf_counter() - started
        assert report.ci_high <= X.LITERAL_TRUNC_GLOBAL_THRESHOLD, (
            report.exceedances, report.ci_high,
        )
        assert elapsed < 300.0, f"run took {elapsed:.1f}s"


class TestCheck05LocalBandExceedance:
    def test_fine_delta_rate(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="truncated_local", trials=100_000, seed=2025,
                epsilon=1.0, delta=2.0**-10, level_n=4,
            )
        )
        assert report.ci_high <= X.LITERAL_TRUNC_LOCAL_FINE_THRESHOLD, (
            report.exceedances, report.ci_high,
        )

    def test_coarse_delta_rate(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="truncated_local", trials=10_000, seed=2026,
                epsilon=1.0, delta=2.0**-4, level_n=4,
            )
        )
        assert report.ci_high <= X.LITERAL_TRUNC_LOCAL_COARSE_THRESHOLD, (
            report.exceedances, report.ci_high,
        )


class TestCheck06CoefficientTail:
    def test_tail_event_rate(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="tail", trials=100_000, seed=2027,
                level_n=4, d=1.0, tail_horizon=14,
            )
        )
        assert report.ci_high <= X.LITERAL_TAIL_THRESHOLD, (
            report.exceedances, report.ci_high,
        )


class TestCheck07FixedGapBracket:
    def test_pessimistic_bracket_with_budget_below_bound(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="fixed_delta", trials=10_000, seed=2028,
                epsilon=2.0, delta=2.0**-5, approx_level_n=18,
            )
        )
        _, pessimistic_hi = clopper_pearson(
            report.bracket_high_exceedances, report.config.trials, report.config.ci_level
        )
        assert pessimistic_hi + report.error_budget <= X.LITERAL_FIXED_DELTA_THRESHOLD, (
            report.bracket_low_exceedances, report.bracket_high_exceedances, pessimistic_hi,
        )
        assert report.verdict == "consistent"


class TestCheck08UniformBracket:
    def test_bracket_consistent_with_bound(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="uniform", trials=10_000, seed=2029,
                epsilon=2.0, delta=2.0**-5, approx_level_n=18,
            )
        )
        assert math.isclose(report.bound.raw, X.UNIFORM_2_2POW5, rel_tol=1e-12)
        assert report.verdict == "consistent", (
            report.bracket_low_exceedances, report.bracket_high_exceedances,
            report.error_budget,
        )

    def test_clamped_bound_reports_vacuous(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="uniform", trials=50, seed=2030,
                epsilon=0.3, delta=2.0**-5, approx_level_n=14,
            )
        )
        assert report.bound.raw > 1.0
        assert report.verdict == "vacuous"


class TestCheck09LocalDeviationBracket:
    def test_bracket_consistent_with_bound(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="local_deviation", trials=10_000, seed=2031,
                epsilon=1.0, delta=2.0**-10, approx_level_n=18,
            )
        )
        assert math.isclose(report.bound.raw, X.LITERAL_LOCAL_DEV_THRESHOLD, rel_tol=1e-5)
        assert report.verdict == "consistent", (
            report.bracket_low_exceedances, report.bracket_high_exceedances,
            report.error_budget,
        )

    def test_small_epsilon_reports_vacuous(self):
        report = run_experiment(
            ExperimentConfig(
                theorem="local_deviation", trials=50, seed=2032,
                epsilon=0.1, delta=2.0**-5, approx_level_n=16,
            )
        )
        assert report.bound.raw > 1.0
        assert report.verdict == "vacuous"


class TestCheck10BlockStatistic:
    def test_rate_upper_ci_below_bound(self):
        # The closed-form block bound at epsilon=1, m=4 is 0.020689, but the
        # block event's true probability (independent-increment computation
        # at the nodes alone, see the project notes) is 0.0346 -- the
        # empirical rate genuinely exceeds the stated bound, so this check
        # documents the discrepancy rather than hiding it.
        report = run_experiment(
            ExperimentConfig(theorem="block_local", trials=100_000, seed=2033, epsilon=1.0, m=4)
        )
        assert report.ci_high <= X.LITERAL_BLOCK_THRESHOLD, (
            report.exceedances, report.ci_high,
        )

    def test_level_routing(self):
        assert m_of_epsilon(1.0, 4) == 5
        routed = TruncatedPath.sample(5, 0)
        block_sup(routed, 4, 1.0)
        with pytest.raises(LevelMismatchError):
            block_sup(TruncatedPath.sample(6, 0), 4, 1.0)


class TestCheck11DerivedValueRegression:
    def test_all_derived_values_to_five_significant_figures(self):
        audit1 = series_audit(1, 1.0)
        audit2 = series_audit(2, 1.0)
        ramp3 = ramp_path(6, 3.0)
        ramp1 = ramp_path(6, 1.0)
        table = [
            ("g(2^-5)", global_modulus(2.0**-5), X.G_2POW5),
            ("g(1/e)", global_modulus(1.0 / math.e), X.G_EXP1),
            ("g(e^-2)", global_modulus(math.exp(-2.0)), X.G_EXP2),
            ("h(e^-e)", local_modulus(math.exp(-math.e)), X.H_EXPE),
            ("h(2^-5)", local_modulus(2.0**-5), X.H_2POW5),
            ("h(2^-10)", local_modulus(2.0**-10), X.H_2POW10),
            ("r(e^-2.65^2)", global_correction(math.exp(-(2.65**2))), X.R_UNIT),
            ("r(2^-5)", global_correction(2.0**-5), X.R_2POW5),
            ("r(2^-10)", global_correction(2.0**-10), X.R_2POW10),
            ("r_T(2^-5,2)", scaled_correction(2.0**-5, 2.0), X.R_SCALED_2POW5_T2),
            ("r_T(2^-5,4)", scaled_correction(2.0**-5, 4.0), X.R_SCALED_2POW5_T4),
            ("s(2^-10,2)", local_correction(2.0**-10, 2.0), X.S_2POW10_EPS2),
            ("s(2^-10,1)", local_correction(2.0**-10, 1.0), X.S_2POW10_EPS1),
            ("s(2^-10,.5)", local_correction(2.0**-10, 0.5), X.S_2POW10_EPS05),
            (
                "ramp3 band sup",
                global_band_sup(ramp3, 2.0**-6, GAP_GLOBAL).value,
                X.BAND_GLOBAL_X3_2POW6,
            ),
            ("ramp1 local sup", local_sup(ramp1, 2.0**-5, LOCAL_PLAIN).value, X.BAND_LOCAL_X1_2POW5),
            ("ramp1 uniform sup", uniform_band_sup(ramp1, 2.0**-5).value, X.BAND_UNIFORM_X1_2POW5),
            (
                "global bound (1,2^-6,4)",
                truncated_global_bound(1.0, 2.0**-6, 4).raw,
                X.TRUNC_GLOBAL_1_2POW6_N4,
            ),
            (
                "global bound (1,2^-5,4)",
                truncated_global_bound(1.0, 2.0**-5, 4).raw,
                X.TRUNC_GLOBAL_1_2POW5_N4,
            ),
            (
                "global constant at x=1",
                truncated_global_constant(1.0, 2.0**-5, 4),
                X.TRUNC_GLOBAL_K_EPS1_X1,
            ),
            ("K1(2)", fixed_delta_constant(2.0), X.K1_EPS2),
            ("K1(0.5)", fixed_delta_constant(0.5), X.K1_EPS05),
            ("fixed bound (2,2^-5)", fixed_delta_bound(2.0, 2.0**-5).raw, X.FIXED_DELTA_2_2POW5),
            ("a constant", A_UNIFORM, X.A_UNIFORM),
            ("K2(1)", uniform_constant(1.0), X.K2_EPS1),
            ("K2(0.4)", uniform_constant(0.4), X.K2_EPS04),
            ("uniform bound (2,2^-5)", uniform_bound(2.0, 2.0**-5).raw, X.UNIFORM_2_2POW5),
            ("uniform bound (0.3,2^-5)", uniform_bound(0.3, 2.0**-5).raw, X.UNIFORM_03_2POW5),
            ("uniform bound (2,2^-11)", uniform_bound(2.0, 2.0**-11).raw, X.UNIFORM_FLOOR_2_2POW11),
            (
                "scaled fixed (2,2^-5,T=2)",
                scaled_fixed_delta_bound(2.0, 2.0**-5, 2.0).raw,
                X.SCALED_FIXED_2_2POW5_T2,
            ),
            ("tail (4,1)", tail_bound(4, 1.0).raw, X.TAIL_4_1),
            ("tail (8,1)", tail_bound(8, 1.0).raw, X.TAIL_8_1),
            ("tail (4,2)", tail_bound(4, 2.0).raw, X.TAIL_4_2),
            ("tail (19,2)", tail_bound(19, 2.0).raw, X.TAIL_BUDGET_N18_EPS2),
            (
                "local bound (1,2^-10,4)",
                truncated_local_bound(1.0, 2.0**-10, 4).raw,
                X.TRUNC_LOCAL_1_2POW10_N4,
            ),
            (
                "local bound (2,2^-10,4)",
                truncated_local_bound(2.0, 2.0**-10, 4).raw,
                X.TRUNC_LOCAL_2_2POW10_N4,
            ),
            (
                "local bound (1,2^-4,4)",
                truncated_local_bound(1.0, 2.0**-4, 4).raw,
                X.TRUNC_LOCAL_1_2POW4_N4,
            ),
            ("m(2,4)", m_of_epsilon(2.0, 4), X.M_OF_EPS_2_4),
            ("m(1,4)", m_of_epsilon(1.0, 4), X.M_OF_EPS_1_4),
            ("m(0.5,8)", m_of_epsilon(0.5, 8), X.M_OF_EPS_05_8),
            ("f below 1", 1.0 - 1.0 / math.log(2.0), X.F_EPS_LE1),
            ("block bound (1,4)", block_bound(1.0, 4).raw, X.BLOCK_BOUND_1_4),
            ("block bound (2,4)", block_bound(2.0, 4).raw, X.BLOCK_BOUND_2_4),
            ("deviation bound (1,2^-10)", local_deviation_bound(1.0, 2.0**-10).raw, X.LOCAL_DEV_1_2POW10),
            ("deviation bound (2,2^-10)", local_deviation_bound(2.0, 2.0**-10).raw, X.LOCAL_DEV_2_2POW10),
            ("deviation bound (0.1,2^-5)", local_deviation_bound(0.1, 2.0**-5).raw, X.LOCAL_DEV_01_2POW5),
            ("deviation bound (1,2^-18)", local_deviation_bound(1.0, 2.0**-18).raw, X.LOCAL_DEV_1_2POW18),
            ("series I1(1)", audit1.direct_sum, X.SERIES_I1_EPS1),
            ("series I2(1)", audit2.direct_sum, X.SERIES_I2_EPS1),
            ("series regime bound", audit1.claimed_bound, X.SERIES_REGIME_BOUND_EPS1),
        ]
        bad = [
            (label, got, want)
            for label, got, want in table
            if not math.isclose(float(got), float(want), rel_tol=1e-5, abs_tol=0.0)
        ]
        assert not bad, bad
        # integer-valued entries must be exact, not merely close
        assert (m_of_epsilon(2.0, 4), m_of_epsilon(1.0, 4), m_of_epsilon(0.5, 8)) == (6, 5, 9)


class TestCheck12SeriesConstantsAudit:
    @staticmethod
    def closed_form(k: int) -> Fraction:
        # sum_{m>=0} 2^-m (1 + m/8)^(k+1) via the geometric moment sums
        # sum m^i 2^-m for i = 0..3
        moments = [Fraction(2), Fraction(2), Fraction(6), Fraction(26)]
        total = Fraction(0)
        for i in range(k + 2):
            total += math.comb(k + 1, i) * Fraction(1, 8**i) * moments[i]
        return total

    def test_exact_series_values(self):
        assert self.closed_form(1) == Fraction(83, 32)
        assert self.closed_form(2) == Fraction(789, 256)
        assert float(Fraction(83, 32)) == X.SERIES_I1_EPS1
        assert float(Fraction(789, 256)) == X.SERIES_I2_EPS1
        audit1 = series_audit(1, 1.0)
        audit2 = series_audit(2, 1.0)
        assert abs(audit1.direct_sum - float(self.closed_form(1))) <= audit1.error_bound
        assert abs(audit2.direct_sum - float(self.closed_form(2))) <= audit2.error_bound

    def test_discrepancy_is_informational_only(self):
        # the summed value exceeds the stated constant at epsilon=1: the
        # audit must flag it without raising
        audit = series_audit(1, 1.0)
        assert audit.regime == "large_epsilon"
        assert audit.direct_sum > audit.claimed_bound
        assert audit.consistent is False


class TestCheck13VerdictMachinery:
    def test_corrupted_bound_yields_violation_and_exit_3(self, tmp_path, capsys):
        code = cli_main([
            "verify", "--theorem", "truncated-local", "--trials", "1000",
            "--seed", "0", "--eps", "1", "--delta", "2^-4", "--n", "4",
            "--bound-scale", "1e-6", "--outdir", str(tmp_path),
        ])
        out = capsys.readouterr().out
        assert code == 3
        assert json.loads(out.splitlines()[0])["verdict"] == "violated"
