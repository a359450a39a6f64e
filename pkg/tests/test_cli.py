"""Unit tests for the command-line interface."""

from __future__ import annotations

import csv
import json
import math

import pytest

from brownian_modulus.cli import main, parse_dyadic

import _expected as X


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_lines(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class TestParseDyadic:
    def test_dyadic_literals_are_exact(self):
        assert parse_dyadic("2^-5") == 2.0**-5
        assert parse_dyadic("2^-18") == 2.0**-18
        assert parse_dyadic("2^3") == 8.0

    def test_decimal_literals(self):
        assert parse_dyadic("0.25") == 0.25
        assert parse_dyadic(" 1e-3 ") == 1e-3

    def test_malformed(self):
        with pytest.raises(ValueError):
            parse_dyadic("2^x")
        with pytest.raises(ValueError):
            parse_dyadic("abc")


class TestBoundCommand:
    def test_single_evaluation(self, capsys):
        code, out, _ = run_cli(capsys, "bound", "fixed-delta", "--eps", "2", "--delta", "2^-5")
        assert code == 0
        rows = json_lines(out)
        assert len(rows) == 1
        assert math.isclose(rows[0]["raw"], X.FIXED_DELTA_2_2POW5, rel_tol=1e-12)
        assert rows[0]["theorem"] == "fixed_delta"
        assert rows[0]["param_epsilon"] == 2.0

    def test_grid_cross_product(self, capsys):
        code, out, _ = run_cli(
            capsys, "bound", "uniform", "--eps", "1,2", "--delta", "2^-6,2^-5"
        )
        assert code == 0
        rows = json_lines(out)
        assert len(rows) == 4
        assert {(r["param_epsilon"], r["param_delta0"]) for r in rows} == {
            (1.0, 2.0**-6), (1.0, 2.0**-5), (2.0, 2.0**-6), (2.0, 2.0**-5)
        }

    def test_csv_file_output_with_manifest(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "bound", "tail", "--n", "4", "--d", "1",
            "--format", "csv", "--out", "tail.csv", "--outdir", str(tmp_path),
        )
        assert code == 0
        csv_path = tmp_path / "tail.csv"
        assert str(csv_path) in out
        with csv_path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 1
        assert math.isclose(float(rows[0]["raw"]), X.TAIL_4_1, rel_tol=1e-12)
        manifest = json.loads((tmp_path / "tail.csv.manifest.json").read_text())
        assert {"schema_version", "tool_version", "config_hash", "argv"} <= set(manifest)

    def test_missing_flag_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "bound", "fixed-delta", "--eps", "2")
        assert code == 2
        assert "--delta" in err

    def test_domain_error_maps_to_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "bound", "truncated-global", "--eps", "1", "--delta", "2^-5", "--n", "3"
        )
        assert code == 2
        assert "error:" in err


class TestSupCommand:
    def test_global_with_oracle_certificate(self, capsys):
        code, out, _ = run_cli(
            capsys, "sup", "--seed", "1", "--level", "5", "--delta", "2^-5",
            "--kind", "gap-global", "--oracle", "2^-10",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] > 0.0
        assert payload["oracle"]["dominates"] is True
        assert payload["oracle"]["within_slack"] is True
        assert payload["oracle"]["gap"] <= payload["oracle"]["slack"]

    def test_zero_path_local(self, capsys):
        code, out, _ = run_cli(
            capsys, "sup", "--zero", "--level", "4", "--delta", "2^-4", "--kind", "local-plain"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == 0.0
        # the zero path attains its supremum 0 at every node (unlike a
        # strictly negative prefix, whose sup is the unattained limit)
        assert payload["attained"] is True

    def test_block_kind_level_routing(self, capsys):
        code, out, _ = run_cli(
            capsys, "sup", "--seed", "2", "--level", "5", "--kind", "block",
            "--m", "4", "--eps", "1",
        )
        assert code == 0
        assert "value" in json.loads(out)
        code, _, err = run_cli(
            capsys, "sup", "--seed", "2", "--level", "6", "--kind", "block",
            "--m", "4", "--eps", "1",
        )
        assert code == 2
        assert "error:" in err

    def test_missing_kind_flag(self, capsys):
        code, _, err = run_cli(
            capsys, "sup", "--seed", "1", "--level", "5", "--delta", "2^-5",
            "--kind", "local-corrected",
        )
        assert code == 2
        assert "--eps" in err


class TestVerifyCommand:
    def test_single_run_writes_report_and_manifest(self, tmp_path, capsys):
        code, out, err = run_cli(
            capsys, "verify", "--theorem", "truncated-local", "--trials", "40",
            "--seed", "3", "--eps", "1", "--delta", "2^-4", "--n", "4",
            "--tag", "unit", "--outdir", str(tmp_path),
        )
        assert code == 0
        summary = json_lines(out)
        assert summary[0]["theorem"] == "truncated_local"
        assert summary[0]["verdict"] in {"consistent", "inconclusive"}
        report_path = tmp_path / "verify-truncated_local-unit.json"
        report = json.loads(report_path.read_text())
        assert report["config"]["seed"] == 3
        manifest = json.loads(
            (tmp_path / "verify-truncated_local-unit.json.manifest.json").read_text()
        )
        assert manifest["master_seed"] == 3
        assert str(report_path) in err

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({
            "theorem": "truncated_local", "trials": 500, "seed": 1,
            "epsilon": 1.0, "delta": "2^-4", "level_n": 4,
        }))
        code, out, _ = run_cli(
            capsys, "verify", "--config", str(config_path), "--trials", "25",
            "--outdir", str(tmp_path),
        )
        assert code == 0
        report = json_lines(out)[0]
        path = next(tmp_path.glob("verify-truncated_local-*.json"))
        assert json.loads(path.read_text())["config"]["trials"] == 25

    def test_sweep_writes_jsonl_and_csv(self, tmp_path, capsys):
        config_path = tmp_path / "sweep.json"
        config_path.write_text(json.dumps({
            "theorem": "truncated_local", "trials": 20, "seed": 0,
            "epsilon": [1.0, 2.0], "delta": ["2^-5", "2^-4"], "level_n": 4,
        }))
        code, out, _ = run_cli(
            capsys, "verify", "--config", str(config_path), "--tag", "sw",
            "--outdir", str(tmp_path),
        )
        assert code == 0
        assert len(json_lines(out)) == 4
        rows = [json.loads(line) for line in (tmp_path / "sweep-sw.jsonl").read_text().splitlines()]
        assert len(rows) == 4
        assert {(r["config"]["epsilon"], r["config"]["delta"]) for r in rows} == {
            (1.0, 2.0**-5), (1.0, 2.0**-4), (2.0, 2.0**-5), (2.0, 2.0**-4)
        }
        with (tmp_path / "sweep-sw.csv").open() as handle:
            summary = list(csv.DictReader(handle))
        assert len(summary) == 4
        assert {"verdict", "rate", "bound_clamped"} <= set(summary[0])
        assert (tmp_path / "sweep-sw.jsonl.manifest.json").exists()

    def test_violated_verdict_exits_3(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--theorem", "truncated-local", "--trials", "300",
            "--seed", "0", "--eps", "1", "--delta", "2^-4", "--n", "4",
            "--bound-scale", "1e-9", "--outdir", str(tmp_path),
        )
        assert code == 3
        assert json_lines(out)[0]["verdict"] == "violated"

    def test_unknown_config_key(self, tmp_path, capsys):
        config_path = tmp_path / "bad.json"
        config_path.write_text(json.dumps({"theorem": "tail", "bogus": 1}))
        code, _, err = run_cli(capsys, "verify", "--config", str(config_path))
        assert code == 2
        assert "bogus" in err

    def test_missing_theorem(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "verify", "--trials", "5", "--seed", "0", "--outdir", str(tmp_path)
        )
        assert code == 2
        assert "theorem" in err


class TestAuditCommand:
    def test_known_series_values(self, capsys):
        code, out, _ = run_cli(capsys, "audit", "--k", "1,2", "--eps", "1")
        assert code == 0
        rows = json_lines(out)
        by_k = {row["k"]: row for row in rows}
        assert math.isclose(by_k[1]["direct_sum"], 83.0 / 32.0, rel_tol=1e-9)
        assert math.isclose(by_k[2]["direct_sum"], 789.0 / 256.0, rel_tol=1e-9)
        assert all({"claimed_bound", "regime", "consistent"} <= set(r) for r in rows)

    def test_epsilon_grid(self, capsys):
        code, out, _ = run_cli(capsys, "audit", "--k", "1", "--eps", "0.05,1")
        assert code == 0
        rows = json_lines(out)
        assert {row["regime"] for row in rows} == {"small_epsilon", "large_epsilon"}


class TestOracleCompareCommand:
    def test_certificates_hold_on_grid(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "oracle-compare", "--seeds", "0:2", "--levels", "4",
            "--deltas", "2^-6,2^-5", "--kinds", "gap-global,fixed-global",
            "--resolution", "2^-10", "--format", "csv",
            "--out", "cmp.csv", "--outdir", str(tmp_path),
        )
        assert code == 0
        with (tmp_path / "cmp.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 2 * 1 * 2 * 2
        assert all(row["ok"] == "True" for row in rows)

    def test_rejects_local_kind(self, capsys):
        code, _, err = run_cli(
            capsys, "oracle-compare", "--seeds", "0", "--levels", "4",
            "--deltas", "2^-5", "--kinds", "local-plain",
        )
        assert code == 2
        assert "error:" in err


class TestTopLevel:
    def test_no_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
