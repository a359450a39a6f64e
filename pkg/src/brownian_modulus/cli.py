"""Batch command-line front end.

Subcommands: ``bound`` (closed-form bound tables over parameter grids),
``sup`` (exact path suprema, optionally checked against the grid oracle),
``verify`` (Monte Carlo experiments, single or swept), ``audit`` (series
constants), and ``oracle-compare`` (exact-vs-oracle sweeps).  All output
is machine readable: JSON or JSON-lines on stdout, optionally JSON/CSV
files accompanied by a run manifest.

Exit codes: 0 on success (including vacuous/inconclusive verdicts and
informational audit discrepancies), 2 on usage/configuration/domain
errors, 3 when a verification verdict is ``violated``.

``delta``-like quantities accept decimal literals or the exact dyadic
shorthand ``2^-k``.  The default output directory is the current one,
overridable by ``--outdir`` or the ``BROWNIAN_MODULUS_OUTDIR`` variable.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bounds import (
    BoundEvaluation,
    block_bound,
    fixed_delta_bound,
    local_deviation_bound,
    scaled_fixed_delta_bound,
    scaled_uniform_bound,
    series_audit,
    tail_bound,
    truncated_global_bound,
    truncated_local_bound,
    uniform_bound,
)
from .modulus import DomainError
from .montecarlo import ConfigError, ExperimentConfig, run_experiment
from .paths import TruncatedPath
from .suprema import (
    FIXED_GLOBAL,
    GAP_GLOBAL,
    GAP_GLOBAL_CORRECTED,
    LOCAL_PLAIN,
    LevelMismatchError,
    block_grid_oracle,
    block_oracle_slack,
    block_sup,
    global_band_sup,
    grid_oracle,
    grid_oracle_global_many,
    local_corrected,
    local_sup,
    oracle_slack,
)

_SCHEMA_VERSION = 1

_GLOBAL_KINDS = {
    "gap-global": GAP_GLOBAL,
    "fixed-global": FIXED_GLOBAL,
    "gap-global-corrected": GAP_GLOBAL_CORRECTED,
}

_THEOREM_IDS = {
    "truncated-global": "truncated_global",
    "fixed-delta": "fixed_delta",
    "uniform": "uniform",
    "scaled-fixed": "scaled_fixed",
    "scaled-uniform": "scaled_uniform",
    "tail": "tail",
    "truncated-local": "truncated_local",
    "block-local": "block_local",
    "local-deviation": "local_deviation",
}


class _UsageError(ValueError):
    """Bad flag combination or value: maps to exit code 2."""


#: The exact engine and the grid oracle evaluate the path through two
#: independent float computations (refined node table vs direct series), so
#: oracle dominance is an exact inequality only up to this relative noise.
_DOMINANCE_TOL = 1e-12


def parse_dyadic(text: str) -> float:
    """Parse a decimal literal or the exact shorthand ``2^-k``."""
    text = text.strip()
    if text.startswith("2^"):
        try:
            exponent = int(text[2:])
        except ValueError as exc:
            raise _UsageError(f"malformed dyadic literal {text!r}") from exc
        return float(2.0**exponent)
    try:
        return float(text)
    except ValueError as exc:
        raise _UsageError(f"not a number or 2^-k literal: {text!r}") from exc


def _parse_grid(text: str) -> list[float]:
    return [parse_dyadic(piece) for piece in text.split(",") if piece.strip()]


def _parse_int_grid(text: str) -> list[int]:
    values: list[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ":" in piece:  # half-open range lo:hi
            lo_text, hi_text = piece.split(":", 1)
            values.extend(range(int(lo_text), int(hi_text)))
        else:
            values.append(int(piece))
    if not values:
        raise _UsageError(f"empty integer grid: {text!r}")
    return values


def _outdir(args: argparse.Namespace) -> Path:
    if getattr(args, "outdir", None):
        return Path(args.outdir)
    env = os.environ.get("BROWNIAN_MODULUS_OUTDIR")
    return Path(env) if env else Path(".")


def _config_hash(payload: Any) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _manifest(payload: Any, master_seed: int | None, started: str) -> dict[str, Any]:
    return {
        "schema_version": _SCHEMA_VERSION,
        "tool_version": __version__,
        "config_hash": _config_hash(payload),
        "master_seed": master_seed,
        "started": started,
        "finished": datetime.now(timezone.utc).isoformat(),
        "argv": sys.argv[1:],
    }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write_rows_csv(path: Path, rows: list[dict[str, Any]]) -> None:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def _flat_bound_row(evaluation: BoundEvaluation) -> dict[str, Any]:
    row: dict[str, Any] = {
        "theorem": evaluation.theorem,
        "raw": evaluation.raw,
        "clamped": evaluation.clamped,
        "vacuous": evaluation.vacuous,
    }
    for key, value in evaluation.params.items():
        row[f"param_{key}"] = value
    return row


# --------------------------------------------------------------------------
# bound
# --------------------------------------------------------------------------


def _cmd_bound(args: argparse.Namespace) -> int:
    theorem = _THEOREM_IDS[args.theorem]
    eps_grid = _parse_grid(args.eps) if args.eps is not None else [None]
    delta_grid = _parse_grid(args.delta) if args.delta is not None else [None]

    def build(eps: float | None, delta: float | None) -> BoundEvaluation:
        if theorem == "truncated_global":
            return truncated_global_bound(_need(eps, "--eps"), _need(delta, "--delta"), _need(args.n, "--n"))
        if theorem == "fixed_delta":
            return fixed_delta_bound(_need(eps, "--eps"), _need(delta, "--delta"))
        if theorem == "uniform":
            return uniform_bound(_need(eps, "--eps"), _need(delta, "--delta"))
        if theorem == "scaled_fixed":
            return scaled_fixed_delta_bound(
                _need(eps, "--eps"), _need(delta, "--delta"), _need(args.horizon, "--horizon")
            )
        if theorem == "scaled_uniform":
            return scaled_uniform_bound(
                _need(eps, "--eps"), _need(delta, "--delta"), _need(args.horizon, "--horizon")
            )
        if theorem == "tail":
            return tail_bound(_need(args.n, "--n"), _need(args.d, "--d"))
        if theorem == "truncated_local":
            return truncated_local_bound(_need(eps, "--eps"), _need(delta, "--delta"), _need(args.n, "--n"))
        if theorem == "block_local":
            return block_bound(_need(eps, "--eps"), _need(args.m, "--m"))
        if theorem == "local_deviation":
            return local_deviation_bound(_need(eps, "--eps"), _need(delta, "--delta"))
        raise _UsageError(f"unhandled theorem {theorem!r}")

    rows = [_flat_bound_row(build(eps, delta)) for eps in eps_grid for delta in delta_grid]
    return _emit_rows(args, rows, master_seed=None)


def _need(value: Any, flag: str) -> Any:
    if value is None:
        raise _UsageError(f"missing required flag {flag}")
    return value


def _emit_rows(args: argparse.Namespace, rows: list[dict[str, Any]], master_seed: int | None) -> int:
    started = _now()
    if getattr(args, "out", None):
        out_path = _outdir(args) / args.out
        out_path.parent.mkdir(parents=True, exist_ok=True)
        if args.format == "csv":
            _write_rows_csv(out_path, rows)
        else:
            with out_path.open("w") as handle:
                for row in rows:
                    handle.write(json.dumps(row) + "\n")
        manifest = _manifest(rows, master_seed, started)
        manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json")
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
        print(str(out_path))
    else:
        if args.format == "csv":
            writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]) if rows else [])
            writer.writeheader()
            writer.writerows(rows)
        else:
            for row in rows:
                print(json.dumps(row))
    return 0


# --------------------------------------------------------------------------
# sup
# --------------------------------------------------------------------------


def _cmd_sup(args: argparse.Namespace) -> int:
    delta = parse_dyadic(args.delta) if args.delta is not None else None
    if args.zero:
        path = TruncatedPath.zero(args.level)
    else:
        path = TruncatedPath.sample(args.level, _need(args.seed, "--seed"), stream=args.stream)

    if args.kind in _GLOBAL_KINDS:
        kind = _GLOBAL_KINDS[args.kind]
        result = global_band_sup(path, _need(delta, "--delta"), kind)
    elif args.kind == "local-plain":
        result = local_sup(path, _need(delta, "--delta"), LOCAL_PLAIN)
    elif args.kind == "local-corrected":
        result = local_sup(path, _need(delta, "--delta"), local_corrected(_need(args.eps, "--eps")))
    elif args.kind == "block":
        result = block_sup(path, _need(args.m, "--m"), _need(args.eps, "--eps"))
    else:
        raise _UsageError(f"unknown statistic kind {args.kind!r}")

    payload = result.to_json_dict()
    if args.oracle is not None:
        resolution = parse_dyadic(args.oracle)
        if args.kind == "block":
            oracle_value = block_grid_oracle(path, args.m, resolution)
            slack = block_oracle_slack(path, args.m, resolution)
        else:
            oracle_value = grid_oracle(path, delta, result.kind, resolution)
            slack = oracle_slack(path, delta, result.kind, resolution)
        payload["oracle"] = {
            "resolution": resolution,
            "value": oracle_value,
            "gap": result.value - oracle_value,
            "slack": slack,
            "dominates": result.value >= oracle_value - _DOMINANCE_TOL * max(1.0, abs(result.value)),
            "within_slack": result.value - oracle_value <= slack,
        }
    print(json.dumps(payload))
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

_VERIFY_GRID_FIELDS = ("epsilon", "delta")


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read config file {path!r}: {exc}") from exc
    if not isinstance(payload, dict):
        raise _UsageError(f"config file {path!r} must hold a flat JSON object")
    return payload


def _verify_settings(args: argparse.Namespace) -> dict[str, Any]:
    settings: dict[str, Any] = {}
    if args.config:
        settings.update(_load_config_file(args.config))
    overrides = {
        "theorem": _THEOREM_IDS.get(args.theorem, args.theorem) if args.theorem else None,
        "trials": args.trials,
        "seed": args.seed,
        "epsilon": args.eps,
        "delta": args.delta,
        "level_n": args.n,
        "approx_level_n": args.approx_n,
        "m": args.m,
        "d": args.d,
        "tail_horizon": args.horizon_j,
        "ci_level": args.ci,
        "workers": args.workers,
        "gamma_floor": args.gamma_floor,
        "bound_scale": args.bound_scale,
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    if args.zero_path:
        settings["zero_path"] = True
    return settings


def _expand_sweep(settings: dict[str, Any]) -> list[dict[str, Any]]:
    """Cross product over any list-valued epsilon/delta entries."""
    combos: list[dict[str, Any]] = [dict(settings)]
    for field_name in _VERIFY_GRID_FIELDS:
        value = settings.get(field_name)
        if isinstance(value, (list, tuple)):
            combos = [
                {**combo, field_name: item} for combo in combos for item in value
            ]
    return combos


def _as_config(settings: dict[str, Any]) -> ExperimentConfig:
    known = {f for f in ExperimentConfig.__dataclass_fields__}
    unknown = set(settings) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    if "theorem" not in settings:
        raise ConfigError("a theorem id is required (flag --theorem or config file)")
    for field_name, caster in (("epsilon", float), ("delta", float), ("gamma_floor", float)):
        if field_name in settings and isinstance(settings[field_name], str):
            settings[field_name] = parse_dyadic(settings[field_name])
        if field_name in settings and settings[field_name] is not None:
            settings[field_name] = caster(settings[field_name])
    if "trials" not in settings or "seed" not in settings:
        raise ConfigError("trials and seed are required")
    return ExperimentConfig(**settings)


def _summary_row(report_dict: dict[str, Any]) -> dict[str, Any]:
    config = report_dict["config"]
    return {
        "theorem": config["theorem"],
        "epsilon": config["epsilon"],
        "delta": config["delta"],
        "trials": config["trials"],
        "seed": config["seed"],
        "exceedances": report_dict["exceedances"],
        "rate": report_dict["rate"],
        "ci_low": report_dict["ci_low"],
        "ci_high": report_dict["ci_high"],
        "bound_raw": report_dict["bound"]["raw"],
        "bound_clamped": report_dict["bound"]["clamped"],
        "error_budget": report_dict["error_budget"],
        "verdict": report_dict["verdict"],
    }


def _cmd_verify(args: argparse.Namespace) -> int:
    settings = _verify_settings(args)
    combos = _expand_sweep(settings)
    started = _now()
    reports = []
    for combo in combos:
        config = _as_config(combo)
        reports.append(run_experiment(config))

    outdir = _outdir(args)
    outdir.mkdir(parents=True, exist_ok=True)
    hash_payload = [asdict(report.config) for report in reports]
    tag = args.tag or _config_hash(hash_payload)[:12]
    master_seed = reports[0].config.seed if reports else None

    if len(reports) == 1:
        report_path = outdir / f"verify-{reports[0].config.theorem}-{tag}.json"
        report_path.write_text(json.dumps(reports[0].to_json_dict(), indent=2) + "\n")
        written = [report_path]
    else:
        jsonl_path = outdir / f"sweep-{tag}.jsonl"
        with jsonl_path.open("w") as handle:
            for report in reports:
                handle.write(json.dumps(report.to_json_dict()) + "\n")
        csv_path = outdir / f"sweep-{tag}.csv"
        _write_rows_csv(csv_path, [_summary_row(r.to_json_dict()) for r in reports])
        written = [jsonl_path, csv_path]

    manifest = _manifest(hash_payload, master_seed, started)
    manifest_path = written[0].with_suffix(written[0].suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")

    for report in reports:
        print(
            json.dumps(
                {
                    "theorem": report.config.theorem,
                    "verdict": report.verdict,
                    "exceedances": report.exceedances,
                    "rate": report.rate,
                    "bound_clamped": report.bound.clamped,
                }
            )
        )
    for path in written + [manifest_path]:
        print(str(path), file=sys.stderr)
    return 3 if any(report.verdict == "violated" for report in reports) else 0


# --------------------------------------------------------------------------
# audit
# --------------------------------------------------------------------------


def _cmd_audit(args: argparse.Namespace) -> int:
    k_values = _parse_int_grid(args.k)
    eps_grid = _parse_grid(args.eps)
    rows = []
    for k in k_values:
        for eps in eps_grid:
            audit = series_audit(k, eps)
            rows.append(
                {
                    "k": audit.k,
                    "epsilon": audit.epsilon,
                    "direct_sum": audit.direct_sum,
                    "claimed_bound": audit.claimed_bound,
                    "regime": audit.regime,
                    "consistent": audit.consistent,
                }
            )
    return _emit_rows(args, rows, master_seed=None)


# --------------------------------------------------------------------------
# oracle-compare
# --------------------------------------------------------------------------


def _cmd_oracle_compare(args: argparse.Namespace) -> int:
    seeds = _parse_int_grid(args.seeds)
    levels = _parse_int_grid(args.levels)
    deltas = _parse_grid(args.deltas)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    for kind_name in kinds:
        if kind_name not in _GLOBAL_KINDS:
            raise _UsageError(
                f"oracle-compare handles global kinds {sorted(_GLOBAL_KINDS)}, got {kind_name!r}"
            )
    resolution = parse_dyadic(args.resolution)

    kind_objects = [_GLOBAL_KINDS[name] for name in kinds]
    rows = []
    failures = 0
    for seed in seeds:
        for level in levels:
            path = TruncatedPath.sample(level, seed)
            oracle_values = grid_oracle_global_many(path, resolution, deltas, kind_objects)
            for delta in deltas:
                for kind_name, kind in zip(kinds, kind_objects):
                    oracle_value = oracle_values[(kind.kind, delta)]
                    exact = global_band_sup(path, delta, kind).value
                    slack = oracle_slack(path, delta, kind, resolution)
                    ok = (
                        exact >= oracle_value - _DOMINANCE_TOL * max(1.0, abs(exact))
                        and exact - oracle_value <= slack
                    )
                    failures += 0 if ok else 1
                    rows.append(
                        {
                            "seed": seed,
                            "level": level,
                            "delta": delta,
                            "kind": kind_name,
                            "exact": exact,
                            "oracle": oracle_value,
                            "gap": exact - oracle_value,
                            "slack": slack,
                            "ok": ok,
                        }
                    )
    status = _emit_rows(args, rows, master_seed=seeds[0] if seeds else None)
    if failures:
        print(f"{failures} comparisons outside certificate", file=sys.stderr)
    return status


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brownian-modulus",
        description="Brownian modulus statistics: bounds, exact suprema, verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--format", choices=("json", "csv"), default="json")
        sub.add_argument("--out", help="output file name (inside the output directory)")
        sub.add_argument("--outdir", help="output directory (default: env or cwd)")

    bound = commands.add_parser("bound", help="evaluate closed-form bounds over grids")
    bound.add_argument("theorem", choices=sorted(_THEOREM_IDS))
    bound.add_argument("--eps", help="epsilon value or comma grid")
    bound.add_argument("--delta", help="delta value or comma grid (decimal or 2^-k)")
    bound.add_argument("--n", type=int, help="truncation/start level")
    bound.add_argument("--m", type=int, help="dyadic block index")
    bound.add_argument("--d", type=float, help="tail exponent")
    bound.add_argument("--horizon", type=float, help="interval length for scaled theorems")
    add_output_flags(bound)
    bound.set_defaults(handler=_cmd_bound)

    sup = commands.add_parser("sup", help="exact supremum of one path statistic")
    sup.add_argument("--seed", type=int)
    sup.add_argument("--stream", type=int, default=0)
    sup.add_argument("--level", type=int, required=True)
    sup.add_argument("--delta")
    sup.add_argument(
        "--kind",
        required=True,
        choices=sorted(_GLOBAL_KINDS) + ["local-plain", "local-corrected", "block"],
    )
    sup.add_argument("--eps", type=float, help="epsilon (local-corrected / block kinds)")
    sup.add_argument("--m", type=int, help="block index (block kind)")
    sup.add_argument("--oracle", help="also run the grid oracle at this resolution")
    sup.add_argument("--zero", action="store_true", help="use the zero path (test hook)")
    sup.set_defaults(handler=_cmd_sup)

    verify = commands.add_parser("verify", help="run Monte Carlo verification")
    verify.add_argument("--config", help="flat JSON config file")
    verify.add_argument("--theorem", help="theorem id (kebab or snake case)")
    verify.add_argument("--trials", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--eps", type=parse_dyadic)
    verify.add_argument("--delta", type=parse_dyadic)
    verify.add_argument("--n", type=int, help="statistic truncation level")
    verify.add_argument("--approx-n", type=int, help="approximation level N")
    verify.add_argument("--m", type=int)
    verify.add_argument("--d", type=float)
    verify.add_argument("--horizon-j", type=int, help="tail horizon J")
    verify.add_argument("--ci", type=float, help="confidence level (default 0.99)")
    verify.add_argument("--workers", type=int)
    verify.add_argument("--gamma-floor", type=parse_dyadic)
    verify.add_argument("--zero-path", action="store_true")
    verify.add_argument("--bound-scale", type=float)
    verify.add_argument("--tag", help="output file tag (default: config hash prefix)")
    verify.add_argument("--outdir")
    verify.set_defaults(handler=_cmd_verify)

    audit = commands.add_parser("audit", help="series constants audit")
    audit.add_argument("--k", required=True, help="series index or comma grid (1,2)")
    audit.add_argument("--eps", required=True, help="epsilon value or comma grid")
    add_output_flags(audit)
    audit.set_defaults(handler=_cmd_audit)

    compare = commands.add_parser(
        "oracle-compare", help="exact suprema vs grid oracle over a parameter sweep"
    )
    compare.add_argument("--seeds", required=True, help="seed grid, e.g. 0:50 or 1,2,3")
    compare.add_argument("--levels", required=True, help="level grid, e.g. 3,4,5,6")
    compare.add_argument("--deltas", required=True, help="delta grid, e.g. 2^-6,2^-5")
    compare.add_argument(
        "--kinds",
        default="gap-global,fixed-global,gap-global-corrected",
        help="comma list of global statistic kinds",
    )
    compare.add_argument("--resolution", default="2^-16")
    add_output_flags(compare)
    compare.set_defaults(handler=_cmd_oracle_compare)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (_UsageError, ConfigError, DomainError, LevelMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
