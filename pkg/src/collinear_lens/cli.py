"""Command-line surface.

Six subcommands: ``fit``, ``decompose``, ``diagnose``, ``ridge``,
``difference`` and ``simulate``. Every run emits a report envelope, as
JSON (stable key order, floats at 12 significant digits, so output is
byte-reproducible and diffable) or as flattened text that contains every
number the JSON does. Exit codes: 0 success, 2 configuration error,
3 data error, 4 numerical error.

The envelope echoes only the configuration that defines the result;
execution details such as the worker count are deliberately left out so
serial and parallel runs of the same experiment emit identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__
from .data import Dataset, center
from .diagnostics import geometric_report
from .exceptions import (
    CollinearLensError,
    ConfigError,
    DataError,
    NumericalError,
    OrderingMismatchError,
)
from .csvio import read_csv
from .decomposition import pairwise_slopes, recover_partials, t_star
from .montecarlo import DGPConfig, reproduce_table, run_experiment
from .regression import confidence_interval, conventional_stats, fit_ols, univariate_slopes
from .remedies import difference_model, ridge_path, structure_compare

#: Significant digits for serialized numbers; enough to verify 1e-9
#: tolerances in golden tests without float-printing ambiguity.
FLOAT_DIGITS = 12


# ---------------------------------------------------------------------------
# serialization

def _num(value: float):
    """A JSON-safe number: rounded to 12 significant digits, inf flagged."""
    v = float(value)
    if math.isnan(v):
        raise ValueError("refusing to serialize NaN")
    if math.isinf(v):
        return "infinite"
    return float(f"{v:.{FLOAT_DIGITS}g}")


def _nums(values) -> list:
    return [_num(v) for v in np.asarray(values, dtype=float).ravel()]


def _matrix(values) -> list:
    return [_nums(row) for row in np.asarray(values, dtype=float)]


def render_json(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


def _flatten(obj: Any, prefix: str, lines: list[str]) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key), lines)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _flatten(item, f"{prefix}[{i}]", lines)
    else:
        if isinstance(obj, bool):
            text = "true" if obj else "false"
        elif obj is None:
            text = "null"
        else:
            text = json.dumps(obj)
        lines.append(f"{prefix} = {text}")


def render_text(envelope: dict) -> str:
    lines: list[str] = []
    payload = envelope.get("payload", {})
    if envelope.get("subcommand") == "simulate" and "cells" in payload:
        lines.extend(_table_lines(payload))
        lines.append("")
    _flatten(envelope, "", lines)
    return "\n".join(lines) + "\n"


def _table_lines(payload: dict) -> list[str]:
    """Aligned grid: one block per rho, n down the rows, beta1 across."""
    lines = [f"experiment table {payload['table']} "
             f"(trials={payload['trials']})"]
    for rho in payload["rhos"]:
        header = f"  rho={rho}" + "".join(
            f"{'beta1=' + str(b):>14}" for b in payload["beta1s"]
        )
        lines.append(header)
        for n in payload["ns"]:
            row = f"  n={n:<6}"
            for b in payload["beta1s"]:
                cell = next(c for c in payload["cells"]
                            if c["n"] == n and c["rho"] == rho
                            and c["beta1"] == b)
                row += f"{cell['proportion'] * 100:>13.2f}%"
            lines.append(row)
    return lines


# ---------------------------------------------------------------------------
# payload builders

def _fit_payload(fit, alpha: float | None = None) -> dict:
    conv = conventional_stats(fit)
    variables = []
    for j, name in enumerate(fit.names):
        entry = {
            "name": name,
            "slope": _num(fit.slopes[j]),
            "std_error": _num(fit.std_errors[j]),
            "t": _num(fit.t_values[j]),
            "t_conventional": (None if conv is None
                               else _num(abs(conv.t_values[j]))),
        }
        if alpha is not None:
            ci = confidence_interval(fit, j, alpha)
            entry["ci_low"] = _num(ci.low)
            entry["ci_high"] = _num(ci.high)
            entry["ci_norm_ratio"] = (None if ci.norm_ratio is None
                                      else _num(ci.norm_ratio))
        variables.append(entry)
    return {
        "n": fit.n,
        "df": fit.df,
        "intercept": _num(fit.intercept),
        "r_squared": _num(fit.r_squared),
        "rss": _num(fit.rss),
        "ess": _num(fit.ess),
        "sigma_sq": _num(fit.sigma_sq),
        "f_stat": _num(fit.f_stat),
        "conventional": (None if conv is None else {
            "df": conv.df,
            "sigma_sq": _num(conv.sigma_sq),
        }),
        "variables": variables,
    }


def _payload_fit(data: Dataset, alpha: float) -> dict:
    fit = fit_ols(center(data))
    return _fit_payload(fit, alpha=alpha)


def _payload_decompose(data: Dataset) -> dict:
    cd = center(data)
    fit = fit_ols(cd)
    pw = pairwise_slopes(cd)
    uni = univariate_slopes(cd)
    recomposed = pw.matrix @ fit.slopes
    recovered = recover_partials(pw, uni)
    return {
        "names": list(cd.names),
        "pairwise_slope_matrix": _matrix(pw.matrix),
        "partial_slopes": _nums(fit.slopes),
        "univariate_slopes": _nums(uni),
        "recomposed_univariate": _nums(recomposed),
        "max_abs_recomposition_error": _num(
            float(np.max(np.abs(recomposed - uni)))
        ),
        "recovered_partials": _nums(recovered),
        "condition_number": _num(pw.condition_number),
        "t_star": _nums([t_star(fit, cd, j) for j in range(cd.p)]),
    }


def _payload_diagnose(data: Dataset, alpha: float, ordered: bool) -> dict:
    comparison = None
    if ordered:
        original = fit_ols(center(data))
        differenced = difference_model(data)
        comparison = structure_compare(original, differenced, data)
    report = geometric_report(data, alpha=alpha, diff_comparison=comparison)
    payload = {
        "classification_hint": report.classification_hint.value,
        "f_stat": _num(report.f_stat),
        "r_squared": _num(report.r_squared),
        "intercept": _num(report.intercept),
        "df": report.df,
        "sigma_sq": _num(report.sigma_sq),
        "df_conventional": report.df_conventional,
        "sigma_sq_conventional": (None if report.sigma_sq_conventional is None
                                  else _num(report.sigma_sq_conventional)),
        "infinite_significance": report.infinite_significance,
        "correlation_matrix": _matrix(report.correlation_matrix),
        "geometric": {
            "y_norm": _num(report.geometric.y_norm),
            "fitted_norm": _num(report.geometric.fitted_norm),
            "residual_norm": _num(report.geometric.residual_norm),
            "scaled_regressor_norms": _nums(
                report.geometric.scaled_regressor_norms),
            "net_effect_norms": _nums(report.geometric.net_effect_norms),
            "pythagorean_gap": _num(report.geometric.pythagorean_gap),
        },
        "variables": [
            {
                "name": v.name,
                "univariate_slope": _num(v.univariate_slope),
                "partial_slope": _num(v.partial_slope),
                "sign_deviation": v.sign_deviation,
                "t": _num(v.t_paper),
                "t_conventional": (None if v.t_conventional is None
                                   else _num(v.t_conventional)),
                "t_star": _num(v.t_star),
                "vif": _num(v.vif),
                "univariate_t": _num(v.univariate_t),
            }
            for v in report.per_variable
        ],
    }
    if comparison is not None:
        payload["comparison"] = _comparison_payload(comparison)
    return payload


def _comparison_payload(comparison) -> dict:
    return {
        "names": list(comparison.names),
        "original_partials": _nums(comparison.original_partials),
        "difference_partials": _nums(comparison.difference_partials),
        "original_univariates": _nums(comparison.original_univariates),
        "difference_univariates": _nums(comparison.difference_univariates),
        "max_abs_gap": _num(comparison.max_abs_gap),
        "sign_agreement": list(comparison.sign_agreement),
    }


def _payload_ridge(data: Dataset, lambdas) -> dict:
    cd = center(data)
    path = ridge_path(cd, lambdas=lambdas)
    return {
        "names": list(path.names),
        "lambdas": _nums(path.lambdas),
        "coefficients": _matrix(path.coefficients),
        "norms": _nums(path.norms),
    }


def _payload_difference(data: Dataset) -> dict:
    original = fit_ols(center(data))
    differenced = difference_model(data)
    comparison = structure_compare(original, differenced, data)
    return {
        "original_fit": _fit_payload(original),
        "difference_fit": _fit_payload(differenced),
        "comparison": _comparison_payload(comparison),
    }


def _cell_payload(result) -> dict:
    cfg = result.config
    return {
        "n": cfg.n,
        "rho": _num(cfg.rho),
        "beta1": _num(cfg.beta1),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "flagged": result.flagged,
        "proportion": _num(result.proportion),
        "mc_std_err": _num(result.mc_std_err),
        "analytic_approx": _num(result.analytic_approx),
        "regenerated": result.regenerated,
    }


def _payload_simulate(args) -> tuple[dict, list[str]]:
    if args.table is not None:
        grid = reproduce_table(args.table, seed=args.seed, trials=args.trials,
                               workers=args.workers)
        payload = {
            "table": grid.table,
            "trials": args.trials,
            "ns": list(grid.ns),
            "rhos": _nums(grid.rhos),
            "beta1s": _nums(grid.beta1s),
            "cells": [_cell_payload(c.result) for c in grid.cells],
        }
        return payload, list(grid.warnings)
    missing = [flag for flag, value in
               (("--n", args.n), ("--rho", args.rho), ("--beta1", args.beta1))
               if value is None]
    if missing:
        raise ConfigError(
            "simulate needs either --table or all of --n/--rho/--beta1 "
            f"(missing: {', '.join(missing)})"
        )
    try:
        config = DGPConfig(beta1=args.beta1, rho=args.rho, n=args.n,
                           trials=args.trials, seed=args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    result = run_experiment(config, workers=args.workers)
    return {"cell": _cell_payload(result)}, []


# ---------------------------------------------------------------------------
# argument handling

@dataclass(frozen=True)
class RunConfig:
    """Echoed configuration: exactly what defines the emitted payload."""

    subcommand: str
    values: dict

    def as_dict(self) -> dict:
        return {"subcommand": self.subcommand, **self.values}


def _parse_lambda_grid(spec: str) -> np.ndarray:
    """Either 'lo:hi:count' (geometric) or a comma list of values."""
    try:
        if ":" in spec:
            lo_s, hi_s, count_s = spec.split(":")
            lo, hi, count = float(lo_s), float(hi_s), int(count_s)
            if lo <= 0 or hi <= lo or count < 2:
                raise ValueError
            return np.geomspace(lo, hi, count)
        values = np.array(sorted(float(tok) for tok in spec.split(",")))
        if values.size == 0 or np.any(values < 0):
            raise ValueError
        return values
    except ValueError:
        raise ConfigError(
            f"bad --lambda-grid {spec!r}: expected 'lo:hi:count' or a "
            "comma-separated list of non-negative values"
        ) from None


def _looks_ordered(data: Dataset) -> bool:
    """Heuristic: some column is strictly monotonic, like a time index."""
    for name in data.names:
        d = np.diff(data.column(name))
        if np.all(d > 0) or np.all(d < 0):
            return True
    return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collinear-lens",
        description="Regression diagnostics around the univariate/partial "
                    "slope decomposition.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="CSV file path")
            p.add_argument("--response", required=True,
                           help="name of the response column")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p_fit = sub.add_parser("fit", help="centered least-squares fit report")
    add_common(p_fit)
    p_fit.add_argument("--alpha", type=float, default=0.05,
                       help="two-sided confidence level (default 0.05)")

    p_dec = sub.add_parser("decompose",
                           help="pairwise-slope matrix and slope decomposition")
    add_common(p_dec)

    p_diag = sub.add_parser("diagnose", help="multicollinearity diagnostics")
    add_common(p_diag)
    p_diag.add_argument("--alpha", type=float, default=0.05)
    p_diag.add_argument("--ordered", action="store_true",
                        help="assert the rows carry a meaningful order, "
                             "enabling difference-model evidence")

    p_ridge = sub.add_parser("ridge", help="ridge coefficient path")
    add_common(p_ridge)
    p_ridge.add_argument("--lambda-grid", default=None,
                         help="'lo:hi:count' geometric grid or comma list; "
                              "default spans the design scale")

    p_diff = sub.add_parser("difference",
                            help="difference-model fit and structure comparison")
    add_common(p_diff)
    p_diff.add_argument("--ordered", action="store_true",
                        help="required: differencing presumes the row order "
                             "is meaningful")

    p_sim = sub.add_parser("simulate", help="sign-deviation experiments")
    p_sim.add_argument("--table", type=int, choices=(1, 2), default=None,
                       help="run a full experiment table")
    p_sim.add_argument("--n", type=int, default=None)
    p_sim.add_argument("--rho", type=float, default=None)
    p_sim.add_argument("--beta1", type=float, default=None)
    p_sim.add_argument("--trials", type=int, default=100_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--workers", type=int, default=1,
                       help="chunk scheduling only; never changes the result")
    p_sim.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"--alpha must be in (0, 1), got {alpha}")
    return alpha


def dispatch(args) -> dict:
    warnings: list[str] = []
    sub = args.subcommand

    if sub == "simulate":
        payload, warnings = _payload_simulate(args)
        echo = {
            "table": args.table,
            "n": args.n,
            "rho": args.rho,
            "beta1": args.beta1,
            "trials": args.trials,
            "seed": args.seed,
            "format": args.format,
        }
    else:
        # validate configuration before touching the input file so config
        # mistakes exit with the config code, not the data code
        echo = {
            "input": str(args.input),
            "response": args.response,
            "format": args.format,
        }
        grid = None
        if sub in ("fit", "diagnose"):
            echo["alpha"] = _check_alpha(args.alpha)
        if sub == "diagnose":
            echo["ordered"] = args.ordered
        if sub == "ridge":
            grid = (None if args.lambda_grid is None
                    else _parse_lambda_grid(args.lambda_grid))
            echo["lambda_grid"] = None if grid is None else _nums(grid)
        if sub == "difference":
            if not args.ordered:
                raise ConfigError(
                    "difference requires --ordered: differencing is only "
                    "meaningful when the row order is"
                )
            echo["ordered"] = True

        data = read_csv(args.input, args.response)
        if sub == "fit":
            payload = _payload_fit(data, args.alpha)
        elif sub == "decompose":
            payload = _payload_decompose(data)
        elif sub == "diagnose":
            if args.ordered and not _looks_ordered(data):
                warnings.append(_UNORDERED_WARNING)
            payload = _payload_diagnose(data, args.alpha, args.ordered)
        elif sub == "ridge":
            payload = _payload_ridge(data, grid)
        elif sub == "difference":
            if not _looks_ordered(data):
                warnings.append(_UNORDERED_WARNING)
            payload = _payload_difference(data)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown subcommand {sub!r}")

    return {
        "tool_version": __version__,
        "subcommand": sub,
        "config_echo": RunConfig(sub, echo).as_dict(),
        "warnings": warnings,
        "payload": payload,
    }


_UNORDERED_WARNING = (
    "--ordered asserted but no column is strictly monotonic; differencing "
    "cross-sectional data is meaningless"
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        envelope = dispatch(args)
    except ConfigError as exc:
        _emit_error(2, exc)
        return 2
    except DataError as exc:
        _emit_error(3, exc)
        return 3
    except (NumericalError, OrderingMismatchError) as exc:
        _emit_error(4, exc)
        return 4
    except CollinearLensError as exc:
        _emit_error(3, exc)
        return 3
    text = (render_json(envelope) if args.format == "json"
            else render_text(envelope))
    sys.stdout.write(text)
    return 0


def _emit_error(code: int, exc: Exception) -> None:
    obj = {"error": {"code": code, "type": type(exc).__name__,
                     "message": str(exc)}}
    sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
