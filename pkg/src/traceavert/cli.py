"""Command-line interface.

Subcommands
-----------
``estimate``
    Run both channel-removal reconstructions on a weekly series (the bundled
    reference dataset by default) and write ``weekly.csv`` plus
    ``summary.csv`` to the output directory, echoing the summary as text.
``lambda-table``
    Print the infectivity profile, the three TAF rows, and the six per-type
    constants as CSV blocks, with deltas against the published reference
    values and the calibration-variant choice.
``simulate``
    Monte-Carlo check: empirical per-type TAF next to the analytic constants.
``sweep``
    Re-run the estimate across a list of values for one parameter, one CSV
    row per value.
``validate``
    Check the effective parameters and the input series; print violations.

Exit status: 0 when everything validated, 1 when a validation report carries
violations, 2 on unusable inputs (missing files, parse errors, bad flags).
All outputs are deterministic for identical inputs, config, and seed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import cases, counterfactual, oracle
from .infectivity import InfectivityProfile
from .params import ModelParams, apply_overrides, params_from_config, validate
from .taf import (
    CASE_TYPES,
    REFERENCE_CASE_TYPE_TAF,
    REFERENCE_LAMBDA_APP_ROW,
    REFERENCE_LAMBDA_CT_ROW,
    REFERENCE_LAMBDA_PAIR_ROW,
    LambdaTable,
)

__all__ = ["main"]

_SUMMARY_METRICS = (
    ("averted_cases", "averted cases", "{:.0f}"),
    ("averted_hospitalizations", "averted hospitalizations", "{:.0f}"),
    ("averted_icu_admissions", "averted ICU admissions", "{:.0f}"),
    ("averted_deaths", "averted deaths", "{:.0f}"),
    ("rt_reduction_avg", "average Rt reduction", "{:.4f}"),
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traceavert",
        description="Counterfactual effectiveness estimates for manual "
                    "contact tracing and app-based exposure notification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_param_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", default=None,
                       help="key = value parameter file")
        p.add_argument("--param", metavar="KEY=VALUE", action="append",
                       default=[], help="override one parameter (repeatable)")

    def add_data_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--data", metavar="PATH", default=None,
                       help="weekly series CSV (default: bundled dataset)")
        p.add_argument("--hosp", metavar="PATH", default=None,
                       help="daily hospital admissions CSV (raw mode)")
        shape = p.add_mutually_exclusive_group()
        shape.add_argument("--raw", action="store_true",
                           help="data is raw surveillance counts; derive "
                                "case types (needs --data and --hosp)")
        shape.add_argument("--presplit", action="store_true",
                           help="data already carries per-type counts "
                                "(default)")

    p_estimate = sub.add_parser("estimate", help="weekly reconstruction and summary")
    add_param_flags(p_estimate)
    add_data_flags(p_estimate)
    p_estimate.add_argument("--out", metavar="DIR", default="out",
                            help="report directory (default: out)")
    p_estimate.set_defaults(handler=_run_estimate)

    p_table = sub.add_parser("lambda-table", help="print TAF tables and constants")
    add_param_flags(p_table)
    p_table.set_defaults(handler=_run_lambda_table)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo check of the constants")
    add_param_flags(p_sim)
    p_sim.add_argument("--case-type", choices=CASE_TYPES + ("all",),
                       default="all", help="case type to simulate")
    p_sim.add_argument("--trees", type=int, default=100_000,
                       help="number of simulated index cases")
    p_sim.add_argument("--seed", type=int, default=0, help="RNG seed")
    p_sim.set_defaults(handler=_run_simulate)

    p_sweep = sub.add_parser("sweep", help="estimate across one parameter's values")
    add_param_flags(p_sweep)
    add_data_flags(p_sweep)
    p_sweep.add_argument("--sweep", metavar="KEY=V1,V2,...", required=True,
                         help="parameter name and comma-separated values")
    p_sweep.add_argument("--out", metavar="DIR", default=None,
                         help="also write sweep.csv to this directory")
    p_sweep.set_defaults(handler=_run_sweep)

    p_validate = sub.add_parser("validate", help="check parameters and data")
    add_param_flags(p_validate)
    add_data_flags(p_validate)
    p_validate.set_defaults(handler=_run_validate)

    return parser


def _effective_params(args: argparse.Namespace) -> ModelParams:
    overrides = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    return params_from_config(args.config, overrides)


def _load_series(args: argparse.Namespace, p: ModelParams) -> cases.CaseSeries:
    if args.raw:
        if args.data is None or args.hosp is None:
            raise ValueError("--raw needs both --data and --hosp")
        records = cases.load_raw_csv(args.data)
        admissions = cases.load_hospitalizations_csv(args.hosp)
        return cases.build_series_from_raw(records, admissions, p)
    if args.data is None:
        return cases.load_fixture()
    return cases.load_presplit_csv(args.data)


def _report_violations(report, label: str, stream) -> bool:
    if report.ok:
        return False
    for violation in report.violations:
        print(f"{label}: {violation}", file=stream)
    return True


def _write_text(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_estimate(args: argparse.Namespace) -> int:
    p = _effective_params(args)
    if _report_violations(validate(p), "params", sys.stderr):
        return 1
    series = _load_series(args, p)
    if _report_violations(cases.validate_series(series), "series", sys.stderr):
        return 1

    profile = InfectivityProfile.from_params(p)
    table = LambdaTable.build(p, profile)
    ct = counterfactual.averted_ct(series, table.per_type, p)
    app = counterfactual.averted_app(series, table.per_type, p)
    totals = series.column("c_total")
    rt = counterfactual.rt_series(totals)
    rt_ct = counterfactual.rt_series(list(ct.c_not_weekly))
    rt_app = counterfactual.rt_series(list(app.c_not_weekly))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    weekly = ["week,c,c_not_ct,s_ct,c_not_app,s_app,rt,rt_not_ct,rt_not_app"]
    for w, week in enumerate(series):
        rates = ("", "", "")
        if w < len(rt):
            rates = (f"{rt[w]:.4f}", f"{rt_ct[w]:.4f}", f"{rt_app[w]:.4f}")
        weekly.append(
            f"{week.week_label},{week.c_total:.0f},"
            f"{ct.c_not_weekly[w]:.0f},{ct.s_weekly[w]:.0f},"
            f"{app.c_not_weekly[w]:.0f},{app.s_weekly[w]:.0f},"
            f"{rates[0]},{rates[1]},{rates[2]}"
        )
    _write_text(out_dir / "weekly.csv", weekly)

    summary_rows = _summary_rows(ct, app)
    summary = ["metric,ct,app"]
    summary.extend(f"{key},{ct_text},{app_text}" for key, _, ct_text, app_text in summary_rows)
    _write_text(out_dir / "summary.csv", summary)

    print(f"weeks: {series[0].week_label} .. {series[-1].week_label} ({len(series)})")
    print(f"calibration variant: {table.variant}")
    print()
    width = max(len(label) for _, label, _, _ in summary_rows)
    print(f"{'':<{width}}  {'manual tracing':>14}  {'app':>14}")
    for _, label, ct_text, app_text in summary_rows:
        print(f"{label:<{width}}  {ct_text:>14}  {app_text:>14}")
    print()
    print(f"wrote {out_dir / 'weekly.csv'}")
    print(f"wrote {out_dir / 'summary.csv'}")
    return 0


def _summary_value(result: counterfactual.CounterfactualResult, key: str) -> float:
    if key == "averted_cases":
        return result.s_total
    if key == "averted_hospitalizations":
        return result.severity.hospitalizations
    if key == "averted_icu_admissions":
        return result.severity.icu_admissions
    if key == "averted_deaths":
        return result.severity.deaths
    return result.rt_reduction_avg


def _summary_rows(ct, app) -> list[tuple[str, str, str, str]]:
    rows = []
    for key, label, fmt in _SUMMARY_METRICS:
        rows.append((
            key, label,
            fmt.format(_summary_value(ct, key)),
            fmt.format(_summary_value(app, key)),
        ))
    return rows


def _run_lambda_table(args: argparse.Namespace) -> int:
    p = _effective_params(args)
    if _report_violations(validate(p), "params", sys.stderr):
        return 1
    profile = InfectivityProfile.from_params(p)
    table = LambdaTable.build(p, profile)

    print("# infectivity profile")
    print("day,i_w,i_a,i_c")
    for day in range(1, profile.i_w.size + 1):
        print(f"{day},{profile.i_w[day - 1]:.4f},"
              f"{profile.i_a[day - 1]:.4f},{profile.i_c[day - 1]:.4f}")

    print(f"# taf rows (calibration variant: {table.variant})")
    print("day,pair,pair_ref,pair_delta,ct,ct_ref,ct_delta,app,app_ref,app_delta")
    rows = (
        (table.lambda_pair_row, REFERENCE_LAMBDA_PAIR_ROW),
        (table.lambda_ct_row, REFERENCE_LAMBDA_CT_ROW),
        (table.lambda_app_row, REFERENCE_LAMBDA_APP_ROW),
    )
    for day in range(1, 15):
        cells = [str(day)]
        for computed, reference in rows:
            value = computed[day - 1]
            ref = reference[day - 1]
            cells.extend((f"{value:.4f}", f"{ref:.4f}", f"{value - ref:+.4f}"))
        print(",".join(cells))

    print("# per-type constants")
    print("case_type,taf,reference,delta")
    for name in CASE_TYPES:
        value = table.per_type[name]
        ref = REFERENCE_CASE_TYPE_TAF[name]
        print(f"{name},{value:.4f},{ref:.4f},{value - ref:+.4f}")
    return 0


def _run_simulate(args: argparse.Namespace) -> int:
    p = _effective_params(args)
    if _report_violations(validate(p), "params", sys.stderr):
        return 1
    profile = InfectivityProfile.from_params(p)
    table = LambdaTable.build(p, profile)
    cfg = oracle.SimConfig(trees=args.trees, seed=args.seed)
    kinds = CASE_TYPES if args.case_type == "all" else (args.case_type,)

    print("case_type,trees,empirical_taf,standard_error,analytic_taf,delta")
    for kind in kinds:
        outcome = oracle.empirical_case_type_taf(kind, cfg, p, profile)
        analytic = table.per_type[kind]
        print(f"{kind},{cfg.trees},{outcome.empirical_taf:.4f},"
              f"{outcome.standard_error:.6f},{analytic:.4f},"
              f"{outcome.empirical_taf - analytic:+.4f}")
    return 0


def _run_sweep(args: argparse.Namespace) -> int:
    name, sep, values_text = args.sweep.partition("=")
    name = name.strip()
    if not sep or not name:
        raise ValueError(f"--sweep expects KEY=V1,V2,..., got {args.sweep!r}")
    values = [text.strip() for text in values_text.split(",") if text.strip()]
    if not values:
        raise ValueError(f"--sweep {name}: empty value list")

    base = _effective_params(args)
    lines = ["param,value,s_ct_total,s_app_total,"
             "hosp_ct,icu_ct,deaths_ct,hosp_app,icu_app,deaths_app,"
             "rt_reduction_ct,rt_reduction_app"]
    for text in values:
        p = apply_overrides(base, {name: text})
        if _report_violations(validate(p), f"params ({name}={text})", sys.stderr):
            return 1
        series = _load_series(args, p)
        if _report_violations(cases.validate_series(series), "series", sys.stderr):
            return 1
        profile = InfectivityProfile.from_params(p)
        table = LambdaTable.build(p, profile)
        ct = counterfactual.averted_ct(series, table.per_type, p)
        app = counterfactual.averted_app(series, table.per_type, p)
        lines.append(
            f"{name},{text},{ct.s_total:.0f},{app.s_total:.0f},"
            f"{ct.severity.hospitalizations:.0f},{ct.severity.icu_admissions:.0f},"
            f"{ct.severity.deaths:.0f},{app.severity.hospitalizations:.0f},"
            f"{app.severity.icu_admissions:.0f},{app.severity.deaths:.0f},"
            f"{ct.rt_reduction_avg:.4f},{app.rt_reduction_avg:.4f}"
        )
    for line in lines:
        print(line)
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_text(out_dir / "sweep.csv", lines)
    return 0


def _run_validate(args: argparse.Namespace) -> int:
    p = _effective_params(args)
    bad = _report_violations(validate(p), "params", sys.stdout)
    series = _load_series(args, p)
    bad = _report_violations(cases.validate_series(series), "series", sys.stdout) or bad
    if bad:
        return 1
    print("params: ok")
    print(f"series: ok ({len(series)} weeks, "
          f"{series[0].week_label} .. {series[-1].week_label})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
