"""Command line front end.

Seven subcommands wire the library together:

    ingest        raw generation/price/factor files -> canonical interval CSV
    fetch         write raw yearly files (bundled synthetic source or HTTP)
    optimize      dispatch optimisation -> result.json, curve.csv, schedule.csv
    sweep         idle-ratio / embedded-rate / acquisition-rate sweep -> CSV
    validate      cross-year threshold extrapolation -> validation.json
    compare-freq  frequency cap vs. dynamic operation -> freq_compare.json
    report        aggregate run outputs under --out into summary tables

All outputs land under --out (default: the current directory); each
optimisation gets its own run directory named after the scenario unless
--label overrides it. Outputs are deterministic and carry a provenance
block, so reruns on identical inputs are byte-identical.

Exit codes: 0 success, 2 bad input, 3 data-quality failure, 4 violated
internal invariant. Errors name the module they came from.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from urllib.error import URLError

from . import __version__, report
from .cluster_model import Registry, load_config
from .dispatch import InvariantViolation, optimise
from .energy_data import (
    DataFormatError,
    DataQualityError,
    IntervalSeries,
    RenewableShareTable,
    blend_intensity,
    hours_in_year,
    parse_factors,
    parse_generation,
    parse_prices,
)
from .fetch import fetch_dataset
from .sensitivity import (
    SWEEP_PARAMS,
    FreqLimitSpec,
    SweepSpec,
    compare_freq_limit,
    sweep,
)
from .validation import validate_extrapolation


def _cmd_ingest(args, registry, out, say) -> None:
    records = parse_generation(args.generation, format=args.format)
    prices = parse_prices(args.prices, format=args.format)
    years = sorted({
        int(str(r.start_utc.astype("datetime64[Y]"))) for r in records
    })
    if len(years) != 1:
        raise DataFormatError(
            f"ingest one calendar year at a time (factor tables are yearly); "
            f"the generation file spans {years}"
        )
    year = years[0]
    factors = parse_factors(args.factors, year)
    series = blend_intensity(records, factors, prices)
    coverage = series.t_total / hours_in_year(year)
    if coverage < 0.95 and not args.allow_partial:
        raise DataQualityError(
            f"year {year} covers only {100 * coverage:.1f}% of its hours; "
            f"pass --allow-partial to accept"
        )
    path = out / args.name
    series.to_csv(path)
    meta = {
        "year": year,
        "intervals": len(series),
        "t_total_h": series.t_total,
        "provenance": report.provenance_block({
            "generation": args.generation,
            "prices": args.prices,
            "factors": args.factors,
        }),
    }
    report.write_json(meta, path.with_suffix(".meta.json"))
    say(f"wrote {path} ({len(series)} intervals, {series.t_total:g} h)")


def _cmd_fetch(args, registry, out, say) -> None:
    manifest = fetch_dataset(args.year, out, base_url=args.base_url)
    source = args.base_url or "bundled benchmark"
    say(f"wrote raw files for {len(args.year)} year(s) from {source}; "
        f"checksums in {manifest}")


def _run_dir(out: Path, label: str | None, default: str) -> Path:
    run = out / (label or default)
    run.mkdir(parents=True, exist_ok=True)
    return run


def _cmd_optimize(args, registry, out, say) -> None:
    setup = registry.setup(args.setup)
    workload = registry.workload(args.workload)
    if args.embedded_factor != 1.0:
        setup = setup.with_embedded_rate(
            args.embedded_factor * setup.e_embedded_kg_per_core_hour
        )
    series = IntervalSeries.from_csv(args.data)
    result = optimise(series, setup, workload, args.objective, registry.tariff)

    inputs = {"intervals": args.data}
    if args.config:
        inputs["config"] = args.config
    payload = report.result_payload(
        setup, workload, result,
        embedded_factor=args.embedded_factor,
        series=series,
        provenance=report.provenance_block(inputs),
    )
    default = f"{args.objective}_{args.setup}_{args.workload}"
    if args.embedded_factor != 1.0:
        default += f"_emb{args.embedded_factor:g}x"
    run = _run_dir(out, args.label, default)
    report.write_json(payload, run / "result.json")
    report.curve_frame(result, setup).to_csv(run / "curve.csv", index=False)
    report.schedule_frame(series, result.policy).to_csv(
        run / "schedule.csv", index=False
    )
    if result.threshold is None:
        say(f"{setup.name}/{workload.name}: constant operation is optimal "
            f"(u = 1, no threshold)")
    else:
        say(f"{setup.name}/{workload.name}: u_opt={result.u_opt:.4f} "
            f"X={result.threshold:.2f} relative={result.relative_objective:.4f}")
    say(f"wrote {run}/result.json, curve.csv, schedule.csv")


def _cmd_sweep(args, registry, out, say) -> None:
    setup = registry.setup(args.setup)
    workload = registry.workload(args.workload)
    spec = SweepSpec(args.param, args.start, args.stop, args.steps)
    series = IntervalSeries.from_csv(args.data)
    frame = sweep(series, setup, workload, spec, args.objective,
                  registry.tariff)
    run = _run_dir(out, args.label,
                   f"sweep_{args.param}_{args.setup}_{args.workload}")
    frame.to_csv(run / "sweep.csv", index=False)
    meta = {
        "param": spec.param,
        "start": spec.start,
        "stop": spec.stop,
        "steps": spec.steps,
        "objective": args.objective,
        "setup": setup.name,
        "workload": workload.name,
        "provenance": report.provenance_block({"intervals": args.data}),
    }
    report.write_json(meta, run / "sweep.json")
    say(f"wrote {run}/sweep.csv ({len(frame)} points)")


def _cmd_validate(args, registry, out, say) -> None:
    setup = registry.setup(args.setup)
    workload = registry.workload(args.workload)
    base = IntervalSeries.from_csv(args.base)
    target = IntervalSeries.from_csv(args.target)
    shares = RenewableShareTable.from_csv(args.shares)
    rep = validate_extrapolation(
        base, target, shares, args.base_year, args.target_year,
        setup, workload, args.objective,
    )
    payload = report.validation_payload(
        rep,
        provenance=report.provenance_block({
            "base": args.base, "target": args.target, "shares": args.shares,
        }),
    )
    run = _run_dir(
        out, args.label,
        f"validate_{args.base_year}_{args.target_year}_{args.setup}"
        f"_{args.workload}",
    )
    report.write_json(payload, run / "validation.json")
    say(f"{args.base_year} -> {args.target_year}: "
        f"X_extra={rep.threshold_extrapolated:.2f} vs "
        f"X_opt={rep.threshold_target:.2f} "
        f"({rep.threshold_deviation_percent:.2f}% off), "
        f"u_extra={rep.utilisation_extrapolated:.4f} vs "
        f"u_opt={rep.utilisation_target:.4f}")
    say(f"wrote {run}/validation.json")


def _cmd_compare_freq(args, registry, out, say) -> None:
    setup = registry.setup(args.setup)
    workload = registry.workload(args.workload)
    spec = FreqLimitSpec(args.power_reduction, args.throughput_drop)
    series = IntervalSeries.from_csv(args.data)
    comp = compare_freq_limit(
        series, setup, workload, spec, optimise_limited=args.optimise_limited
    )
    payload = {
        "setup": setup.name,
        "workload": workload.name,
        "power_reduction": spec.power_reduction,
        "throughput_drop": spec.throughput_drop,
        "limited_total": comp.limited.total,
        "nominal_total": comp.nominal.total,
        "optimum_total": comp.optimum.breakdown.total,
        "optimum_u": comp.optimum.u_opt,
        "ratio": comp.ratio,
        "provenance": report.provenance_block({"intervals": args.data}),
    }
    if comp.limited_optimum is not None:
        payload["combined_ratio"] = comp.combined_ratio
        payload["combined_u"] = comp.limited_optimum.u_opt
    run = _run_dir(out, args.label, f"freq_{args.setup}_{args.workload}")
    report.write_json(payload, run / "freq_compare.json")
    say(f"{setup.name}/{workload.name}: limited/constant emission ratio "
        f"{comp.ratio:.4f}")
    say(f"wrote {run}/freq_compare.json")


def _cmd_report(args, registry, out, say) -> None:
    results, validations = report.collect_run_documents(out)
    if not results and not validations:
        raise DataFormatError(
            f"no result.json or validation.json files under {out}"
        )
    tables = report.aggregate_tables(results, validations)
    for name, path in report.write_tables(tables, out).items():
        say(f"wrote {path} ({len(tables[name])} rows)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridflex",
        description="Dispatch a compute cluster against grid carbon "
                    "intensity or spot prices.",
    )
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="TOML file adding setups/workloads or "
                             "overriding the tariff")
    parser.add_argument("--out", metavar="DIR", default=".",
                        help="directory receiving all outputs "
                             "(default: current directory)")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress status messages")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                required=True)

    p = sub.add_parser("ingest",
                       help="blend raw files into the canonical interval CSV")
    p.add_argument("--generation", required=True, metavar="PATH",
                   help="generation-by-type file")
    p.add_argument("--prices", required=True, metavar="PATH",
                   help="spot price file")
    p.add_argument("--factors", required=True, metavar="PATH",
                   help="per-source emission factors (source,kg_per_mwh)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="raw generation/price format (default csv)")
    p.add_argument("--name", default="intervals.csv", metavar="FILE",
                   help="output file name inside --out "
                        "(default intervals.csv)")
    p.add_argument("--allow-partial", action="store_true",
                   help="accept a year covering less than 95%% of its hours")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("fetch",
                       help="write raw yearly files into --out")
    p.add_argument("--year", required=True, type=int, nargs="+",
                   metavar="YEAR", help="calendar year(s) to fetch")
    p.add_argument("--base-url", default=None, metavar="URL",
                   help="HTTP mirror serving generation_YYYY.csv, "
                        "prices_YYYY.csv and factors_YYYY.csv "
                        "(default: bundled synthetic benchmark)")
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("optimize",
                       help="minimise total emissions or cost over all "
                            "dispatch policies")
    p.add_argument("--data", required=True, metavar="PATH",
                   help="canonical interval CSV")
    p.add_argument("--setup", required=True, help="cluster setup name")
    p.add_argument("--workload", required=True, help="workload name")
    p.add_argument("--objective", choices=("emission", "cost"),
                   default="emission")
    p.add_argument("--embedded-factor", type=float, default=1.0, metavar="F",
                   help="scale the embedded emission rate (default 1.0)")
    p.add_argument("--label", default=None, metavar="NAME",
                   help="run directory name inside --out")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep",
                       help="re-optimise along one setup parameter")
    p.add_argument("--data", required=True, metavar="PATH")
    p.add_argument("--setup", required=True)
    p.add_argument("--workload", required=True)
    p.add_argument("--param", choices=SWEEP_PARAMS, default="idle_ratio",
                   type=lambda s: s.replace("-", "_"),
                   help="setup parameter to vary (hyphens accepted)")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--objective", choices=("emission", "cost"),
                   default="emission")
    p.add_argument("--label", default=None, metavar="NAME")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate",
                       help="extrapolate a threshold across years and "
                            "score it")
    p.add_argument("--base", required=True, metavar="PATH",
                   help="interval CSV of the optimised year")
    p.add_argument("--target", required=True, metavar="PATH",
                   help="interval CSV of the year to project onto")
    p.add_argument("--shares", required=True, metavar="PATH",
                   help="yearly renewable share table CSV")
    p.add_argument("--base-year", required=True, type=int)
    p.add_argument("--target-year", required=True, type=int)
    p.add_argument("--setup", required=True)
    p.add_argument("--workload", required=True)
    p.add_argument("--objective", choices=("emission", "cost"),
                   default="emission")
    p.add_argument("--label", default=None, metavar="NAME")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("compare-freq",
                       help="compare a clock-frequency cap against dynamic "
                            "operation")
    p.add_argument("--data", required=True, metavar="PATH")
    p.add_argument("--setup", required=True)
    p.add_argument("--workload", required=True)
    p.add_argument("--power-reduction", type=float,
                   default=FreqLimitSpec.power_reduction, metavar="F",
                   help="full-load power cut from the cap (default 0.40)")
    p.add_argument("--throughput-drop", type=float,
                   default=FreqLimitSpec.throughput_drop, metavar="F",
                   help="throughput lost to the cap (default 0.19)")
    p.add_argument("--optimise-limited", action="store_true",
                   help="also dispatch the capped cluster dynamically "
                        "(exploratory combined mode)")
    p.add_argument("--label", default=None, metavar="NAME")
    p.set_defaults(func=_cmd_compare_freq)

    p = sub.add_parser("report",
                       help="aggregate run outputs under --out into "
                            "summary tables")
    p.set_defaults(func=_cmd_report)

    return parser


def _fail(exc: BaseException, code: int) -> int:
    # KeyError carries its message as args[0]; str() would add quotes.
    msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
    mod = type(exc).__module__
    where = mod.split(".", 1)[1] if mod.startswith("gridflex.") else "input"
    print(f"gridflex: [{where}] {msg}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    say = (lambda _msg: None) if args.quiet else print
    try:
        registry = load_config(args.config) if args.config else Registry()
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        args.func(args, registry, out, say)
    except DataQualityError as exc:
        return _fail(exc, 3)
    except (DataFormatError, FileNotFoundError, KeyError, ValueError,
            URLError) as exc:
        return _fail(exc, 2)
    except InvariantViolation as exc:
        return _fail(exc, 4)
    return 0


if __name__ == "__main__":
    sys.exit(main())
