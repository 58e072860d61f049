"""Command line entry point: run, sweep, compare, plot.

Every command reads a scenario file (key = value lines) except ``plot``,
which consumes a results CSV produced by the others. Errors print one JSON
line to stderr and exit nonzero; success is silent apart from the requested
artifacts, so output files are safe to consume from scripts.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import PROTOCOLS, parse_scenario
from .errors import AntmeshError, InvalidConfig
from .harness import SWEEP_PARAMS, aggregate, compare, run_scenario, sweep
from .metrics import RunRecord, csv_rows, export_csv, fmt9
from .plot import aggregate_samples, emit_plot, read_run_csv


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidConfig(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidConfig(f"expected comma-separated integers, got {text!r}")


def _protocol_list(text: str) -> list[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    for name in names:
        if name not in PROTOCOLS:
            raise InvalidConfig(f"unknown protocol {name!r}; "
                                f"choose from {', '.join(PROTOCOLS)}")
    return names


def _write_records(records: list[RunRecord], out: str | None) -> None:
    if out:
        export_csv(records, out)
    else:
        sys.stdout.write("\n".join(csv_rows(records)) + "\n")


def _print_aggregate(records: list[RunRecord]) -> None:
    for row in aggregate(records):
        print(f"{row['protocol']:>10}  value={fmt9(row['value'])}  "
              f"pdr={fmt9(row['pdr_mean'])}±{fmt9(row['pdr_std'])}  "
              f"delay={fmt9(row['delay_mean'])}±{fmt9(row['delay_std'])}s  "
              f"({row['runs']} runs)")


def _cmd_run(args) -> None:
    cfg = parse_scenario(args.scenario)
    stats = run_scenario(cfg)
    record = RunRecord(protocol=cfg.protocol, seed=cfg.seed,
                       sweep_param="none", sweep_value=0.0, stats=stats)
    _write_records([record], args.out)


def _cmd_sweep(args) -> None:
    cfg = parse_scenario(args.scenario)
    records = sweep(cfg, args.param, _float_list(args.values),
                    _int_list(args.seeds), jobs=args.jobs)
    _write_records(records, args.out)
    if args.out:
        _print_aggregate(records)


def _cmd_compare(args) -> None:
    cfg = parse_scenario(args.scenario)
    records = compare(cfg, _protocol_list(args.protocols), args.param,
                      _float_list(args.values), _int_list(args.seeds),
                      jobs=args.jobs)
    _write_records(records, args.out)
    if args.out:
        _print_aggregate(records)


def _cmd_plot(args) -> None:
    param, samples = read_run_csv(args.csv)
    rows = aggregate_samples(samples)
    out = args.out
    if out is None:
        stem = args.csv[:-4] if args.csv.endswith(".csv") else args.csv
        out = f"{stem}_{args.metric}.svg"
    xlabel = {"max_speed": "max node speed (m/s)",
              "pause_time": "pause time (s)"}.get(param, param)
    emit_plot(rows, args.metric, out, xlabel=xlabel)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="antmesh",
                                 description="ant-colony routing simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario, emit a CSV row")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", help="results CSV path (default stdout)")
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="vary one mobility parameter")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated sweep values")
    p_sweep.add_argument("--seeds", required=True,
                         help="comma-separated seeds")
    p_sweep.add_argument("--jobs", type=int, default=None,
                         help="parallel workers (default $ANTMESH_JOBS or 1)")
    p_sweep.add_argument("--out", help="results CSV path (default stdout)")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_cmp = sub.add_parser("compare", help="sweep several protocols, paired seeds")
    p_cmp.add_argument("scenario")
    p_cmp.add_argument("--protocols", required=True,
                       help="comma-separated protocol names")
    p_cmp.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p_cmp.add_argument("--values", required=True)
    p_cmp.add_argument("--seeds", required=True)
    p_cmp.add_argument("--jobs", type=int, default=None)
    p_cmp.add_argument("--out", help="results CSV path (default stdout)")
    p_cmp.set_defaults(fn=_cmd_compare)

    p_plot = sub.add_parser("plot", help="render a results CSV as an SVG chart")
    p_plot.add_argument("csv")
    p_plot.add_argument("--metric", required=True, choices=("pdr", "delay"))
    p_plot.add_argument("--out", help="SVG path (default <csv>_<metric>.svg)")
    p_plot.set_defaults(fn=_cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.fn(args)
    except AntmeshError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}),
              file=sys.stderr)
        return 1
    except OSError as e:
        print(json.dumps({"error": "IoFailure", "message": str(e)}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
