"""``fractalts`` command line: analyze, fluct, xcorr, generate, replay.

Every run writes a ``*.manifest.json`` next to its outputs holding the fully
resolved argument list, so ``fractalts replay MANIFEST`` regenerates the same
bytes.
"""
from __future__ import annotations

import argparse
import datetime as dt
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .core import (
    DEFAULT_TAU_COUNT,
    AnalysisConfig,
    TimeSeries,
    align_by_date,
    build_profile,
    load_csv,
    series_csv,
)
from .errors import ConfigInvalid, FractalTSError
from .mfdfa import fit_scaling, fluctuation_function
from .serialize import (
    ccf_csv,
    ccf_records,
    dumps_json,
    spectrum_csv,
    summary_table_csv,
    table_log_csv,
)
from .synth import GeneratorSpec, generate
from .xcorr import DEFAULT_MAX_LAG, cross_correlation

GENERATED_START = dt.date(2000, 1, 1)


@dataclass
class RunManifest:
    command: str
    inputs: list
    config: dict
    tool_version: str = __version__
    seed: Optional[int] = None
    argv: list = field(default_factory=list)


def q_grid_from(q_min: float, q_max: float, q_step: float) -> tuple:
    if q_step <= 0:
        raise ConfigInvalid(f"--q-step must be positive, got {q_step}")
    if q_max < q_min:
        raise ConfigInvalid(f"--q-max {q_max} is below --q-min {q_min}")
    count = int(math.floor((q_max - q_min) / q_step + 1e-9)) + 1
    return tuple(round(q_min + i * q_step, 10) + 0.0 for i in range(count))


def _config_for(args, n: int) -> AnalysisConfig:
    q_grid = q_grid_from(args.q_min, args.q_max, args.q_step)
    fit = None
    if args.fit_min is not None or args.fit_max is not None:
        fit = (args.fit_min if args.fit_min is not None else 0,
               args.fit_max if args.fit_max is not None else n)
    return AnalysisConfig.for_length(
        n, q_grid, args.order, args.tau_min, args.tau_max, args.tau_count, fit
    )


def _load(path, column, date_column) -> TimeSeries:
    return load_csv(path, column, date_column)


def _summary(series: TimeSeries, spectrum, config: AnalysisConfig) -> dict:
    s = {
        "name": series.name,
        "length": len(series),
        "q_min": config.q_grid[0],
        "q_max": config.q_grid[-1],
        "h_qmin": float(spectrum.h[0]),
        "h_qmax": float(spectrum.h[-1]),
        "delta_h": spectrum.delta_h,
        "min_r2": float(spectrum.r_squared.min()),
    }
    if spectrum.hurst is not None:
        s["H"] = spectrum.hurst
    return s


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def cmd_analyze(args):
    outputs = {}
    summaries = []
    configs = []
    warned = False
    for path in args.input:
        series = _load(path, args.column, args.date_column)
        config = _config_for(args, len(series))
        configs.append(config.to_dict())
        spectrum = fit_scaling(fluctuation_function(build_profile(series), config), config.fit_range)
        if spectrum.hurst is None and not warned:
            print("fractalts: warning: q grid lacks q = 2; H omitted from summary", file=sys.stderr)
            warned = True
        name = _stem(path)
        summary = _summary(series, spectrum, config)
        summary["name"] = name
        summaries.append(summary)
        if args.format == "csv":
            outputs[f"{name}.hq.csv"] = spectrum_csv(spectrum)
        else:
            outputs[f"{name}.hq.json"] = dumps_json(spectrum.to_dict())
        outputs[f"{name}.summary.json"] = dumps_json(summary)

    q_grid = q_grid_from(args.q_min, args.q_max, args.q_step)
    if len(args.input) > 1:
        outputs["table.csv"] = summary_table_csv(summaries, q_grid[0], q_grid[-1])
        prefix = "analyze"
    else:
        prefix = f"{_stem(args.input[0])}.analyze"
    manifest = RunManifest("analyze", list(args.input), {"analysis": configs})
    return outputs, manifest, prefix


def cmd_fluct(args):
    path = args.input[0]
    series = _load(path, args.column, args.date_column)
    config = _config_for(args, len(series))
    table = fluctuation_function(build_profile(series), config)
    name = _stem(path)
    outputs = {}
    if args.format == "csv":
        outputs[f"{name}.fluct.csv"] = table_log_csv(table)
    else:
        outputs[f"{name}.fluct.json"] = dumps_json(table.to_dict())
    manifest = RunManifest("fluct", [path], {"analysis": [config.to_dict()]})
    return outputs, manifest, f"{name}.fluct"


def cmd_xcorr(args):
    if len(args.input) != 2:
        raise ConfigInvalid("xcorr needs exactly two --input files")
    columns = list(args.column_list)
    if len(columns) == 1:
        columns = columns * 2
    if len(columns) != 2:
        raise ConfigInvalid("xcorr takes one --column, or one per --input")
    date_column = args.date_column or "date"
    a = _load(args.input[0], columns[0], date_column)
    b = _load(args.input[1], columns[1], date_column)
    a, b = align_by_date(a, b)
    result = cross_correlation(a, b, args.max_lag)
    outputs = {}
    if args.format == "csv":
        outputs["xcorr.csv"] = ccf_csv(result)
    else:
        outputs["xcorr.json"] = dumps_json(ccf_records(result))
    outputs["xcorr.summary.json"] = dumps_json({
        "peak_lag": result.peak_lag,
        "peak_value": result.peak_value,
        "overlap": len(a),
        "max_lag": args.max_lag,
    })
    manifest = RunManifest(
        "xcorr", list(args.input),
        {"columns": columns, "date_column": date_column, "max_lag": args.max_lag},
    )
    return outputs, manifest, "xcorr"


def cmd_generate(args):
    length = args.length
    if args.kind == "cascade" and args.levels is not None:
        if length is not None and length != 2 ** args.levels:
            raise ConfigInvalid("--length and --levels disagree")
        length = 2 ** args.levels
    spec = GeneratorSpec(args.kind, length, args.seed, args.h, args.p)
    series = generate(spec)
    dates = [GENERATED_START + dt.timedelta(days=i) for i in range(len(series))]
    series = TimeSeries(series.values, dates, series.name)
    manifest = RunManifest("generate", [], {"generator": spec.to_dict()}, seed=spec.seed)
    return {args.out: series_csv(series)}, manifest, os.path.splitext(args.out)[0]


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_all(files: dict) -> None:
    written = []
    try:
        for path, text in files.items():
            _write_atomic(path, text)
            written.append(path)
    except BaseException:
        for path in written:
            os.unlink(path)
        raise


def _canonical_argv(args) -> list:
    argv = [args.command]
    if args.command == "generate":
        argv += ["--kind", args.kind, "--seed", str(args.seed), "--out", os.path.abspath(args.out)]
        for flag, value in (("--h", args.h), ("--p", args.p),
                            ("--levels", args.levels), ("--length", args.length)):
            if value is not None:
                argv += [flag, repr(value)]
        return argv
    for path in args.input:
        argv += ["--input", os.path.abspath(path)]
    for col in args.column_list:
        argv += ["--column", col]
    if args.date_column is not None:
        argv += ["--date-column", args.date_column]
    argv += ["--out", os.path.abspath(args.out), "--format", args.format]
    if args.command == "xcorr":
        return argv + ["--max-lag", str(args.max_lag)]
    argv += ["--q-min", repr(args.q_min), "--q-max", repr(args.q_max),
             "--q-step", repr(args.q_step), "--order", str(args.order),
             "--tau-count", str(args.tau_count)]
    for flag, value in (("--tau-min", args.tau_min), ("--tau-max", args.tau_max),
                        ("--fit-min", args.fit_min), ("--fit-max", args.fit_max)):
        if value is not None:
            argv += [flag, str(value)]
    return argv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractalts",
        description="MFDFA, Hurst exponents and lagged cross-correlation of time series.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, many=False):
        p.add_argument("--input", action="append", required=True,
                       help="CSV file" + (" (repeatable)" if many else ""))
        p.add_argument("--column", action="append", dest="column_list", default=None,
                       help="value column name or index (default: value)")
        p.add_argument("--date-column", default=None)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def grid_flags(p):
        p.add_argument("--q-min", type=float, default=-5.0)
        p.add_argument("--q-max", type=float, default=5.0)
        p.add_argument("--q-step", type=float, default=1.0)
        p.add_argument("--order", type=int, default=1, help="detrending polynomial order")
        p.add_argument("--tau-min", type=int, default=None)
        p.add_argument("--tau-max", type=int, default=None)
        p.add_argument("--tau-count", type=int, default=DEFAULT_TAU_COUNT)
        p.add_argument("--fit-min", type=int, default=None)
        p.add_argument("--fit-max", type=int, default=None)

    p = sub.add_parser("analyze", help="generalized Hurst exponents h(q), H and delta h")
    io_flags(p, many=True)
    grid_flags(p)
    p = sub.add_parser("fluct", help="log F_q(tau) against log tau")
    io_flags(p)
    grid_flags(p)
    p = sub.add_parser("xcorr", help="lagged cross-correlation of two date-aligned series")
    io_flags(p, many=True)
    p.add_argument("--max-lag", type=int, default=DEFAULT_MAX_LAG)

    p = sub.add_parser("generate", help="synthetic white noise, fGn or binomial cascade")
    p.add_argument("--kind", choices=("white_noise", "fgn", "cascade"), required=True)
    p.add_argument("--h", type=float, default=None, help="Hurst exponent for fgn, 0 < H < 1")
    p.add_argument("--p", type=float, default=None, help="cascade weight, 0 < p <= 0.5")
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "fluct": cmd_fluct,
    "xcorr": cmd_xcorr,
    "generate": cmd_generate,
}


def run(args) -> None:
    outputs, manifest, prefix = COMMANDS[args.command](args)
    if args.command == "generate":
        files = dict(outputs)
        base = os.path.dirname(os.path.abspath(args.out))
        os.makedirs(base, exist_ok=True)
    else:
        os.makedirs(args.out, exist_ok=True)
        base = args.out
        files = {os.path.join(base, name): text for name, text in outputs.items()}
    manifest.inputs = [os.path.abspath(p) for p in manifest.inputs]
    manifest.argv = _canonical_argv(args)
    files[os.path.join(base, f"{os.path.basename(prefix)}.manifest.json")] = dumps_json(asdict(manifest))
    _write_all(files)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        try:
            with open(args.manifest, encoding="utf-8") as fh:
                recorded = json.load(fh)
        except (OSError, ValueError) as exc:
            print(f"fractalts: error: cannot read manifest: {exc}", file=sys.stderr)
            return 1
        if recorded.get("tool_version") != __version__:
            print(f"fractalts: warning: manifest written by version {recorded.get('tool_version')}, "
                  f"running {__version__}", file=sys.stderr)
        return main(recorded["argv"])
    if getattr(args, "column_list", None) is None and args.command != "generate":
        args.column_list = ["value"]
    if args.command in ("analyze", "fluct", "xcorr"):
        args.column = args.column_list[0]
        if args.command == "fluct" and len(args.input) != 1:
            parser.error("fluct takes a single --input")
    try:
        run(args)
    except FileNotFoundError as exc:
        print(f"fractalts: error: no such file: {exc}", file=sys.stderr)
        return 1
    except FractalTSError as exc:
        print(f"fractalts: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
