"""CSV and JSON encodings of fluctuation tables, spectra and CCF results.

Floats go to CSV with 17 significant digits and to JSON via ``repr``; both
round-trip bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .core import format_float
from .mfdfa import FluctuationTable, HurstSpectrum
from .xcorr import CcfResult


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def table_csv(table: FluctuationTable) -> str:
    return _csv_text(["q", "tau", "F"], table.rows())


def table_log_csv(table: FluctuationTable) -> str:
    """``q, tau, log_tau, log_F`` rows, natural logarithms."""
    rows = ((q, tau, math.log(tau), math.log(f)) for q, tau, f in table.rows())
    return _csv_text(["q", "tau", "log_tau", "log_F"], rows)


def table_from_csv(text: str) -> FluctuationTable:
    reader = csv.DictReader(io.StringIO(text))
    cells = {}
    for rec in reader:
        cells[(float(rec["q"]), int(rec["tau"]))] = float(rec["F"])
    q_grid = tuple(sorted({q for q, _ in cells}))
    tau_grid = tuple(sorted({t for _, t in cells}))
    values = np.array([[cells[(q, t)] for t in tau_grid] for q in q_grid])
    # the CSV form does not record the detrend order
    return FluctuationTable(q_grid, tau_grid, values, -1)


def spectrum_csv(spec: HurstSpectrum) -> str:
    rows = zip(spec.q_grid, (float(v) for v in spec.h), (float(v) for v in spec.r_squared))
    return _csv_text(["q", "h", "r2"], rows)


def ccf_csv(result: CcfResult) -> str:
    rows = zip(
        (int(k) for k in result.lags),
        (float(v) for v in result.coefficients),
        (float(v) for v in result.band),
    )
    return _csv_text(["lag", "ccf", "band"], rows)


def ccf_records(result: CcfResult) -> list:
    return [
        {"lag": int(k), "ccf": float(c), "band": float(w)}
        for k, c, w in zip(result.lags, result.coefficients, result.band)
    ]


def summary_table_csv(summaries: list, q_min: float, q_max: float) -> str:
    """One row per series, laid out as ``h(q_min), h(q_max), H``."""
    header = ["series", f"h(q={q_min:g})", f"h(q={q_max:g})", "H", "delta_h"]
    rows = [
        [s["name"], s["h_qmin"], s["h_qmax"], s.get("H", ""), s["delta_h"]]
        for s in summaries
    ]
    return _csv_text(header, rows)
