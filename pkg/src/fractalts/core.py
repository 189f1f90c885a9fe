"""Time series containers, CSV ingestion and profile construction."""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    ConfigInvalid,
    MissingLabels,
    NonMonotonicDates,
    NoOverlap,
    ParseError,
    TooShort,
)


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar series with optional calendar labels."""

    values: np.ndarray
    labels: Optional[tuple] = None
    name: str = "series"

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a time series needs at least one value")
        if not np.all(np.isfinite(values)):
            raise ValueError("time series values must be finite")
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != values.size:
                raise ValueError(
                    f"{len(labels)} labels for {values.size} values"
                )
            for i in range(1, len(labels)):
                if not labels[i - 1] < labels[i]:
                    raise NonMonotonicDates(
                        f"dates not strictly increasing at position {i}: "
                        f"{labels[i - 1]} then {labels[i]}"
                    )
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.values.size

    def reversed(self) -> "TimeSeries":
        # labels would no longer increase, so they are dropped
        return TimeSeries(self.values[::-1], None, self.name)

    def scaled(self, factor: float, offset: float = 0.0) -> "TimeSeries":
        return TimeSeries(factor * self.values + offset, self.labels, self.name)


@dataclass(frozen=True)
class Profile:
    """Cumulative sum of a mean-centered series."""

    values: np.ndarray
    source_len: int = field(default=-1)

    def __post_init__(self):
        values = _frozen_array(self.values)
        object.__setattr__(self, "values", values)
        if self.source_len == -1:
            object.__setattr__(self, "source_len", values.size)
        if values.size != self.source_len:
            raise ValueError("profile length must equal source length")

    def __len__(self):
        return self.values.size


DEFAULT_Q_GRID = tuple(float(q) for q in range(-5, 6))
DEFAULT_TAU_COUNT = 20


def default_tau_grid(n: int, order: int = 1, count: int = DEFAULT_TAU_COUNT,
                     tau_min: Optional[int] = None, tau_max: Optional[int] = None) -> tuple:
    """Log-spaced segment lengths in ``[max(order+2, 10), n // 4]``, duplicates removed."""
    lo = max(order + 2, 10) if tau_min is None else tau_min
    hi = n // 4 if tau_max is None else tau_max
    if hi < lo:
        raise ConfigInvalid(
            f"series of length {n} is too short for segment lengths >= {lo}"
        )
    taus = np.unique(np.rint(np.geomspace(lo, hi, count)).astype(int))
    return tuple(int(t) for t in taus)


@dataclass(frozen=True)
class AnalysisConfig:
    """Moment orders, segment lengths and detrending order for MFDFA.

    ``fit_range`` is an inclusive ``(tau_lo, tau_hi)`` window restricting the
    log-log regression; ``None`` fits over the whole tau grid.
    """

    q_grid: tuple = DEFAULT_Q_GRID
    tau_grid: tuple = ()
    detrend_order: int = 1
    fit_range: Optional[tuple] = None

    def __post_init__(self):
        q = tuple(float(v) for v in self.q_grid)
        tau = tuple(int(v) for v in self.tau_grid)
        object.__setattr__(self, "q_grid", q)
        object.__setattr__(self, "tau_grid", tau)
        if self.fit_range is not None:
            lo, hi = self.fit_range
            object.__setattr__(self, "fit_range", (int(lo), int(hi)))

        m = self.detrend_order
        if int(m) != m or m < 0:
            raise ConfigInvalid(f"detrend order must be a non-negative integer, got {m}")
        if not q:
            raise ConfigInvalid("q grid is empty")
        if not all(math.isfinite(v) for v in q):
            raise ConfigInvalid("q grid values must be finite")
        if any(b <= a for a, b in zip(q, q[1:])):
            raise ConfigInvalid("q grid must be strictly increasing")
        if len(tau) < 4:
            raise ConfigInvalid(f"need at least 4 segment lengths, got {len(tau)}")
        if any(b <= a for a, b in zip(tau, tau[1:])):
            raise ConfigInvalid("tau grid must be strictly increasing")
        if tau[0] < m + 2:
            raise ConfigInvalid(
                f"segment length {tau[0]} too short for detrend order {m} (need >= {m + 2})"
            )

    @classmethod
    def for_length(cls, n: int, q_grid=DEFAULT_Q_GRID, detrend_order: int = 1,
                   tau_min=None, tau_max=None, tau_count=DEFAULT_TAU_COUNT,
                   fit_range=None) -> "AnalysisConfig":
        """Fill in the default tau grid for a series of length ``n``."""
        taus = default_tau_grid(n, detrend_order, tau_count, tau_min, tau_max)
        return cls(tuple(q_grid), taus, detrend_order, fit_range)

    def check_length(self, n: int) -> None:
        limit = n // 4
        if self.tau_grid[-1] > limit:
            raise ConfigInvalid(
                f"segment length {self.tau_grid[-1]} exceeds n/4 = {limit} for n = {n}"
            )

    def to_dict(self) -> dict:
        return {
            "q_grid": list(self.q_grid),
            "tau_grid": list(self.tau_grid),
            "detrend_order": self.detrend_order,
            "fit_range": None if self.fit_range is None else list(self.fit_range),
        }


def build_profile(x: Union[TimeSeries, Sequence[float], np.ndarray]) -> Profile:
    """Return ``y[t] = sum_{i<=t} (x[i] - mean(x))``.

    Raises
    ------
    TooShort
        If the series has fewer than two samples.
    """
    values = x.values if isinstance(x, TimeSeries) else np.asarray(x, dtype=np.float64)
    if values.size < 2:
        raise TooShort(f"profile needs at least 2 samples, got {values.size}")
    if np.ptp(values) == 0:
        return Profile(np.zeros(values.size), values.size)
    centered = values - values.mean()
    # second pass removes the rounding error of the first mean
    centered -= centered.mean()
    return Profile(np.cumsum(centered), values.size)


def _parse_date(token: str, row: int, column: str) -> dt.date:
    try:
        return dt.date.fromisoformat(token.strip())
    except ValueError:
        raise ParseError(row, column, token, f"cannot parse {token!r} as an ISO-8601 date") from None


def _resolve_column(header: list, column: Union[str, int], path) -> int:
    if isinstance(column, int):
        if not 0 <= column < len(header):
            raise ParseError(1, column, "", f"column index {column} out of range in {path}")
        return column
    if column in header:
        return header.index(column)
    if column.isdigit() and int(column) < len(header):
        return int(column)
    raise ParseError(1, column, "", f"no column {column!r} in header of {path}")


def load_csv(
    path: Union[str, os.PathLike],
    column: Union[str, int],
    date_column: Optional[str] = None,
    name: Optional[str] = None,
) -> TimeSeries:
    """Read one numeric column (and optionally a date column) from a CSV file.

    Rows are numbered from 1 starting at the first data row, so the header
    is never counted. Blank cells are rejected rather than skipped.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(0, column, "", f"{path} is empty") from None
        col = _resolve_column(header, column, path)
        col_name = header[col]
        date_col = None
        if date_column is not None:
            date_col = _resolve_column(header, date_column, path)

        values = []
        labels = [] if date_col is not None else None
        for row, record in enumerate(reader, start=1):
            if not record:
                continue
            token = record[col].strip() if col < len(record) else ""
            if token == "":
                raise ParseError(row, col_name, token, "empty value cell")
            try:
                value = float(token)
            except ValueError:
                raise ParseError(row, col_name, token) from None
            if not math.isfinite(value):
                raise ParseError(row, col_name, token, "value is not finite")
            values.append(value)
            if date_col is not None:
                dtoken = record[date_col] if date_col < len(record) else ""
                date = _parse_date(dtoken, row, header[date_col])
                if labels and not labels[-1] < date:
                    raise NonMonotonicDates(
                        f"row {row}: date {date} does not follow {labels[-1]}"
                    )
                labels.append(date)
    if not values:
        raise ParseError(0, col_name, "", f"{path} has no data rows")
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    return TimeSeries(np.array(values), labels, name)


def format_float(value: float) -> str:
    """17 significant digits: enough for a lossless round trip."""
    return f"{value:.17g}"


def series_csv(series: TimeSeries) -> str:
    """``date,value`` rows, or ``index,value`` for unlabelled series."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if series.labels is not None:
        writer.writerow(["date", "value"])
        for label, v in zip(series.labels, series.values):
            writer.writerow([label.isoformat(), format_float(v)])
    else:
        writer.writerow(["index", "value"])
        for i, v in enumerate(series.values):
            writer.writerow([i, format_float(v)])
    return buf.getvalue()


def write_csv(series: TimeSeries, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(series_csv(series))


def align_by_date(a: TimeSeries, b: TimeSeries) -> tuple[TimeSeries, TimeSeries]:
    """Restrict both series to the dates they share."""
    if a.labels is None or b.labels is None:
        raise MissingLabels("both series need date labels to be aligned")
    common = set(a.labels) & set(b.labels)
    if not common:
        raise NoOverlap()

    def restrict(s: TimeSeries) -> TimeSeries:
        keep = [i for i, d in enumerate(s.labels) if d in common]
        return TimeSeries(s.values[keep], [s.labels[i] for i in keep], s.name)

    return restrict(a), restrict(b)
