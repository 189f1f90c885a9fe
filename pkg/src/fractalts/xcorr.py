"""Lagged Pearson cross-correlation of two equally long series."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries
from .errors import LagTooLarge, LengthMismatch, ZeroVariance

DEFAULT_MAX_LAG = 30


@dataclass(frozen=True)
class CcfResult:
    lags: np.ndarray
    coefficients: np.ndarray
    band: np.ndarray  # white-noise 3-sigma half-width per lag, 3 / sqrt(n - |k|)
    peak_lag: int
    peak_value: float

    def to_dict(self) -> dict:
        return {
            "lags": self.lags.tolist(),
            "coefficients": self.coefficients.tolist(),
            "band": self.band.tolist(),
            "peak_lag": self.peak_lag,
            "peak_value": self.peak_value,
        }


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, TimeSeries) else np.asarray(x, dtype=np.float64)


def _corr(u: np.ndarray, v: np.ndarray, lag: int) -> float:
    # symmetric in (u, v) operation by operation, so swapping arguments is exact
    du = u - u.mean()
    dv = v - v.mean()
    suu = float(np.dot(du, du))
    svv = float(np.dot(dv, dv))
    if suu == 0.0 or svv == 0.0 or np.ptp(u) == 0.0 or np.ptp(v) == 0.0:
        raise ZeroVariance(lag)
    r = float(np.dot(du, dv)) / math.sqrt(suu * svv)
    return min(1.0, max(-1.0, r))


def _pair(a: np.ndarray, b: np.ndarray, k: int):
    n = a.size
    if k >= 0:
        return a[: n - k], b[k:]
    return a[-k:], b[: n + k]


def pearson(a, b) -> float:
    """Pearson correlation of two equally long series.

    >>> pearson([1, 2, 3, 4], [1, 3, 2, 4])  # doctest: +ELLIPSIS
    0.8...
    """
    a, b = _values(a), _values(b)
    if a.size != b.size:
        raise LengthMismatch(f"series lengths differ: {a.size} vs {b.size}")
    if a.size < 3:
        raise LagTooLarge(f"need at least 3 paired samples, got {a.size}")
    return _corr(a, b, 0)


def cross_correlation(a, b, max_lag: int = DEFAULT_MAX_LAG) -> CcfResult:
    """Correlation of ``a[t]`` with ``b[t + k]`` for ``k`` in ``[-max_lag, max_lag]``.

    Each coefficient uses the mean and variance of its own overlap window,
    so positive ``k`` means ``b`` lags ``a``. The peak is the largest
    ``|coefficient|``; ties go to the smallest ``|k|``, then to negative ``k``.
    """
    a, b = _values(a), _values(b)
    n = a.size
    if n != b.size:
        raise LengthMismatch(f"series lengths differ: {n} vs {b.size}")
    max_lag = int(max_lag)
    if max_lag < 0:
        raise LagTooLarge(f"max_lag must be non-negative, got {max_lag}")
    if n - max_lag < 3:
        raise LagTooLarge(f"max_lag {max_lag} leaves fewer than 3 overlapping samples (n = {n})")

    lags = np.arange(-max_lag, max_lag + 1)
    coef = np.array([_corr(*_pair(a, b, int(k)), int(k)) for k in lags])
    band = 3.0 / np.sqrt(n - np.abs(lags))

    order = sorted(range(lags.size), key=lambda i: (-abs(coef[i]), abs(lags[i]), lags[i]))
    best = order[0]
    return CcfResult(lags, coef, band, int(lags[best]), float(abs(coef[best])))
