"""Multifractal detrended fluctuation analysis.

The pipeline is ``build_profile -> fluctuation_function -> fit_scaling``:
the profile is cut into segments of each length ``tau`` (tiled from both
ends), a degree-``m`` polynomial is removed from every segment, and the
per-segment mean squared residuals ``F2`` are combined into the q-order
generalized mean

    F_q(tau) = [ mean_s F2_s ** (q/2) ] ** (1/q),   F_0(tau) = exp(mean_s ln F2_s / 2).

The generalized Hurst exponent ``h(q)`` is the OLS slope of ``ln F_q`` against
``ln tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .core import AnalysisConfig, Profile, TimeSeries, build_profile
from .errors import (
    ConfigInvalid,
    DegenerateFit,
    InsufficientPoints,
    NonFiniteLog,
    TauTooLarge,
    ZeroVarianceSegment,
)

FORWARD = "forward"
BACKWARD = "backward"

# residual energy below (64 * tau * eps)**2 * max(y**2) is rounding noise
_SNAP = 64 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class SegmentLayout:
    tau: int
    n_segments: int
    starts: tuple  # (start index, direction) pairs, forward segments first

    def index_matrix(self) -> np.ndarray:
        first = np.array([s for s, _ in self.starts], dtype=np.intp)
        return first[:, None] + np.arange(self.tau)


def segment(profile, tau: int) -> SegmentLayout:
    """Lay out ``2 * (n // tau)`` segments of length ``tau``.

    Forward segments start at 0, tau, 2 tau, ...; backward segments end at
    n, n - tau, .... When tau divides n both passes cover the same windows.
    """
    n = len(profile)
    tau = int(tau)
    if tau < 2:
        raise ConfigInvalid(f"segment length must be >= 2, got {tau}")
    if tau > n:
        raise TauTooLarge(f"segment length {tau} exceeds series length {n}")
    count = n // tau
    starts = [(k * tau, FORWARD) for k in range(count)]
    starts += [(n - (k + 1) * tau, BACKWARD) for k in range(count)]
    return SegmentLayout(tau, 2 * count, tuple(starts))


def _trend_basis(tau: int, order: int) -> np.ndarray:
    """Orthonormal basis of degree-``order`` polynomials on ``tau`` points."""
    u = np.linspace(-1.0, 1.0, tau)
    vander = np.vander(u, order + 1, increasing=True)
    q, _ = np.linalg.qr(vander)
    return q


def _segment_variances(segments: np.ndarray, order: int) -> np.ndarray:
    # rows are segments; returns mean squared residual per row
    tau = segments.shape[1]
    basis = _trend_basis(tau, order)
    centered = segments - segments.mean(axis=1, keepdims=True)
    resid = centered - (centered @ basis) @ basis.T
    f2 = np.mean(resid * resid, axis=1)
    scale = np.max(np.abs(segments), axis=1)
    f2[f2 <= (_SNAP * tau * scale) ** 2] = 0.0
    return f2


def detrend_fluctuation(segment_values: Sequence[float], m: int) -> float:
    """Mean squared residual of an OLS degree-``m`` polynomial fit.

    >>> detrend_fluctuation([0.0, 1.0, 0.0], 1)  # doctest: +ELLIPSIS
    0.2222...
    """
    seg = np.asarray(segment_values, dtype=np.float64)
    if seg.ndim != 1 or seg.size < m + 2:
        raise DegenerateFit(
            f"segment of length {seg.size} cannot be detrended at order {m} (need >= {m + 2})"
        )
    return float(_segment_variances(seg[None, :], m)[0])


def segment_variances(profile, tau: int, m: int) -> np.ndarray:
    """Per-segment detrended variances ``F2`` in layout order."""
    if tau < m + 2:
        raise DegenerateFit(f"segment length {tau} too short for detrend order {m}")
    y = profile.values if isinstance(profile, Profile) else np.asarray(profile, dtype=np.float64)
    layout = segment(y, tau)
    return _segment_variances(y[layout.index_matrix()], m)


def generalized_mean(f2: np.ndarray, q: float) -> float:
    """``ln F_q`` from per-segment variances, computed in log space."""
    with np.errstate(divide="ignore"):
        log_f2 = np.log(f2)
    if q == 0:
        return 0.5 * float(np.mean(log_f2))
    return float((logsumexp(0.5 * q * log_f2) - math.log(f2.size)) / q)


@dataclass(frozen=True)
class FluctuationTable:
    q_grid: tuple
    tau_grid: tuple
    values: np.ndarray  # shape (len(q_grid), len(tau_grid))
    detrend_order: int
    n_segments: tuple = ()

    def row(self, q: float) -> np.ndarray:
        return self.values[self.q_grid.index(float(q))]

    def rows(self):
        """``(q, tau, F)`` triples, q-major."""
        for i, q in enumerate(self.q_grid):
            for j, tau in enumerate(self.tau_grid):
                yield q, tau, float(self.values[i, j])

    def to_dict(self) -> dict:
        return {
            "q_grid": list(self.q_grid),
            "tau_grid": list(self.tau_grid),
            "detrend_order": self.detrend_order,
            "n_segments": list(self.n_segments),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FluctuationTable":
        return cls(
            tuple(float(q) for q in d["q_grid"]),
            tuple(int(t) for t in d["tau_grid"]),
            np.array(d["values"], dtype=np.float64),
            int(d["detrend_order"]),
            tuple(d.get("n_segments", ())),
        )


def fluctuation_function(profile: Profile, config: AnalysisConfig) -> FluctuationTable:
    """Evaluate ``F_q(tau)`` on the config's (q, tau) grid.

    Raises ``ZeroVarianceSegment`` when a segment is exactly polynomial and a
    non-positive moment order is requested.
    """
    config.check_length(len(profile))
    m = config.detrend_order
    q_grid = config.q_grid
    min_q = min(q_grid)
    log_f = np.empty((len(q_grid), len(config.tau_grid)))
    counts = []
    for j, tau in enumerate(config.tau_grid):
        f2 = segment_variances(profile, tau, m)
        counts.append(f2.size)
        zeros = np.flatnonzero(f2 == 0.0)
        if zeros.size and (min_q <= 0 or zeros.size == f2.size):
            raise ZeroVarianceSegment(tau, int(zeros[0]))
        for i, q in enumerate(q_grid):
            log_f[i, j] = generalized_mean(f2, q)
    return FluctuationTable(q_grid, config.tau_grid, np.exp(log_f), m, tuple(counts))


@dataclass(frozen=True)
class HurstSpectrum:
    q_grid: tuple
    h: np.ndarray
    r_squared: np.ndarray
    hurst: Optional[float]
    delta_h: float
    intercept: Optional[np.ndarray] = None
    fit_taus: tuple = ()

    def h_at(self, q: float) -> float:
        return float(self.h[self.q_grid.index(float(q))])

    def to_dict(self) -> dict:
        d = {
            "q_grid": list(self.q_grid),
            "h": self.h.tolist(),
            "r_squared": self.r_squared.tolist(),
            "delta_h": self.delta_h,
            "fit_taus": list(self.fit_taus),
        }
        if self.hurst is not None:
            d["hurst"] = self.hurst
        return d


def fit_scaling(table: FluctuationTable, fit_range: Optional[tuple] = None) -> HurstSpectrum:
    """OLS slope of ``ln F_q`` against ``ln tau`` for every q."""
    taus = np.asarray(table.tau_grid, dtype=np.float64)
    if fit_range is None:
        keep = np.ones(taus.size, dtype=bool)
    else:
        lo, hi = fit_range
        keep = (taus >= lo) & (taus <= hi)
    if keep.sum() < 4:
        raise InsufficientPoints(
            f"{int(keep.sum())} segment lengths inside fit range {fit_range}; need at least 4"
        )
    f = table.values[:, keep]
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise NonFiniteLog("fluctuation table has non-positive or non-finite entries")

    x = np.log(taus[keep])
    y = np.log(f)
    xc = x - x.mean()
    yc = y - y.mean(axis=1, keepdims=True)
    sxx = float(xc @ xc)
    slope = (yc @ xc) / sxx
    intercept = y.mean(axis=1) - slope * x.mean()
    ss_tot = np.sum(yc * yc, axis=1)
    resid = yc - slope[:, None] * xc
    ss_res = np.sum(resid * resid, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        r2 = np.where(ss_tot > 0, 1.0 - ss_res / ss_tot, 1.0)

    q_grid = tuple(table.q_grid)
    hurst = float(slope[q_grid.index(2.0)]) if 2.0 in q_grid else None
    delta_h = float(slope[0] - slope[-1])
    return HurstSpectrum(
        q_grid, slope, r2, hurst, delta_h, intercept,
        tuple(int(t) for t in taus[keep]),
    )


def analyze(x: TimeSeries, config: Optional[AnalysisConfig] = None) -> HurstSpectrum:
    """Full MFDFA of a series; ``config`` defaults to ``AnalysisConfig.for_length``."""
    if config is None:
        config = AnalysisConfig.for_length(len(x))
    table = fluctuation_function(build_profile(x), config)
    return fit_scaling(table, config.fit_range)

