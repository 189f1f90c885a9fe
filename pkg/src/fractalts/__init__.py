"""Fractal and multifractal analysis of time series (MFDFA, Hurst exponents, CCF)."""

__version__ = "0.1.0"

from .core import (
    AnalysisConfig,
    Profile,
    TimeSeries,
    align_by_date,
    build_profile,
    load_csv,
    write_csv,
)
from .errors import *  # noqa: F401,F403
from .mfdfa import (
    FluctuationTable,
    HurstSpectrum,
    SegmentLayout,
    analyze,
    detrend_fluctuation,
    fit_scaling,
    fluctuation_function,
    segment,
)
from .synth import GeneratorSpec, cascade, cascade_h, fgn, generate, white_noise
from .xcorr import CcfResult, cross_correlation, pearson
