"""Synthetic series with known scaling: white noise, fGn and binomial cascades.

Every generator draws from ``numpy.random.Generator(PCG64(seed))``, so output
is a deterministic function of the parameters and the seed.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import TimeSeries
from .errors import EmbeddingFailure, InvalidGeneratorSpec

KINDS = ("white_noise", "fgn", "cascade")

# negative circulant eigenvalues above this are rounding noise and clamped to zero
EIGEN_CLAMP = -1e-10


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidGeneratorSpec(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def white_noise(length: int, seed: int = 0) -> TimeSeries:
    """I.i.d. standard Gaussian samples."""
    if length < 1:
        raise InvalidGeneratorSpec(f"length must be >= 1, got {length}")
    rng = make_rng(seed)
    return TimeSeries(rng.standard_normal(length), name="white_noise")


def fgn_autocovariance(h: float, lags) -> np.ndarray:
    """Unit-variance fGn autocovariance ``(|k+1|^2h - 2|k|^2h + |k-1|^2h) / 2``."""
    k = np.abs(np.asarray(lags, dtype=np.float64))
    e = 2.0 * h
    return 0.5 * (np.abs(k + 1) ** e - 2.0 * k ** e + np.abs(k - 1) ** e)


def circulant_eigenvalues(h: float, length: int) -> np.ndarray:
    """Eigenvalues of the size-``2 length`` circulant embedding of the fGn covariance."""
    gamma = fgn_autocovariance(h, np.arange(length + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    worst = lam.min()
    if worst < EIGEN_CLAMP:
        raise EmbeddingFailure(
            f"circulant embedding has eigenvalue {worst:.3g} < {EIGEN_CLAMP} "
            f"(h={h}, length={length})"
        )
    return np.clip(lam, 0.0, None)


def fgn(h: float, length: int, seed: int = 0) -> TimeSeries:
    """Exact fractional Gaussian noise by circulant embedding (Davies-Harte).

    A complex Gaussian vector ``Z`` with i.i.d. N(0, 1) real and imaginary
    parts is coloured in the Fourier domain, ``Y = FFT(sqrt(lam / M) Z)``;
    the real part of ``Y`` then has exactly the embedded circulant covariance,
    whose leading ``length x length`` block is the fGn covariance.
    """
    if not 0.0 < h < 1.0:
        raise InvalidGeneratorSpec(f"Hurst exponent must satisfy 0 < H < 1, got {h}")
    if length < 1:
        raise InvalidGeneratorSpec(f"length must be >= 1, got {length}")
    lam = circulant_eigenvalues(h, length)
    size = lam.size
    rng = make_rng(seed)
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    y = np.fft.fft(np.sqrt(lam / size) * z)
    return TimeSeries(y.real[:length].copy(), name="fgn")


def cascade(p: float, levels: int, seed: int = 0) -> TimeSeries:
    """Binomial multiplicative cascade on ``2**levels`` cells.

    Each split hands fraction ``p`` of an interval's mass to one half and
    ``1 - p`` to the other; which half gets ``p`` is a fair coin flip.
    """
    if not 0.0 < p <= 0.5:
        raise InvalidGeneratorSpec(f"cascade weight must satisfy 0 < p <= 0.5, got {p}")
    if int(levels) != levels or levels < 1:
        raise InvalidGeneratorSpec(f"levels must be a positive integer, got {levels}")
    rng = make_rng(seed)
    mass = np.ones(1)
    for _ in range(int(levels)):
        left = np.where(rng.random(mass.size) < 0.5, p, 1.0 - p)
        mass = np.stack([mass * left, mass * (1.0 - left)], axis=1).ravel()
    return TimeSeries(mass, name="cascade")


def cascade_h(q, p: float):
    """Closed-form ``h(q) = 1/q - ln(p^q + (1-p)^q) / (q ln 2)`` of the cascade, q != 0."""
    q = np.asarray(q, dtype=np.float64)
    return 1.0 / q - np.log(p ** q + (1.0 - p) ** q) / (q * math.log(2.0))


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: Optional[int] = None
    seed: int = 0
    h: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidGeneratorSpec(f"unknown kind {self.kind!r}; choose from {KINDS}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidGeneratorSpec(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.length is None or self.length < 1:
            raise InvalidGeneratorSpec(f"length must be a positive integer, got {self.length}")
        if self.kind == "fgn":
            if self.h is None or not 0.0 < self.h < 1.0:
                raise InvalidGeneratorSpec(
                    f"fgn needs a Hurst exponent with 0 < H < 1, got {self.h}"
                )
        if self.kind == "cascade":
            if self.p is None or not 0.0 < self.p <= 0.5:
                raise InvalidGeneratorSpec(f"cascade needs 0 < p <= 0.5, got {self.p}")
            if self.length & (self.length - 1):
                raise InvalidGeneratorSpec(
                    f"cascade length must be a power of two, got {self.length}"
                )
            if self.length < 2:
                raise InvalidGeneratorSpec("cascade needs at least one level (length >= 2)")

    @property
    def levels(self) -> int:
        return int(self.length).bit_length() - 1

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.kind == "cascade":
            d["levels"] = self.levels
        return d


def generate(spec: GeneratorSpec) -> TimeSeries:
    if spec.kind == "white_noise":
        return white_noise(spec.length, spec.seed)
    if spec.kind == "fgn":
        return fgn(spec.h, spec.length, spec.seed)
    return cascade(spec.p, spec.levels, spec.seed)
