"""Spectral estimation on a folded one-sided frequency grid.

All estimators return power on the scaled Fourier frequencies ``j / S`` for
``j = 1 .. S/2``: the DC bin is dropped (inputs are demeaned) and each
interior bin carries the power of both ``+j/S`` and ``-j/S``. On that grid a
pure sinusoid at a Fourier frequency lands in exactly one bin.

Cross-spectral matrices are folded as ``S(j) + S(-j) = 2 Re S(j)``, which is
real symmetric PSD, so nothing downstream needs complex arithmetic.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ContractError,
    DegenerateSeriesError,
    DimensionError,
    InputError,
    SingularCovarianceError,
    TooShortError,
)
from .linalg import inv_sqrt_psd

MIN_WOSA_LENGTH = 16
MIN_PERIODOGRAM_LENGTH = 4


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FrequencyGrid:
    """Folded grid ``j / segment_length`` for ``j = 1 .. segment_length / 2``."""

    segment_length: int

    def __post_init__(self):
        if self.segment_length < 2 or self.segment_length % 2:
            raise InputError(f"segment length must be a positive even integer, got {self.segment_length}")

    @property
    def n_bins(self):
        return self.segment_length // 2

    @property
    def frequencies(self):
        return np.arange(1, self.n_bins + 1) / self.segment_length


@dataclass(frozen=True)
class RawSpectrum:
    """Unnormalized folded power, one value per grid bin."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (self.grid.n_bins,):
            raise DimensionError(f"expected {self.grid.n_bins} values, got {values.shape}")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ContractError("raw spectrum must be finite and nonnegative")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpectralDensity:
    """Nonnegative values on a folded grid that sum to one."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (self.grid.n_bins,):
            raise DimensionError(f"expected {self.grid.n_bins} values, got {values.shape}")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ContractError("density values must be finite and nonnegative")
        if abs(values.sum() - 1.0) > 1e-12:
            raise ContractError(f"density sums to {values.sum()!r}, not 1")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values):
        """Build a density on the grid implied by ``len(values)`` bins, normalizing first."""
        values = np.asarray(values, dtype=float)
        total = values.sum()
        if not total > 0:
            raise DegenerateSeriesError("density has no mass")
        return cls(FrequencyGrid(2 * values.shape[0]), values / total)


@dataclass(frozen=True)
class SpectralMatrixSequence:
    """Folded cross-spectrum: one real symmetric ``n x n`` matrix per bin.

    ``matrices`` has shape ``(n_bins, n, n)``. When ``normalized`` is true the
    matrices sum to the identity, which makes ``w' S_j w`` a probability
    distribution over bins for every unit vector ``w``.
    """

    grid: FrequencyGrid
    matrices: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        m = _frozen(self.matrices)
        if m.ndim != 3 or m.shape[0] != self.grid.n_bins or m.shape[1] != m.shape[2]:
            raise DimensionError(f"bad matrix sequence shape {m.shape} for {self.grid.n_bins} bins")
        object.__setattr__(self, "matrices", m)

    @property
    def dim(self):
        return self.matrices.shape[1]

    @property
    def n_bins(self):
        return self.grid.n_bins

    def total(self):
        return self.matrices.sum(axis=0)


@dataclass(frozen=True)
class AutocovarianceSequence:
    gamma: np.ndarray
    rho: np.ndarray = field(init=False)

    def __post_init__(self):
        gamma = _frozen(self.gamma)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "rho", _frozen(gamma / gamma[0]))

    @property
    def lags(self):
        return np.arange(self.gamma.shape[0])


@dataclass(frozen=True)
class WosaConfig:
    """Welch/WOSA settings.

    ``segment_length=None`` picks the default from the series length: the
    largest power of two not above ``T/4``, clamped to [64, 1024]; for
    ``T < 256`` a single segment of the largest power of two not above ``T``.
    """

    segment_length: Optional[int] = None
    overlap: float = 0.5

    def __post_init__(self):
        if self.segment_length is not None:
            FrequencyGrid(self.segment_length)
        if not 0.0 <= self.overlap < 1.0:
            raise InputError(f"overlap must lie in [0, 1), got {self.overlap}")

    def resolve(self, T):
        """Segment length to use for a series of length ``T``."""
        if T < MIN_WOSA_LENGTH:
            raise TooShortError(f"series of length {T} is too short (need at least {MIN_WOSA_LENGTH})")
        if self.segment_length is not None:
            if self.segment_length > T:
                raise TooShortError(f"segment length {self.segment_length} exceeds series length {T}")
            return self.segment_length
        if T < 256:
            return 1 << (T.bit_length() - 1)
        s = 1 << ((T // 4).bit_length() - 1)
        return min(max(s, 64), 1024)

    def segment_starts(self, T):
        S = self.resolve(T)
        step = max(1, int(round(S * (1.0 - self.overlap))))
        return S, np.arange(0, T - S + 1, step)


def hann_taper(S):
    """Periodic Hann window scaled so that ``sum(taper**2) == S``."""
    h = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(S) / S)
    return h * np.sqrt(S / np.sum(h * h))


def _as_series(y, min_length):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise DimensionError(f"expected a 1-D series, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise InputError("series has non-finite values")
    if y.shape[0] < min_length:
        raise TooShortError(f"series of length {y.shape[0]} is too short (need at least {min_length})")
    return y


def fold_spectrum(full):
    """Fold two-sided power indexed ``0 .. T-1`` onto bins ``1 .. T/2``.

    Bin ``j < T/2`` receives ``full[j] + full[T-j]``; the Nyquist bin keeps
    ``full[T/2]``; DC is discarded.
    """
    full = np.asarray(full, dtype=float)
    T = full.shape[0]
    if full.ndim != 1 or T < 2 or T % 2:
        raise InputError(f"fold needs an even-length 1-D input, got shape {full.shape}")
    half = T // 2
    folded = np.empty(half)
    folded[:-1] = full[1:half] + full[T - 1:half:-1]
    folded[-1] = full[half]
    return RawSpectrum(FrequencyGrid(T), folded)


def periodogram_full(y):
    """Two-sided periodogram ``|T^-1/2 sum_t y_t exp(-2 pi i j t / T)|^2``, j = 0..T-1."""
    y = _as_series(y, MIN_PERIODOGRAM_LENGTH)
    return np.abs(np.fft.fft(y)) ** 2 / y.shape[0]


def periodogram(y):
    """Raw periodogram folded onto the one-sided grid (no demeaning, no taper)."""
    return fold_spectrum(periodogram_full(y))


def _segments(X, config):
    """Demeaned, tapered segments, shape (n_segments, S, n)."""
    S, starts = config.segment_starts(X.shape[0])
    segs = np.stack([X[s:s + S] for s in starts])
    segs = segs - segs.mean(axis=1, keepdims=True)
    return S, segs * hann_taper(S)[None, :, None]


def wosa_univariate(y, config=None):
    """Welch (WOSA) spectrum of a single series.

    Hann-tapered, mean-removed segments with 50% overlap by default; the
    segment periodograms are averaged and folded onto the grid of the
    segment length. The taper normalization makes white noise of variance
    ``s2`` come out at level ``2 * s2`` per interior bin.
    """
    config = config or WosaConfig()
    y = _as_series(y, MIN_WOSA_LENGTH)
    S, segs = _segments(y[:, None], config)
    power = np.abs(np.fft.fft(segs[:, :, 0], axis=1)) ** 2 / S
    return fold_spectrum(power.mean(axis=0))


def wosa_cross_spectrum(X, config=None):
    """Folded WOSA cross-spectral matrices of a ``T x n`` series.

    Per bin this is the segment average of ``d d^H / S`` for the tapered DFT
    vector ``d``, folded to ``2 Re(.)`` (Nyquist bin unfolded). The diagonal
    reproduces ``wosa_univariate`` of each column.
    """
    config = config or WosaConfig()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionError(f"expected a T x n matrix, got shape {X.shape}")
    if X.shape[1] == 0:
        raise InputError("need at least one column")
    if not np.all(np.isfinite(X)):
        raise InputError("series has non-finite values")
    if X.shape[0] < MIN_WOSA_LENGTH:
        raise TooShortError(f"series of length {X.shape[0]} is too short (need at least {MIN_WOSA_LENGTH})")
    S, segs = _segments(X, config)
    d = np.fft.rfft(segs, axis=1)[:, 1:, :]  # (segments, S/2, n), DC dropped
    re, im = d.real, d.imag
    mats = (np.einsum("sja,sjb->jab", re, re) + np.einsum("sja,sjb->jab", im, im)) / (S * d.shape[0])
    mats[:-1] *= 2.0
    mats = 0.5 * (mats + np.transpose(mats, (0, 2, 1)))
    return SpectralMatrixSequence(FrequencyGrid(S), mats, normalized=False)


def normalize_density(raw):
    """Divide a raw spectrum by its total power."""
    total = raw.values.sum()
    if not total > 0:
        raise DegenerateSeriesError("spectrum has zero total power (constant series?)")
    return SpectralDensity(raw.grid, raw.values / total)


def renormalize_sequence(seq, rcond_tol=1e-12):
    """Congruence by ``M^-1/2`` where ``M`` is the sum over bins, so the result sums to ``I``."""
    try:
        R = inv_sqrt_psd(seq.total(), rcond_tol)
    except SingularCovarianceError as exc:
        raise DegenerateSeriesError(f"cross-spectrum is degenerate: {exc}") from exc
    mats = np.einsum("ab,jbc,cd->jad", R, seq.matrices, R)
    mats = 0.5 * (mats + np.transpose(mats, (0, 2, 1)))
    return SpectralMatrixSequence(seq.grid, mats, normalized=True)


def combo_density(w, seq):
    """Spectral density of the projection ``w' X`` from a normalized sequence."""
    if not seq.normalized:
        raise ContractError("combo_density needs a normalized spectral matrix sequence")
    w = np.asarray(w, dtype=float)
    if w.shape != (seq.dim,):
        raise DimensionError(f"w has shape {w.shape}, sequence dimension is {seq.dim}")
    if abs(np.linalg.norm(w) - 1.0) > 1e-10:
        raise InputError("w must have unit norm")
    values = np.einsum("a,jab,b->j", w, seq.matrices, w)
    values = np.where(values < 0.0, 0.0, values)
    return SpectralDensity(seq.grid, values / values.sum())


def sample_acf(y, max_lag):
    """Sample autocovariance with denominator ``T`` and its autocorrelation."""
    y = _as_series(y, 2)
    T = y.shape[0]
    if not 0 <= max_lag < T:
        raise InputError(f"max_lag must lie in [0, {T}), got {max_lag}")
    if np.ptp(y) == 0:
        raise DegenerateSeriesError("constant series has no autocorrelation")
    yc = y - y.mean()
    gamma = np.array([yc[k:] @ yc[:T - k] for k in range(max_lag + 1)]) / T
    return AutocovarianceSequence(gamma)


SpectrumEstimator = Callable[[np.ndarray], RawSpectrum]
