"""Spectral entropy and the forecastability measure Omega.

Entropies are taken in natural log and divided by ``ln(n_bins)``, so a flat
density has entropy 1 and ``omega = 1 - entropy`` lies in [0, 1] on any grid.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, InputError
from .spectrum import (
    SpectralDensity,
    WosaConfig,
    combo_density,
    normalize_density,
    wosa_univariate,
)

# density values below this are exact zeros (0 log 0 = 0)
ZERO_DENSITY = 1e-300


@dataclass(frozen=True)
class OmegaValue:
    omega: float
    entropy_normalized: float
    n_bins: int

    def __float__(self):
        return self.omega


def _density_values(f):
    if isinstance(f, SpectralDensity):
        return f.values
    return SpectralDensity.from_values(f).values


def spectral_entropy(f):
    """Normalized Shannon entropy ``-sum f log f / log(n_bins)`` of a density.

    ``f`` may be a :class:`SpectralDensity` or an array of nonnegative
    weights (normalized first).
    """
    p = _density_values(f)
    n = p.shape[0]
    if n < 2:
        raise InputError("entropy normalization needs at least 2 bins")
    nz = p[p > ZERO_DENSITY]
    h = -float(np.sum(nz * np.log(nz))) / float(np.log(n))
    return min(1.0, max(0.0, h))


def omega_from_density(f):
    h = spectral_entropy(f)
    return OmegaValue(omega=float(1.0 - h), entropy_normalized=float(h), n_bins=_density_values(f).shape[0])


def omega_series(y, config=None, estimator=None):
    """Plug-in forecastability of a univariate series.

    Parameters
    ----------
    y : array_like
        Series of length at least 16.
    config : WosaConfig, optional
        Used by the default WOSA estimator.
    estimator : callable, optional
        Any ``y -> RawSpectrum`` function, e.g. :func:`foreca.spectrum.periodogram`;
        overrides the WOSA default.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim == 1 and y.size and np.ptp(y) == 0:
        raise DegenerateSeriesError("constant series has no forecastability")
    if estimator is None:
        raw = wosa_univariate(y, config or WosaConfig())
    else:
        raw = estimator(y)
    return omega_from_density(normalize_density(raw))


def h_objective(w, seq):
    """Normalized spectral entropy of ``w' U`` given a normalized cross-spectrum."""
    return spectral_entropy(combo_density(w, seq))
