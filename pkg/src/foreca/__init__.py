"""Forecastable component analysis (ForeCA)."""
from .core import ForecaConfig, ForecaModel, em_run, em_step, foreca_fit, foreca_one, transform, weighted_spectrum
from .errors import (
    ContractError,
    DegenerateSeriesError,
    DimensionError,
    ForecaError,
    InputError,
    NumericalFailure,
    SingularCovarianceError,
    TooShortError,
)
from .forecastability import OmegaValue, h_objective, omega_from_density, omega_series, spectral_entropy
from .spectrum import WosaConfig, periodogram, wosa_cross_spectrum, wosa_univariate

__version__ = "0.1.0"
