"""Seeded synthetic processes for tests, calibration scripts and demos."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from .errors import DimensionError, InputError

KINDS = ("white_noise", "ar", "sinusoid", "harmonic")


@dataclass(frozen=True)
class ProcessSpec:
    """Description of a univariate process.

    ``kind`` selects which of the remaining fields matter:

    * ``white_noise``: ``sigma``
    * ``ar``: ``coeffs`` (phi_1, ..., phi_p) and innovation ``sigma``
    * ``sinusoid``: ``freq`` (cycles per sample), ``amplitude``, ``noise_sd``
    * ``harmonic``: ``sqrt(2) cos(2 pi Y t + theta)`` with ``Y`` drawn from
      ``support`` with probabilities ``probs`` and ``theta ~ U(-pi, pi)``
    """

    kind: str
    T: int
    seed: int = 0
    sigma: float = 1.0
    coeffs: Tuple[float, ...] = ()
    freq: float = 0.0
    amplitude: float = 1.0
    noise_sd: float = 0.0
    phase: float = 0.0
    support: Tuple[float, ...] = ()
    probs: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown process kind {self.kind!r}")
        if self.T < 1:
            raise InputError("T must be positive")
        if self.kind == "ar":
            if not self.coeffs:
                raise InputError("AR process needs coefficients")
            if not is_stationary(self.coeffs):
                raise InputError(f"AR coefficients {self.coeffs} are not stationary")
        if self.kind == "harmonic":
            if not self.support:
                raise InputError("harmonic process needs a frequency support")
            if self.probs is not None:
                p = np.asarray(self.probs, dtype=float)
                if p.shape != (len(self.support),) or np.any(p < 0) or not np.isclose(p.sum(), 1.0):
                    raise InputError("probs must be a distribution over support")


def is_stationary(coeffs):
    """True when all roots of ``1 - phi_1 z - ... - phi_p z^p`` lie outside the unit circle."""
    poly = np.r_[1.0, -np.asarray(coeffs, dtype=float)]
    if np.all(poly[1:] == 0):
        return True
    roots = np.roots(poly[::-1])
    return bool(np.all(np.abs(roots) > 1.0))


def seasonal_ar2(period, radius):
    """AR(2) coefficients with complex roots of modulus ``radius`` at frequency ``1/period``."""
    return (2.0 * radius * np.cos(2.0 * np.pi / period), -radius ** 2)


def generate(spec):
    rng = np.random.default_rng(spec.seed)
    T = spec.T
    t = np.arange(T)
    if spec.kind == "white_noise":
        return spec.sigma * rng.standard_normal(T)
    if spec.kind == "ar":
        phi = np.asarray(spec.coeffs, dtype=float)
        p = phi.shape[0]
        burn = 10 * p
        e = spec.sigma * rng.standard_normal(T + burn)
        return lfilter([1.0], np.r_[1.0, -phi], e)[burn:]
    if spec.kind == "sinusoid":
        y = spec.amplitude * np.cos(2.0 * np.pi * spec.freq * t + spec.phase)
        if spec.noise_sd:
            y = y + spec.noise_sd * rng.standard_normal(T)
        return y
    support = np.asarray(spec.support, dtype=float)
    freq = rng.choice(support, p=None if spec.probs is None else np.asarray(spec.probs))
    theta = rng.uniform(-np.pi, np.pi)
    return np.sqrt(2.0) * np.cos(2.0 * np.pi * freq * t + theta)


def mix(sources, A):
    """Observed series ``sources @ A'`` for an invertible mixing matrix ``A``."""
    sources = np.asarray(sources, dtype=float)
    A = np.asarray(A, dtype=float)
    if sources.ndim != 2 or A.shape != (sources.shape[1], sources.shape[1]):
        raise DimensionError(f"cannot mix sources {sources.shape} with A {A.shape}")
    if np.linalg.cond(A) > 1e12:
        raise InputError("mixing matrix is singular")
    return sources @ A.T


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
