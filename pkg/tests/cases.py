"""Synthetic inputs shared by several test modules.

Each builder is seeded and cheap; the parameter ranges were checked once by
simulation so the constructions are well separated (see scripts/).
"""
import numpy as np

from foreca.spectrum import WosaConfig, renormalize_sequence, wosa_cross_spectrum
from foreca.synth import ProcessSpec, generate, mix, rotation, seasonal_ar2
from foreca.whitening import fit_whitener, whiten


def mixture_4d(seed, T=1024):
    """Four structurally different sources under a Gaussian mixing matrix."""
    rng = np.random.default_rng(seed)
    specs = [
        ProcessSpec("ar", T, seed=seed * 10, coeffs=(rng.uniform(-0.9, 0.9),)),
        ProcessSpec("ar", T, seed=seed * 10 + 1, coeffs=seasonal_ar2(rng.uniform(4, 20), rng.uniform(0.5, 0.95))),
        ProcessSpec("sinusoid", T, seed=seed * 10 + 2, freq=rng.uniform(0.02, 0.45),
                    amplitude=1.0, noise_sd=rng.uniform(0.3, 2.0)),
        ProcessSpec("white_noise", T, seed=seed * 10 + 3),
    ]
    S = np.column_stack([generate(s) for s in specs])
    A = rng.standard_normal((4, 4))
    w0 = rng.uniform(-1.0, 1.0, 4)
    return mix(S, A), w0


def whitened_sequence(X, config=None):
    U = whiten(X, fit_whitener(X))
    return renormalize_sequence(wosa_cross_spectrum(U, config or WosaConfig()))


def planted_pair(seed, T=2048, theta=None):
    """Seasonal AR(2) next to white noise, rotated by ``theta``."""
    theta = 0.3 + 0.5 * seed if theta is None else theta
    ar = generate(ProcessSpec("ar", T, seed=2 * seed, coeffs=seasonal_ar2(12, 0.95)))
    noise = generate(ProcessSpec("white_noise", T, seed=2 * seed + 1))
    R = rotation(theta)
    return mix(np.column_stack([ar, noise]), R), R


def two_channel_instance(seed, T=512):
    """Random n=2 mixture of a seasonal AR(2) and an AR(1); returns a normalized sequence."""
    rng = np.random.default_rng(1000 + seed)
    a = generate(ProcessSpec("ar", T, seed=rng.integers(1 << 30),
                             coeffs=seasonal_ar2(rng.uniform(4, 16), rng.uniform(0.5, 0.9))))
    b = generate(ProcessSpec("ar", T, seed=rng.integers(1 << 30), coeffs=(rng.uniform(-0.8, 0.8),)))
    X = mix(np.column_stack([a, b]), rng.standard_normal((2, 2)))
    return whitened_sequence(X, WosaConfig(64))


def ordering_trio(seed, T=2048):
    """White noise, persistent AR(2) (double root 0.9) and a noisy seasonal sinusoid."""
    noise = generate(ProcessSpec("white_noise", T, seed=3 * seed))
    ar = generate(ProcessSpec("ar", T, seed=3 * seed + 1, coeffs=(1.8, -0.81)))
    sin = generate(ProcessSpec("sinusoid", T, seed=3 * seed + 2, freq=1 / 12,
                               amplitude=np.sqrt(2.0), noise_sd=0.3,
                               phase=np.random.default_rng(seed).uniform(0, 2 * np.pi)))
    return noise, ar, sin
