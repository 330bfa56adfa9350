"""Sampling distribution of the white-noise forecastability estimate.

Used to freeze two test thresholds: the upper bound on Omega for Gaussian
noise at the default configuration, and the per-bin deviation of the WOSA
density from uniform at segment length 256.

    python3 scripts/calibrate_white_noise.py --seeds 200
"""
import argparse

import numpy as np

from foreca.forecastability import omega_series
from foreca.spectrum import WosaConfig, normalize_density, wosa_univariate


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--T", type=int, default=2048)
    args = parser.parse_args()

    omegas = np.array([float(omega_series(np.random.default_rng(s).standard_normal(args.T)))
                       for s in range(args.seeds)])
    print(f"omega, T={args.T}, default config, {args.seeds} seeds")
    print(f"  mean {omegas.mean():.5f}  p99 {np.quantile(omegas, 0.99):.5f}  max {omegas.max():.5f}")

    dev = []
    for s in range(args.seeds):
        f = normalize_density(wosa_univariate(np.random.default_rng(s).standard_normal(4096), WosaConfig(256)))
        v = f.values.copy()
        v[-1] *= 2.0  # Nyquist bin carries one side only
        dev.append(np.max(np.abs(v * (len(v) - 0.5) - 1.0)))
    dev = np.array(dev)
    print("max relative deviation from uniform, T=4096, S=256")
    print(f"  seed 0 {dev[0]:.3f}  median {np.median(dev):.3f}  p99 {np.quantile(dev, 0.99):.3f}  max {dev.max():.3f}")


if __name__ == "__main__":
    main()
