"""Monte-Carlo spatial correlation of the Fourier plane-wave NLoS channel.

Compares the empirical correlation between receive points along a line with
the isotropic reference sinc(2d) for several receive-lattice sizes.

    python3 scripts/nlos_correlation.py --seeds 2000 --sizes 8 16 32
"""
import argparse

import numpy as np

from xlmimo.channels import ScatteringSpectrum, nlos_fourier_planewave
from xlmimo.geometry import build_ula, stack_points


def correlation(size, seeds, n_points=9, spacing=0.25):
    rx = build_ula(n_points, spacing)
    tx = stack_points([(0.0, 0.0, 20.0)])
    spec = ScatteringSpectrum.isotropic((size, size), (1.0, 1.0))
    num = np.zeros(n_points)
    den = np.zeros(n_points)
    for seed in range(seeds):
        h = nlos_fourier_planewave(tx, rx, spec, seed=seed).entries[:, 0]
        p = np.abs(h) ** 2
        for k in range(1, n_points):
            num[k] += np.sum((h[:-k] * h[k:].conj()).real)
            den[k] += 0.5 * np.sum(p[:-k] + p[k:])
    lags = np.arange(1, n_points) * spacing
    return lags, num[1:] / den[1:]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--sizes", type=float, nargs="+", default=[8.0, 16.0, 32.0])
    args = ap.parse_args()
    for size in args.sizes:
        lags, rho = correlation(size, args.seeds)
        print(f"receive lattice size {size:g} wavelengths")
        for d, r in zip(lags, rho):
            print(f"  d={d:5.2f}  empirical {r:+.4f}  sinc {np.sinc(2 * d):+.4f}  err {r - np.sinc(2 * d):+.4f}")


if __name__ == "__main__":
    main()
