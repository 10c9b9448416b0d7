"""Closed-form vs recursive structure function and spectrum method agreement by k."""

import argparse
from collections import defaultdict

import numpy as np

from zkosc.shape_invariance import (
    SpectrumMethod, energy_spectrum, random_params, spectrum_deviation, structure_recursive,
    structure_table,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=2000)
    ap.add_argument("--k-max", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    worst_g = defaultdict(float)
    worst_e = defaultdict(float)
    count = defaultdict(int)
    for _ in range(args.cases):
        p = random_params(rng, args.k_max)
        closed = structure_table(p, args.n_max).values
        rec = structure_recursive(p, args.n_max).values
        dev = max(abs(x - y) / max(1.0, abs(y)) for x, y in zip(closed, rec))
        spectra = [energy_spectrum(p, args.n_max, m).energies for m in SpectrumMethod]
        sdev = max(spectrum_deviation(spectra[0], s) for s in spectra[1:])
        worst_g[p.k] = max(worst_g[p.k], dev)
        worst_e[p.k] = max(worst_e[p.k], sdev)
        count[p.k] += 1
    print(f"{'k':>3} {'cases':>6} {'structure dev':>14} {'spectrum dev':>13}")
    for k in sorted(count):
        print(f"{k:3d} {count[k]:6d} {worst_g[k]:14.2e} {worst_e[k]:13.2e}")


if __name__ == "__main__":
    main()
