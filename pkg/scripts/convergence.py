"""Grid refinement of the finite-difference eigenvalues against the algebraic levels."""

import argparse
import math

import numpy as np

from zkosc.schrodinger_check import (
    Grid, Harmonic, PoschlTellerI, PoschlTellerII, eigensolve, family_params, sample_family,
)
from zkosc.shape_invariance import energy_spectrum

CASES = {
    "harmonic": (Harmonic(2.0), (-8.0, 8.0)),
    "pt1": (PoschlTellerI(1.0), (-math.pi / 2 + 0.02, math.pi / 2 - 0.02)),
    "pt2": (PoschlTellerII(3.0), (-12.0, 12.0)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", default="250,500,1000,2000,4000")
    ap.add_argument("--levels", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(m) for m in args.points.split(",")]
    for name, (fam, (lo, hi)) in CASES.items():
        exact = np.array(energy_spectrum(family_params(fam), args.levels - 1).energies, float)
        print(f"{name}: max |E_num - E_alg| over {args.levels} levels")
        prev = None
        for m in sizes:
            _, _, vm, _ = sample_family(fam, Grid(lo, hi, m))
            err = float(np.max(np.abs(eigensolve(vm, args.levels).eigenvalues - exact)))
            ratio = "" if prev is None else f"  ratio {prev / err:5.2f}"
            print(f"  M={m:5d} h={(hi - lo) / (m - 1):.4f} err={err:.3e}{ratio}")
            prev = err


if __name__ == "__main__":
    main()
