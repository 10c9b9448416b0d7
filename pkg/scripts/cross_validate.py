"""Numeric vs algebraic spectra for the three k = 1 families over a range of strengths."""

import argparse
import math

from zkosc.schrodinger_check import (
    Grid, Harmonic, PoschlTellerI, PoschlTellerII, compare_spectra, eigensolve,
    family_params, sample_family,
)
from zkosc.shape_invariance import energy_spectrum

GRIDS = {
    "harmonic": Grid(-8.0, 8.0, 2000),
    "pt1": Grid(-math.pi / 2 + 0.02, math.pi / 2 - 0.02, 3000),
    "pt2": Grid(-12.0, 12.0, 3000),
}
FAMILIES = {"harmonic": Harmonic, "pt1": PoschlTellerI, "pt2": PoschlTellerII}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--strengths", default="1,2,3,4,5")
    args = ap.parse_args()
    print(f"{'family':>10} {'A':>5} {'n':>3} {'numeric':>14} {'algebraic':>10} {'diff':>10}")
    for name, cls in FAMILIES.items():
        for A in map(float, args.strengths.split(",")):
            fam = cls(A)
            _, _, vm, _ = sample_family(fam, GRIDS[name])
            num = eigensolve(vm, args.levels)
            rep = compare_spectra(num, energy_spectrum(family_params(fam), args.levels - 1), 1.0)
            for c in rep.compared:
                print(f"{name:>10} {A:5.2f} {c.n:3d} {c.numeric:14.8f} {c.algebraic:10.4f} "
                      f"{c.difference:10.2e}")
            for e in rep.excluded:
                print(f"{name:>10} {A:5.2f} {e['n']:3d} {'-':>14} {e['algebraic']:10.4f} "
                      f"{e['reason']}")


if __name__ == "__main__":
    main()
