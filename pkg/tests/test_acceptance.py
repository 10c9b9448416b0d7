"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest.
"""

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from golden import omegas, table  # noqa: E402
from zkosc.graded_fock import Convention, make_window  # noqa: E402
from zkosc.oscillator_algebra import (  # noqa: E402
    Label,
    OperatorMatrix,
    build_grading,
    build_ladders,
    build_projector,
    check_algebra,
    grading_phases,
)
from zkosc.schrodinger_check import (  # noqa: E402
    Grid,
    Harmonic,
    PoschlTellerI,
    PoschlTellerII,
    compare_spectra,
    eigensolve,
    family_params,
    sample_family,
    verify_family_partners,
)
from zkosc.shape_invariance import (  # noqa: E402
    SipParams,
    SpectrumMethod,
    coefficients,
    energy_spectrum,
    random_params,
    spectrum_deviation,
    structure_as_fn,
    structure_recursive,
    structure_table,
)

SEED = 20240601


def _report(tag, title, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"[{'PASS' if ok else 'FAIL'}] {tag} {title}: {detail} ({elapsed:.2f}s / {budget:g}s)"
    print(line)
    return ok, line


def ac1_golden_tables():
    t0 = time.perf_counter()
    bad, pairs = [], 0
    for k in (2, 3, 4, 5):
        w = omegas(k)
        cols = []
        for j in range(k):
            unit = tuple(Fraction(int(i == j)) for i in range(k))
            cols.append(coefficients(SipParams(k, (0,) * k, unit, 0, 0)))
        c_gold, d_gold = table(k)
        for s in range(k):
            c = sum(sp.Rational(cols[j].c[s].numerator, cols[j].c[s].denominator) * w[j]
                    for j in range(k))
            d = sum(sp.Rational(cols[j].d[s].numerator, cols[j].d[s].denominator) * w[j]
                    for j in range(k))
            for name, got, want in (("c", c, c_gold[s]), ("d", d, d_gold[s])):
                pairs += 1
                if sp.expand(got - want) != 0:
                    bad.append(f"k={k} {name}_{s}")
    elapsed = time.perf_counter() - t0
    detail = f"{pairs - len(bad)}/{pairs} entries exact" + (f", mismatched {bad}" if bad else "")
    return _report("AC1", "coefficient golden tables", not bad and pairs == 28, detail,
                   elapsed, 1.0)


def ac2_structure_oracle(cases=500):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(cases):
        p = random_params(rng, 8)
        n_max = int(rng.integers(1, 201))
        closed = structure_table(p, n_max).values
        rec = structure_recursive(p, n_max).values
        for x, y in zip(closed, rec):
            worst = max(worst, abs(x - y) / max(1.0, abs(y)))
    elapsed = time.perf_counter() - t0
    return _report("AC2", "closed vs recursive structure", worst <= 1e-9,
                   f"{cases} cases, max rel dev {worst:.2e} <= 1e-09", elapsed, 10.0)


def ac3_spectrum_methods(cases=500):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst, ground_ok = 0.0, True
    methods = list(SpectrumMethod)
    for _ in range(cases):
        p = random_params(rng, 8)
        n_max = int(rng.integers(1, 201))
        spectra = [energy_spectrum(p, n_max, m).energies for m in methods]
        ground_ok &= all(e[0] == 0 for e in spectra)
        for i in range(len(spectra)):
            for j in range(i + 1, len(spectra)):
                worst = max(worst, spectrum_deviation(spectra[i], spectra[j]))
    elapsed = time.perf_counter() - t0
    return _report("AC3", "spectrum method equivalence", worst <= 1e-10 and ground_ok,
                   f"{cases} cases, max rel dev {worst:.2e} <= 1e-10, E_0 == 0: {ground_ok}",
                   elapsed, 5.0)


def ac4_algebra_relations(cases=60):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst, windows = 0.0, 0
    while windows < cases:
        p = random_params(rng, 5, positive=True)
        if p.n0 < 1:
            continue
        depth = int(rng.integers(2, min(64, p.k * p.n0 + 1) + 1))
        w = make_window(p.k, depth, p.n0, Convention.DESCENDING)
        F = structure_as_fn(p, w, lowest_weight=True)
        rep = check_algebra(w, F, 1e-10)
        worst = max(worst, max(rep.residuals.values()))
        windows += 1

    # negative control: break one creation amplitude
    p = SipParams.compatible(3, [1.0, 2.0, 1.5], 0.5, 1.0, 0.4, n0=5)
    w = make_window(3, 12, 5, Convention.DESCENDING)
    F = structure_as_fn(p, w, lowest_weight=True)
    a, adag = build_ladders(w, F)
    bad = adag.entries.copy()
    i, j = np.argwhere(np.abs(bad) > 0)[3]
    bad[i, j] *= 1.01
    control = check_algebra(w, F, 1e-10, ladders=(a, OperatorMatrix(bad, Label.CREATION)))
    caught = not control.passed
    elapsed = time.perf_counter() - t0
    return _report("AC4", "algebra relation residuals", worst <= 1e-10 and caught,
                   f"{windows} windows (D<=64, k<=5), max residual {worst:.2e} <= 1e-10, "
                   f"corruption detected: {caught}", elapsed, 5.0)


def ac5_projectors():
    t0 = time.perf_counter()
    ok_sum = ok_orth = ok_tk = True
    tk_float = 0.0
    for k in range(1, 7):
        for w in (make_window(k, 5 * k + 3),
                  make_window(k, 4 * k, 7, Convention.DESCENDING)):
            I = np.eye(w.depth)
            Ps = [build_projector(w, s).entries for s in range(k)]
            ok_sum &= np.array_equal(sum(Ps), I)
            for s in range(k):
                for t in range(k):
                    target = Ps[s] if s == t else np.zeros_like(Ps[s])
                    ok_orth &= np.array_equal(Ps[s] @ Ps[t], target)
            # exact in the phase exponent; the float matrix power is reported alongside
            ok_tk &= bool(np.all((k * grading_phases(w)) % k == 0))
            T = build_grading(w).entries
            tk_float = max(tk_float, float(np.max(np.abs(np.linalg.matrix_power(T, k) - I))))
    w = make_window(2, 10, 6, Convention.DESCENDING)
    klein = np.diag((-1.0) ** (2 * w.nu))
    I = np.eye(w.depth)
    ok_klein = (np.array_equal(build_projector(w, 0).entries, 0.5 * (I + klein))
                and np.array_equal(build_projector(w, 1).entries, 0.5 * (I - klein)))
    elapsed = time.perf_counter() - t0
    ok = ok_sum and ok_orth and ok_tk and ok_klein and tk_float <= 1e-14
    return _report("AC5", "projector suite", ok,
                   f"sum=I {ok_sum}, PiPi=delta Pi {ok_orth}, T^k=I exponent-exact {ok_tk} "
                   f"(float {tk_float:.1e}), k=2 Klein match {ok_klein}", elapsed, 1.0)


CASES = [
    (Harmonic(2.0), Grid(-8.0, 8.0, 2000), 1e-3, [0, 2, 4]),
    (PoschlTellerII(3.0), Grid(-12.0, 12.0, 3000), 1e-2, [0, 5, 8]),
    (PoschlTellerI(1.0), Grid(-math.pi / 2 + 0.02, math.pi / 2 - 0.02, 3000), 2e-2, [0, 3, 8]),
]


def ac6_numeric_cross_validation():
    t0 = time.perf_counter()
    parts, ok = [], True
    for fam, grid, tol, expected in CASES:
        _, _, vm, _ = sample_family(fam, grid)
        numeric = eigensolve(vm, 3)
        algebraic = energy_spectrum(family_params(fam), 3)
        cmp = compare_spectra(numeric, algebraic, tol)
        levels_ok = [c.n for c in cmp.compared] == [0, 1, 2]
        match = float(np.max(np.abs(numeric.eigenvalues - expected))) <= tol
        excl = [e["n"] for e in cmp.excluded if e["reason"] == "continuum_edge"]
        if isinstance(fam, PoschlTellerII):
            levels_ok &= excl == [3]
        partners = verify_family_partners(fam, grid, 2 if isinstance(fam, PoschlTellerII) else 3, tol)
        good = cmp.passed and levels_ok and match and partners.passed
        ok &= good
        parts.append(f"{fam.tag} dev {cmp.max_difference:.1e} <= {tol:g}"
                     + (f" excl n={excl}" if excl else "")
                     + f" partners {max(partners.differences):.1e}")
    elapsed = time.perf_counter() - t0
    return _report("AC6", "numeric cross-validation", ok, "; ".join(parts), elapsed, 30.0)


def ac7_cyclic_reduction():
    t0 = time.perf_counter()
    # delta = 0, omega = (1, 2, 3), C = sigma_0/omega_0 + a0 = 1
    p = SipParams(3, (1, 2, 3), (1, 2, 3), 0, 0)
    expected = [0, 1, 3, 6, 7, 9, 12]
    got = {m.value: list(energy_spectrum(p, 6, m).energies) for m in SpectrumMethod}
    exact = all(all(isinstance(e, (int, Fraction)) for e in es) for es in got.values())
    ok = exact and all(es == expected for es in got.values())
    elapsed = time.perf_counter() - t0
    return _report("AC7", "cyclic reduction", ok,
                   f"E = {[int(e) for e in got['unified']]}, rational arithmetic {exact}",
                   elapsed, 1.0)


ALL = [ac1_golden_tables, ac2_structure_oracle, ac3_spectrum_methods, ac4_algebra_relations,
       ac5_projectors, ac6_numeric_cross_validation, ac7_cyclic_reduction]


def _gate(fn, capsys):
    with capsys.disabled():
        print()
        ok, line = fn()
    assert ok, line


def test_ac1_golden_tables(capsys):
    _gate(ac1_golden_tables, capsys)


def test_ac2_structure_oracle(capsys):
    _gate(ac2_structure_oracle, capsys)


def test_ac3_spectrum_methods(capsys):
    _gate(ac3_spectrum_methods, capsys)


def test_ac4_algebra_relations(capsys):
    _gate(ac4_algebra_relations, capsys)


def test_ac5_projectors(capsys):
    _gate(ac5_projectors, capsys)


def test_ac6_numeric_cross_validation(capsys):
    _gate(ac6_numeric_cross_validation, capsys)


def test_ac7_cyclic_reduction(capsys):
    _gate(ac7_cyclic_reduction, capsys)


if __name__ == "__main__":
    results = [fn()[0] for fn in ALL]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
