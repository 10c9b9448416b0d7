"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
input. All reports are JSON with a ``schema_version`` field unless
``--output csv|table`` is requested.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import oscillator_algebra as oa
from . import schrodinger_check as sc
from . import shape_invariance as si
from .errors import ConfigParse, ZkoscError
from .graded_fock import Convention, make_window

SCHEMA_VERSION = "1"
TOL_ENV = "ZKOSC_TOL"

DEFAULT_TOLS = {
    "spectrum": 1e-10,
    "verify-algebra": 1e-10,
    "verify-structure": 1e-9,
    "verify-chain": 1e-8,
    "schrodinger": 1e-2,
    "matrices": 1e-10,
}


# -- output -----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats fixed to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)) or hasattr(obj, "denominator"):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[_fmt_cell(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines)


def _fmt_cell(c) -> str:
    if isinstance(c, float):
        return format(c, ".10g")
    return str(c)


# -- inputs -----------------------------------------------------------------

def _read_json(path: str | None) -> dict:
    if path is None:
        raise ConfigParse("--params is required for this command")
    p = Path(path)
    if not p.exists():
        raise ConfigParse(f"no such file: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigParse(f"{path}: top level must be an object")
    return doc


def params_from_doc(doc: dict) -> tuple[si.SipParams, int | None]:
    """Parse the parameter schema; returns the params and the optional n_max."""
    try:
        k = doc["k"]
        sigma = doc["sigma"]
        omega = doc["omega"]
        a0 = doc["a0"]
        delta = doc["delta"]
    except KeyError as exc:
        raise ConfigParse(f"parameter file missing field {exc}") from exc
    if not isinstance(k, int) or k < 1:
        raise ConfigParse("k must be a positive integer")
    if not isinstance(sigma, list) or not isinstance(omega, list):
        raise ConfigParse("sigma and omega must be arrays")
    n0 = doc.get("n0", 0)
    if not isinstance(n0, int) or n0 < 0:
        raise ConfigParse("n0 must be a nonnegative integer")
    n_max = doc.get("n_max")
    if n_max is not None and (not isinstance(n_max, int) or n_max < 0):
        raise ConfigParse("n_max must be a nonnegative integer")
    try:
        params = si.SipParams(k, tuple(float(x) for x in sigma), tuple(float(x) for x in omega),
                              float(a0), float(delta), n0, float(doc.get("c0", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigParse(str(exc)) from exc
    return si.validate(params), n_max


def _tolerance(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise ConfigParse(f"{TOL_ENV}={env!r} is not a number") from exc
    return DEFAULT_TOLS[args.command]


# -- commands ---------------------------------------------------------------

def cmd_spectrum(args, tol):
    params, n_max = params_from_doc(_read_json(args.params))
    n_max = args.n_max if args.n_max is not None else (n_max if n_max is not None else 10)
    spectra = {m: si.energy_spectrum(params, n_max, m).energies for m in si.SpectrumMethod}
    u, b, d = (spectra[m] for m in si.SpectrumMethod)
    dev = max(si.spectrum_deviation(u, b), si.spectrum_deviation(u, d), si.spectrum_deviation(b, d))
    ok = dev <= tol
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectrum",
        "params": params.to_dict(),
        "n_max": n_max,
        "energies": {m.value: list(spectra[m]) for m in si.SpectrumMethod},
        "method_deviation": dev,
        "tolerance": tol,
        "cyclic": si.is_cyclic(params),
        "remainder_cycle": si.remainder_cycle(params),
        "monotone": si.energy_spectrum(params, n_max).monotone,
        "pass": ok,
    }
    if args.output == "csv":
        buf = io.StringIO()
        buf.write("n,E_unified,E_blocks,E_structdiff,max_dev\n")
        for n in range(n_max + 1):
            row = [float(u[n]), float(b[n]), float(d[n])]
            buf.write(f"{n}," + ",".join(_fmt_float(x) for x in row)
                      + f",{_fmt_float(max(row) - min(row))}\n")
        return buf.getvalue().rstrip("\n"), ok
    if args.output == "table":
        rows = [[n, float(u[n]), float(b[n]), float(d[n])] for n in range(n_max + 1)]
        text = _table(rows, ["n", "E_unified", "E_blocks", "E_structdiff"])
        return text + f"\nmethod deviation {dev:.3e} (tol {tol:g})", ok
    return report, ok


def _window_for(params: si.SipParams, depth: int | None):
    limit = params.k * params.n0 + 1
    if limit < 2:
        raise ConfigParse("n0 must be at least 1 to build a descending Fock window")
    depth = depth if depth is not None else min(16, limit)
    return make_window(params.k, depth, params.n0, Convention.DESCENDING)


def cmd_verify_algebra(args, tol):
    if args.params:
        params, _ = params_from_doc(_read_json(args.params))
        window = _window_for(params, args.depth)
        F = si.structure_as_fn(params, window, lowest_weight=True)
    else:
        window = make_window(args.k, args.depth or 16, 0, Convention.ASCENDING)
        F = oa.undeformed()
    rep = oa.check_algebra(window, F, tol)
    doc = {"schema_version": SCHEMA_VERSION, "command": "verify-algebra",
           "window": {"k": window.k, "depth": window.depth, "n0": window.n0,
                      "convention": window.convention.value}}
    doc.update(rep.to_dict())
    if args.output == "table":
        rows = [[name, r, "ok" if r <= tol else "FAIL"] for name, r in rep.residuals.items()]
        return _table(rows, ["relation", "residual", "status"]), rep.passed
    return doc, rep.passed


def structure_sweep(seed: int, cases: int, k_max: int, n_max: int) -> dict:
    """Closed-form versus recursive structure values over random parameters."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_case = None
    for i in range(cases):
        params = si.random_params(rng, k_max)
        closed = si.structure_table(params, n_max).values
        rec = si.structure_recursive(params, n_max).values
        for n, (x, y) in enumerate(zip(closed, rec)):
            dev = abs(x - y) / max(1.0, abs(y))
            if dev > worst:
                worst, worst_case = dev, {"case": i, "n": n, "k": params.k}
    return {"cases": cases, "k_max": k_max, "n_max": n_max, "seed": seed,
            "max_deviation": worst, "worst": worst_case}


def cmd_verify_structure(args, tol):
    sweep = structure_sweep(args.seed, args.cases, args.k_max,
                            args.n_max if args.n_max is not None else 200)
    ok = sweep["max_deviation"] <= tol
    doc = {"schema_version": SCHEMA_VERSION, "command": "verify-structure", **sweep,
           "tolerance": tol, "pass": ok}
    return doc, ok


def chain_from_doc(doc: dict) -> sc.ChainSpec:
    """Chain schema: ``grid`` {x_min, x_max, points}, ``W`` list, ``W_shift``,
    ``remainders``. Each superpotential is a sympy expression in ``x`` (exact
    derivative) or an array of samples (numeric derivative)."""
    import sympy

    try:
        g = doc["grid"]
        grid = sc.Grid(float(g["x_min"]), float(g["x_max"]), int(g["points"]))
        Ws = doc["W"]
        W_shift = doc["W_shift"]
        R = [float(r) for r in doc["remainders"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParse(f"bad chain document: {exc}") from exc
    x = sympy.Symbol("x")
    xs = grid.x

    def sample(entry):
        if isinstance(entry, str):
            try:
                expr = sympy.sympify(entry, locals={"x": x})
            except (sympy.SympifyError, SyntaxError) as exc:
                raise ConfigParse(f"cannot parse {entry!r}") from exc
            f = sympy.lambdify(x, expr, "numpy")
            df = sympy.lambdify(x, sympy.diff(expr, x), "numpy")
            return np.broadcast_to(f(xs), xs.shape).astype(float), \
                np.broadcast_to(df(xs), xs.shape).astype(float)
        return np.asarray(entry, dtype=float), None

    samples = [sample(w) for w in Ws]
    shift, dshift = sample(W_shift)
    dW = [d for _, d in samples]
    analytic = all(d is not None for d in dW) and dshift is not None
    return sc.ChainSpec(grid, [w for w, _ in samples], R, shift,
                        dW if analytic else None, dshift if analytic else None)


def cmd_verify_chain(args, tol):
    chain = chain_from_doc(_read_json(args.params))
    rep = sc.verify_chain(chain, tol)
    doc = {"schema_version": SCHEMA_VERSION, "command": "verify-chain", "k": chain.k}
    doc.update(rep.to_dict())
    return doc, rep.passed


def cmd_schrodinger(args, tol):
    family = sc.family_from_name(args.family, args.strength)
    grid = sc.Grid.parse(args.grid) if args.grid else _default_grid(family)
    count = args.count
    if args.params:
        params, _ = params_from_doc(_read_json(args.params))
    else:
        params = sc.family_params(family)
    n_max = args.n_max if args.n_max is not None else count
    algebraic = si.energy_spectrum(params, n_max)
    _, _, vm, _ = sc.sample_family(family, grid)
    numeric = sc.eigensolve(vm, count)
    cmp = sc.compare_spectra(numeric, algebraic, tol)
    partners = sc.verify_family_partners(family, grid, max(1, count - 1), tol)
    ok = cmp.passed and partners.passed
    doc = {"schema_version": SCHEMA_VERSION, "command": "schrodinger", "family": family.tag,
           "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "points": grid.points},
           "numeric": numeric.eigenvalues.tolist(), "algebraic": list(algebraic.energies),
           "comparison": cmp.to_dict(), "partners": partners.to_dict(), "pass": ok}
    if args.output == "table":
        rows = [[c.n, c.numeric, c.algebraic, c.difference] for c in cmp.compared]
        text = _table(rows, ["n", "numeric", "algebraic", "diff"])
        for ex in cmp.excluded:
            text += f"\nexcluded n={ex['n']} E={ex['algebraic']:g} ({ex['reason']})"
        return text, ok
    return doc, ok


def _default_grid(family) -> sc.Grid:
    if isinstance(family, sc.Harmonic):
        return sc.Grid(-8.0, 8.0, 2000)
    if isinstance(family, sc.PoschlTellerII):
        return sc.Grid(-12.0, 12.0, 3000)
    return sc.Grid(-math.pi / 2 + 0.02, math.pi / 2 - 0.02, 3000)


def _matrix_doc(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def cmd_matrices(args, tol):
    if args.params:
        params, _ = params_from_doc(_read_json(args.params))
        window = _window_for(params, args.depth)
        F = si.structure_as_fn(params, window, lowest_weight=True)
    else:
        window = make_window(args.k, args.depth or 8, 0, Convention.ASCENDING)
        F = oa.undeformed()
    ops = oa.build_all(window, F)
    doc = {"schema_version": SCHEMA_VERSION, "command": "matrices",
           "window": {"k": window.k, "depth": window.depth, "n0": window.n0,
                      "convention": window.convention.value,
                      "nu": [float(v) for v in window.nus],
                      "grades": window.grades.tolist()},
           "operators": {name: _matrix_doc(op.entries) for name, op in ops.items()}}
    return doc, True


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify-algebra": cmd_verify_algebra,
    "verify-structure": cmd_verify_structure,
    "verify-chain": cmd_verify_chain,
    "schrodinger": cmd_schrodinger,
    "matrices": cmd_matrices,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zkosc", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="JSON parameter (or chain) file")
    common.add_argument("--output", choices=["json", "csv", "table"], default="json")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n-max", type=int, default=None)
    common.add_argument("--depth", type=int, default=None, help="Fock window depth")
    common.add_argument("--grid", default=None, help="xmin,xmax,M")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="algebraic spectrum by three methods")
    p = sub.add_parser("verify-algebra", parents=[common], help="oscillator relation residuals")
    p.add_argument("--k", type=int, default=1, help="grading order when no --params given")
    p = sub.add_parser("verify-structure", parents=[common], help="closed vs recursive sweep")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--k-max", type=int, default=5)
    sub.add_parser("verify-chain", parents=[common], help="k-step chain residuals")
    p = sub.add_parser("schrodinger", parents=[common], help="numeric vs algebraic spectrum")
    p.add_argument("--family", default="pt2", help="harmonic | pt1 | pt2")
    p.add_argument("--strength", type=float, default=3.0, help="omega or A")
    p.add_argument("--count", type=int, default=3)
    p = sub.add_parser("matrices", parents=[common], help="dump operator matrices")
    p.add_argument("--k", type=int, default=1, help="grading order when no --params given")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        tol = _tolerance(args)
        result, ok = COMMANDS[args.command](args, tol)
    except (ZkoscError, ValueError, TypeError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    if not isinstance(result, str) and args.output != "json":
        result = _flat(result, args.output)
    out.write((result if isinstance(result, str) else dumps(result)) + "\n")
    return 0 if ok else 1


def _flat(doc: dict, style: str) -> str:
    """Fallback csv/table rendering: one ``field, value`` row per leaf."""
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for key, sub in v.items():
                walk(f"{prefix}.{key}" if prefix else str(key), sub)
        elif isinstance(v, (list, tuple)) and any(isinstance(x, (dict, list)) for x in v):
            for i, sub in enumerate(v):
                walk(f"{prefix}[{i}]", sub)
        else:
            rows.append([prefix, v if not isinstance(v, (list, tuple)) else
                         " ".join(_fmt_cell(x) for x in v)])

    walk("", doc)
    if style == "csv":
        return "\n".join(["field,value"] + [f"{f},{_fmt_cell(v)}" for f, v in rows])
    return _table(rows, ["field", "value"])


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
