"""Translational k-step shape invariance with remainders linear in the parameter.

Per-step remainders are ``R_s(a_m) = sigma_s + a_m * omega_s`` with
``a_m = a0 + m*delta``. When ``sigma_s/omega_s - sigma_0/omega_0 = s*delta/k``
they collapse onto one unified remainder over the fractional tower
``nu = n0 - n/k``::

    R(n) = (C + n*delta/k) * omega_{n mod k},    C = sigma_0/omega_0 + a0

and the structure function ``G(n) = F(alpha(n0 - n/k))`` obeys
``G(n+1) - G(n) = -R(n)``. Every function here accepts ``Fraction`` inputs
and then computes exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import IncompatibleRemainders, NegativeStructure, ZeroOmega
from .graded_fock import FockWindow
from .oscillator_algebra import StructureFn

COMPAT_RTOL = 1e-12


@dataclass(frozen=True)
class SipParams:
    k: int
    sigma: tuple
    omega: tuple
    a0: float
    delta: float
    n0: int = 0
    c0: float = 0

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "omega", tuple(self.omega))
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if len(self.sigma) != self.k or len(self.omega) != self.k:
            raise IncompatibleRemainders(
                f"sigma and omega need exactly k={self.k} entries, "
                f"got {len(self.sigma)} and {len(self.omega)}"
            )
        if self.n0 < 0:
            raise ValueError("n0 must be nonnegative")

    @classmethod
    def compatible(cls, k, omega, ratio0, a0, delta, n0=0, c0=0):
        """Build params whose sigma satisfies the compatibility relation.

        ``ratio0`` is ``sigma_0/omega_0``.
        """
        sigma = [w * (ratio0 + s * delta / k) for s, w in enumerate(omega)]
        return cls(k, tuple(sigma), tuple(omega), a0, delta, n0, c0)

    @property
    def C(self):
        return _div(self.sigma[0], self.omega[0]) + self.a0

    @property
    def omega_total(self):
        return sum(self.omega)

    def with_c0(self, c0) -> SipParams:
        return SipParams(self.k, self.sigma, self.omega, self.a0, self.delta, self.n0, c0)

    def to_dict(self) -> dict:
        return {
            "k": self.k, "sigma": [float(x) for x in self.sigma],
            "omega": [float(x) for x in self.omega], "a0": float(self.a0),
            "delta": float(self.delta), "n0": self.n0, "c0": float(self.c0),
        }


def validate(params: SipParams) -> SipParams:
    """Check nonzero omegas and the compatibility relation; returns ``params``."""
    for s, w in enumerate(params.omega):
        if w == 0:
            raise ZeroOmega(f"omega_{s} is zero")
    base = _div(params.sigma[0], params.omega[0])
    for s in range(1, params.k):
        lhs = _div(params.sigma[s], params.omega[s])
        rhs = base + Fraction(s, params.k) * params.delta \
            if isinstance(params.delta, Fraction) else base + s * params.delta / params.k
        if not math.isclose(lhs, rhs, rel_tol=COMPAT_RTOL, abs_tol=COMPAT_RTOL):
            raise IncompatibleRemainders(
                f"sigma_{s}/omega_{s} = {float(lhs):.15g} but compatibility needs "
                f"{float(rhs):.15g}", s=s,
            )
    if not math.isfinite(float(params.C)):
        raise IncompatibleRemainders("derived constant C is not finite")
    return params


def _div(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    return a / b


def _frac_k(x, k):
    # x/k keeping exactness for rationals
    return x / Fraction(k) if isinstance(x, (Fraction, int)) else x / k


def remainder_step(params: SipParams, s: int, m: int):
    """``R_s(a_m) = sigma_s + (a0 + m*delta) * omega_s``."""
    return params.sigma[s] + (params.a0 + m * params.delta) * params.omega[s]


def unified_remainder(params: SipParams, n: int):
    if n < 0:
        raise ValueError("level index must be nonnegative")
    k = params.k
    return (params.C + _frac_k(n * params.delta, k)) * params.omega[n % k]


@dataclass(frozen=True)
class CoeffSet:
    c: tuple
    d: tuple


@lru_cache(maxsize=None)
def coefficient_weights(k: int) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[tuple[Fraction, ...], ...]]:
    """Exact rational weights: ``c_s = sum_j cw[s][j] omega_j`` (likewise ``d``)."""
    cw = [[Fraction(0)] * k for _ in range(k)]
    dw = [[Fraction(0)] * k for _ in range(k)]
    for s in range(k):
        for t in range(k):
            j = (s + t) % k
            cw[s][j] += Fraction(k - 1 - 2 * t, 2 * k)
            dw[s][j] += Fraction(cycle_poly(t, k), 2 * k * k)
    return tuple(map(tuple, cw)), tuple(map(tuple, dw))


def cycle_poly(t, k):
    """``D(t) = t^2 - (k-1)(t-1)``, the weight polynomial of the d-coefficients."""
    return t * t - (k - 1) * (t - 1)


def _combine(weights, omega):
    exact = all(isinstance(w, (int, Fraction)) for w in omega)
    out = []
    for row in weights:
        if exact:
            out.append(sum((wt * w for wt, w in zip(row, omega)), Fraction(0)))
        else:
            out.append(float(sum(float(wt) * w for wt, w in zip(row, omega))))
    return tuple(out)


@lru_cache(maxsize=4096)
def _coefficients(k, omega):
    cw, dw = coefficient_weights(k)
    return CoeffSet(_combine(cw, omega), _combine(dw, omega))


def coefficients(params: SipParams) -> CoeffSet:
    return _coefficients(params.k, params.omega)


def _structure_core(params: SipParams, n: int):
    """Closed-form structure value without the additive constant C_0."""
    if n < 0:
        raise ValueError("level index must be nonnegative")
    k, C, delta = params.k, params.C, params.delta
    co = coefficients(params)
    s = n % k
    two_k = 2 * k
    smooth = _frac_k(params.omega_total, k) * (C + _frac_k((n - 1) * delta, two_k)) * n
    graded = (C + _frac_k((2 * n - 1) * delta, two_k)) * co.c[s] - delta * co.d[s]
    return graded - smooth


def structure_closed(params: SipParams, n: int):
    """``F(alpha(n0 - n/k))`` from the closed form."""
    return params.c0 + _structure_core(params, n)


class TableMethod(enum.Enum):
    CLOSED = "closed"
    RECURSIVE = "recursive"


@dataclass(frozen=True)
class StructureTable:
    params: SipParams
    values: tuple
    method: TableMethod
    omega_total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "omega_total", self.params.omega_total)

    @property
    def positive_definite(self) -> bool:
        return all(v > 0 for v in self.values)


def structure_table(params: SipParams, n_max: int) -> StructureTable:
    validate(params)
    vals = tuple(structure_closed(params, n) for n in range(n_max + 1))
    return StructureTable(params, vals, TableMethod.CLOSED)


def structure_recursive(params: SipParams, n_max: int) -> StructureTable:
    """Tabulate by stepping ``G(n+1) = G(n) - R(n)`` from the closed-form seed."""
    validate(params)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    g = structure_closed(params, 0)
    vals = [g]
    for n in range(n_max):
        g = g - unified_remainder(params, n)
        vals.append(g)
    return StructureTable(params, tuple(vals), TableMethod.RECURSIVE)


def choose_c0(params: SipParams, n_max: int, margin: float) -> float:
    """Smallest nonnegative C_0 making levels ``1..n_max`` exceed ``margin``."""
    validate(params)
    if n_max < 1:
        return 0.0
    low = min(_structure_core(params, n) for n in range(1, n_max + 1))
    return max(0.0, float(margin - low))


class SpectrumMethod(enum.Enum):
    UNIFIED_SUM = "unified"
    BLOCKS = "blocks"
    STRUCTURE_DIFF = "structdiff"


@dataclass(frozen=True)
class SpectrumReport:
    energies: tuple
    method: SpectrumMethod
    params: SipParams
    cycle: tuple | None = None  # remainder arrangement when delta == 0

    @property
    def monotone(self) -> bool:
        return all(b >= a for a, b in zip(self.energies, self.energies[1:]))


def _spectrum_unified(params, n_max):
    out = [0 * params.C]
    acc = out[0]
    for n in range(n_max):
        acc = acc + unified_remainder(params, n)
        out.append(acc)
    return out


def _spectrum_blocks(params, n_max):
    # E_{nk+s} = sum_{m<n} sum_t R_t(a_m) + sum_{t<s} R_t(a_n)
    k = params.k
    out = []
    completed = 0 * params.C
    m = 0
    while len(out) <= n_max:
        partial = 0 * params.C
        for t in range(k):
            if len(out) > n_max:
                break
            out.append(completed + partial)
            partial = partial + remainder_step(params, t, m)
        completed = completed + sum((remainder_step(params, t, m) for t in range(k)), 0 * params.C)
        m += 1
    return out


def _spectrum_structdiff(params, n_max):
    top = _structure_core(params, 0)
    return [top - _structure_core(params, n) for n in range(n_max + 1)]


def is_cyclic(params: SipParams) -> bool:
    return params.delta == 0


def remainder_cycle(params: SipParams) -> tuple | None:
    """Period-k remainder arrangement ``(omega_0, ..., omega_{k-1})`` for delta = 0."""
    return tuple(params.omega) if is_cyclic(params) else None


def energy_spectrum(params: SipParams, n_max: int,
                    method: SpectrumMethod | str = SpectrumMethod.UNIFIED_SUM) -> SpectrumReport:
    validate(params)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    method = SpectrumMethod(method)
    fn = {
        SpectrumMethod.UNIFIED_SUM: _spectrum_unified,
        SpectrumMethod.BLOCKS: _spectrum_blocks,
        SpectrumMethod.STRUCTURE_DIFF: _spectrum_structdiff,
    }[method]
    return SpectrumReport(tuple(fn(params, n_max)), method, params, remainder_cycle(params))


def spectrum_deviation(a: Sequence, b: Sequence) -> float:
    """Max level difference scaled by ``max(1, max|E|)``."""
    scale = max([1.0] + [abs(float(x)) for x in a] + [abs(float(x)) for x in b])
    return max((abs(float(x) - float(y)) for x, y in zip(a, b)), default=0.0) / scale


def structure_as_fn(params: SipParams, window: FockWindow | None = None,
                    lowest_weight: bool = False) -> StructureFn:
    """Structure function over number eigenvalues ``nu = n0 - n/k``.

    With ``lowest_weight`` the values are shifted so the lowest-``nu`` state
    of ``window`` has ``F = 0``. The graded decomposition is indexed by Fock
    grade: ``g[fock_grade]`` carries the tower term of ``s = (-fock_grade) mod k``.
    """
    validate(params)
    k, n0 = params.k, params.n0
    if lowest_weight and window is None:
        raise ValueError("lowest_weight pinning needs a window")
    shift = 0.0
    if lowest_weight:
        shift = float(structure_closed(params, _level(window.nus[window.bottom_index], n0, k)))

    co = coefficients(params)
    C, delta, c0 = params.C, params.delta, params.c0

    def F(nu):
        return float(structure_closed(params, _level(nu, n0, k))) - shift

    def f(nu):
        n = _level(nu, n0, k)
        return float(c0 - params.omega_total / k * (C + (n - 1) * delta / (2 * k)) * n) - shift

    def make_g(s):
        def g(nu):
            n = _level(nu, n0, k)
            return float((C + (2 * n - 1) * delta / (2 * k)) * co.c[s] - delta * co.d[s])
        return g

    gs = [make_g((-fg) % k) for fg in range(k)]
    sfn = StructureFn(F, (f, gs))
    if window is not None:
        vals = sfn.on_window(window)
        if (vals < 0).any():
            j = int(np.flatnonzero(vals < 0)[0])
            raise NegativeStructure(
                f"structure function negative ({vals[j]:.6g}) at nu={window.nus[j]}; "
                "raise c0 (see choose_c0)"
            )
    return sfn


def _level(nu, n0, k) -> int:
    n = k * (Fraction(n0) - Fraction(nu))
    if n.denominator != 1 or n < 0:
        raise ValueError(f"nu={nu} is not on the descending tower from n0={n0}")
    return int(n)


def random_params(rng: np.random.Generator, k_max: int = 8, *, positive: bool = False) -> SipParams:
    """Random compatible parameter set.

    ``positive`` restricts to remainders that are positive on every level
    (omega > 0, C > 0, delta >= 0), which keeps ground-pinned structure
    functions nonnegative.
    """
    k = int(rng.integers(1, k_max + 1))
    if positive:
        omega = rng.uniform(0.1, 5.0, size=k)
        delta = float(rng.uniform(0.0, 2.0))
        C = float(rng.uniform(0.2, 3.0))
    else:
        omega = rng.uniform(0.1, 5.0, size=k) * rng.choice([-1.0, 1.0], size=k)
        delta = float(rng.uniform(-2.0, 2.0))
        C = float(rng.uniform(-3.0, 3.0))
    a0 = float(rng.uniform(-3.0, 3.0))
    n0 = int(rng.integers(0, 60))
    c0 = float(rng.uniform(-5.0, 5.0))
    return SipParams.compatible(k, [float(w) for w in omega], C - a0, a0, delta, n0, c0)
