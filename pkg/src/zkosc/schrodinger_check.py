"""Finite-difference cross-checks of the algebraic spectra.

Units are hbar = 2m = 1 so ``H = -d^2/dx^2 + V`` and ``V(-/+) = W^2 -/+ W'``.

The Laplacian is the three-point stencil with Dirichlet walls. By default
the walls sit one spacing beyond each end of the grid (the usual uniform
scheme). A sampled potential may instead declare its walls, e.g. at the
edges of its domain of regularity; the end nodes then use the non-uniform
three-point stencil, symmetrised by the diagonal node weights so the matrix
stays symmetric tridiagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceFailure, CountTooLarge, DomainViolation, EmptyInput, GridMismatch
from .shape_invariance import SipParams, SpectrumReport

CEILING_MARGIN = 0.05
PT1_MIN_INSET = 0.005 * math.pi


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if self.points < 16:
            raise ValueError(f"grid needs at least 16 points, got {self.points}")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    @classmethod
    def parse(cls, text: str) -> Grid:
        xmin, xmax, m = text.split(",")
        return cls(float(xmin), float(xmax), int(m))


@dataclass(frozen=True)
class SampledPotential:
    grid: Grid
    values: np.ndarray
    family_tag: str = "custom"
    walls: tuple[float, float] | None = None
    ceiling: float | None = None  # lim_{|x|->inf} V when finite

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.points,):
            raise GridMismatch(f"{vals.shape[0] if vals.ndim else 0} values for {self.grid.points} grid points")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential has non-finite samples")
        if self.walls is not None:
            left, right = self.walls
            if not (left < self.grid.x_min and right > self.grid.x_max):
                raise DomainViolation("walls must lie strictly outside the grid")

    @property
    def wall_gaps(self) -> tuple[float, float]:
        if self.walls is None:
            return self.grid.h, self.grid.h
        return self.grid.x_min - self.walls[0], self.walls[1] - self.grid.x_max


@dataclass(frozen=True)
class Harmonic:
    omega: float

    @property
    def tag(self):
        return f"harmonic(omega={self.omega:g})"


@dataclass(frozen=True)
class PoschlTellerI:
    A: float

    @property
    def tag(self):
        return f"poschl_teller_I(A={self.A:g})"


@dataclass(frozen=True)
class PoschlTellerII:
    A: float

    @property
    def tag(self):
        return f"poschl_teller_II(A={self.A:g})"


Family = Harmonic | PoschlTellerI | PoschlTellerII


def family_from_name(name: str, strength: float) -> Family:
    key = name.lower().replace("-", "").replace("_", "")
    table = {"harmonic": Harmonic, "pt1": PoschlTellerI, "poschltelleri": PoschlTellerI,
             "pt2": PoschlTellerII, "poschltellerii": PoschlTellerII}
    if key not in table:
        raise ValueError(f"unknown family {name!r}")
    return table[key](strength)


def family_params(family: Family) -> SipParams:
    """One-step remainder parameters reproducing the family's spectrum."""
    if isinstance(family, Harmonic):
        return SipParams(1, (0.0,), (float(family.omega),), 1.0, 0.0)
    if isinstance(family, PoschlTellerI):
        # R(a) = 2a + 1, a -> a + 1
        return SipParams(1, (1.0,), (2.0,), float(family.A), 1.0)
    # R(a) = 2a - 1, a -> a - 1
    return SipParams(1, (-1.0,), (2.0,), float(family.A), -1.0)


def family_ceiling(family: Family) -> float | None:
    if isinstance(family, PoschlTellerII):
        return float(family.A) ** 2
    return None


def sample_family(family: Family, grid: Grid):
    """Return ``(W, W', V-, V+)`` on ``grid`` using analytic derivatives."""
    x = grid.x
    walls = None
    if isinstance(family, Harmonic):
        if family.omega <= 0:
            raise ValueError("omega must be positive")
        W = 0.5 * family.omega * x
        dW = np.full_like(x, 0.5 * family.omega)
    elif isinstance(family, PoschlTellerI):
        if family.A <= 0:
            raise ValueError("A must be positive")
        half = math.pi / 2
        if grid.x_min <= -half + PT1_MIN_INSET or grid.x_max >= half - PT1_MIN_INSET:
            raise DomainViolation(
                f"Poschl-Teller I grid must stay {PT1_MIN_INSET:.4f} inside (-pi/2, pi/2)"
            )
        W = family.A * np.tan(x)
        dW = family.A / np.cos(x) ** 2
        walls = (-half, half)
    elif isinstance(family, PoschlTellerII):
        if family.A <= 0:
            raise ValueError("A must be positive")
        W = family.A * np.tanh(x)
        dW = family.A / np.cosh(x) ** 2
    else:
        raise TypeError(f"unsupported family {family!r}")
    ceiling = family_ceiling(family)
    vm = SampledPotential(grid, W * W - dW, family.tag + ":V-", walls, ceiling)
    vp = SampledPotential(grid, W * W + dW, family.tag + ":V+", walls, ceiling)
    return W, dW, vm, vp


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    grid: Grid
    boundary: str = "dirichlet"
    ceiling: float | None = None

    @property
    def count(self) -> int:
        return len(self.eigenvalues)


def hamiltonian_bands(V: SampledPotential) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric tridiagonal Hamiltonian."""
    M, h = V.grid.points, V.grid.h
    left = np.full(M, h)
    right = np.full(M, h)
    left[0], right[-1] = V.wall_gaps
    weight = 0.5 * (left + right)
    diag = (1.0 / left + 1.0 / right) / weight + V.values
    off = -1.0 / (h * np.sqrt(weight[:-1] * weight[1:]))
    return diag, off


def eigensolve(V: SampledPotential, count: int) -> EigenResult:
    """Lowest ``count`` Dirichlet eigenvalues of the discretised Hamiltonian."""
    if count < 1:
        raise ValueError("count must be positive")
    if count > V.grid.points // 4:
        raise CountTooLarge(f"count={count} exceeds M/4={V.grid.points // 4}")
    diag, off = hamiltonian_bands(V)
    try:
        vals = eigh_tridiagonal(diag, off, eigvals_only=True,
                                select="i", select_range=(0, count - 1))
    except (LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    vals = np.sort(vals)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceFailure("non-finite eigenvalues")
    return EigenResult(vals, V.grid, "dirichlet", V.ceiling)


@dataclass
class PartnerReport:
    minus: np.ndarray
    plus: np.ndarray
    differences: np.ndarray
    tolerance: float
    mode: str  # "susy" drops the V- ground state, "identity" compares directly

    @property
    def passed(self) -> bool:
        return bool(np.all(np.abs(self.differences) <= self.tolerance))

    def to_dict(self) -> dict:
        return {"mode": self.mode, "minus": self.minus.tolist(), "plus": self.plus.tolist(),
                "differences": self.differences.tolist(), "tolerance": self.tolerance,
                "pass": self.passed}


def verify_partners(W, dW, grid: Grid, count: int, tol: float, *,
                    walls: tuple[float, float] | None = None) -> PartnerReport:
    """Check that V+ reproduces the V- spectrum with its ground level removed."""
    W = np.asarray(W, dtype=float)
    dW = np.asarray(dW, dtype=float)
    vm = SampledPotential(grid, W * W - dW, "V-", walls)
    vp = SampledPotential(grid, W * W + dW, "V+", walls)
    if not np.any(W):
        em = eigensolve(vm, count).eigenvalues
        ep = eigensolve(vp, count).eigenvalues
        return PartnerReport(em, ep, ep - em, tol, "identity")
    em = eigensolve(vm, count + 1).eigenvalues
    ep = eigensolve(vp, count).eigenvalues
    return PartnerReport(em, ep, ep - em[1:], tol, "susy")


def verify_family_partners(family: Family, grid: Grid, count: int, tol: float) -> PartnerReport:
    W, dW, vm, _ = sample_family(family, grid)
    return verify_partners(W, dW, grid, count, tol, walls=vm.walls)


def derivative(values, h: float) -> np.ndarray:
    """Fourth-order finite-difference first derivative (one-sided at the edges)."""
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise GridMismatch("need at least 5 samples for a fourth-order derivative")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


@dataclass
class ChainSpec:
    """k superpotentials ``W_s(x, a0)`` plus ``W_0(x, a1)`` on one grid.

    Missing derivatives are taken numerically.
    """

    grid: Grid
    W: Sequence[np.ndarray]
    remainders: Sequence[float]
    W_shift: np.ndarray
    dW: Sequence[np.ndarray] | None = None
    dW_shift: np.ndarray | None = None

    @property
    def k(self) -> int:
        return len(self.W)


@dataclass
class ChainReport:
    residuals: list[float]
    tolerance: float
    derivative: str

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    def to_dict(self) -> dict:
        return {"residuals": list(self.residuals), "max_residual": self.max_residual,
                "tolerance": self.tolerance, "derivative": self.derivative,
                "pass": self.passed}


def partner_residuals(v_plus: Sequence[np.ndarray], v_minus_next: Sequence[np.ndarray],
                      remainders: Sequence[float]) -> list[float]:
    """``max_x |V+_s - V-_{s+1} - R_s|`` for each link of the chain."""
    return [float(np.max(np.abs(np.asarray(p) - np.asarray(m) - r)))
            for p, m, r in zip(v_plus, v_minus_next, remainders)]


def verify_chain(chain: ChainSpec, tol: float) -> ChainReport:
    M = chain.grid.points
    k = chain.k
    if k < 1:
        raise EmptyInput("chain has no superpotentials")
    if len(chain.remainders) != k:
        raise GridMismatch(f"{len(chain.remainders)} remainders for {k} superpotentials")
    arrays = list(chain.W) + [chain.W_shift]
    if chain.dW is not None:
        arrays += list(chain.dW)
    if chain.dW_shift is not None:
        arrays.append(chain.dW_shift)
    for arr in arrays:
        if np.shape(arr) != (M,):
            raise GridMismatch(f"sampling of shape {np.shape(arr)} on a {M}-point grid")

    h = chain.grid.h
    Ws = [np.asarray(w, dtype=float) for w in chain.W]
    analytic = chain.dW is not None and chain.dW_shift is not None
    dWs = [np.asarray(d, dtype=float) for d in chain.dW] if chain.dW is not None \
        else [derivative(w, h) for w in Ws]
    Wn = np.asarray(chain.W_shift, dtype=float)
    dWn = np.asarray(chain.dW_shift, dtype=float) if chain.dW_shift is not None \
        else derivative(Wn, h)

    nxt_W = Ws[1:] + [Wn]
    nxt_dW = dWs[1:] + [dWn]
    # grouped as (W_s^2 - W_{s+1}^2) + (W_s' + W_{s+1}') so identical terms cancel exactly
    res = [float(np.max(np.abs((w * w - wn * wn) + (d + dn) - r)))
           for w, d, wn, dn, r in zip(Ws, dWs, nxt_W, nxt_dW, chain.remainders)]
    return ChainReport(res, tol, "analytic" if analytic else "fd4")


@dataclass
class LevelComparison:
    n: int
    numeric: float
    algebraic: float
    difference: float
    passed: bool


@dataclass
class ComparisonReport:
    compared: list[LevelComparison]
    excluded: list[dict]
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.compared) and all(c.passed for c in self.compared)

    @property
    def max_difference(self) -> float:
        return max((abs(c.difference) for c in self.compared), default=0.0)

    def to_dict(self) -> dict:
        return {
            "compared": [c.__dict__ for c in self.compared],
            "excluded": self.excluded,
            "max_difference": self.max_difference,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def compare_spectra(numeric: EigenResult, algebraic: SpectrumReport | Sequence[float],
                    tol: float, ceiling: float | None = None) -> ComparisonReport:
    """Level-by-level comparison of the overlapping prefix.

    Algebraic levels within 5% of the continuum ceiling are skipped: a box
    cannot represent threshold states. Levels past the first such one are
    skipped too, since the algebraic formula no longer describes bound
    states there (PT-II levels turn back down once n exceeds A).
    """
    alg = list(algebraic.energies if isinstance(algebraic, SpectrumReport) else algebraic)
    num = list(numeric.eigenvalues)
    if not alg or not num:
        raise EmptyInput("both spectra must be nonempty")
    if ceiling is None:
        ceiling = numeric.ceiling
    compared, excluded = [], []
    past_edge = False
    for n, e in enumerate(alg):
        e = float(e)
        if past_edge:
            excluded.append({"n": n, "algebraic": e, "reason": "past_continuum_edge"})
        elif ceiling is not None and e >= ceiling - CEILING_MARGIN * abs(ceiling):
            excluded.append({"n": n, "algebraic": e, "reason": "continuum_edge"})
            past_edge = True
        elif n >= len(num):
            excluded.append({"n": n, "algebraic": e, "reason": "no_numeric_level"})
        else:
            diff = float(num[n]) - e
            compared.append(LevelComparison(n, float(num[n]), e, diff, abs(diff) <= tol))
    return ComparisonReport(compared, excluded, tol)
