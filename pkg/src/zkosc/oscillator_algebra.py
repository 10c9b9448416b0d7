"""Dense matrix realisation of the Z_k-graded generalized deformed oscillator.

Generators live on a :class:`~zkosc.graded_fock.FockWindow`. Everything is
diagonal in the Fock basis except the ladder pair, which is built from the
structure function so that ``a^dag a = F(N)`` holds by construction.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import BadGradeIndex, NegativeStructure
from .graded_fock import FockWindow

DEFAULT_TOL = 1e-10


class Label(enum.Enum):
    NUMBER = "N"
    ANNIHILATION = "a"
    CREATION = "a_dag"
    GRADING = "T"
    PROJECTOR = "Pi"
    IDENTITY = "I"
    CUSTOM = "custom"


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    label: Label = Label.CUSTOM
    index: int | None = None  # projector grade

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def name(self) -> str:
        if self.label is Label.PROJECTOR:
            return f"Pi_{self.index}"
        return self.label.value

    def dagger(self) -> OperatorMatrix:
        label = {Label.ANNIHILATION: Label.CREATION,
                 Label.CREATION: Label.ANNIHILATION}.get(self.label, self.label)
        if self.label is Label.GRADING:
            label = Label.CUSTOM
        return OperatorMatrix(self.entries.conj().T, label, self.index)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return self.entries @ other.entries
        return self.entries @ other


@dataclass(frozen=True)
class StructureFn:
    """Structure function ``nu -> F(nu)``.

    ``graded`` optionally holds ``(f, [g_0, ..., g_{k-1}])`` indexed by *Fock*
    grade, so that ``F(nu) = f(nu) + g_{grade(nu)}(nu)``.
    """

    func: Callable
    graded: tuple[Callable, Sequence[Callable]] | None = None

    def __call__(self, nu) -> float:
        return float(self.func(nu))

    def decomposed(self, nu, grade: int) -> float:
        if self.graded is None:
            raise ValueError("no graded decomposition attached")
        f, gs = self.graded
        return float(f(nu)) + float(gs[grade](nu))

    def on_window(self, window: FockWindow) -> np.ndarray:
        return np.array([self(nu) for nu in window.nus])


def undeformed() -> StructureFn:
    """``F(nu) = nu``: the ordinary oscillator when ``k = 1``."""
    return StructureFn(lambda nu: nu)


def build_identity(window: FockWindow) -> OperatorMatrix:
    return OperatorMatrix(np.eye(window.depth, dtype=complex), Label.IDENTITY)


def build_number(window: FockWindow) -> OperatorMatrix:
    return OperatorMatrix(np.diag(window.nu).astype(complex), Label.NUMBER)


def build_ladders(window: FockWindow, F: StructureFn) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Annihilation and creation matrices.

    ``a`` sends each state one step down in ``nu`` with amplitude
    ``sqrt(F(nu))`` evaluated at the state it acts on.
    """
    values = F.on_window(window)
    bad = np.flatnonzero(values < 0)
    if bad.size:
        j = int(bad[0])
        raise NegativeStructure(
            f"F(nu={window.nus[j]}) = {values[j]:.6g} < 0; shift the constant C_0"
        )
    a = np.zeros((window.depth, window.depth), dtype=complex)
    for j in range(window.depth):
        i = window.lower(j)
        if i is not None:
            a[i, j] = np.sqrt(values[j])
    return (OperatorMatrix(a, Label.ANNIHILATION),
            OperatorMatrix(a.conj().T.copy(), Label.CREATION))


def grading_phases(window: FockWindow) -> np.ndarray:
    """Exact exponents ``g`` with ``T_jj = exp(2 pi i g / k)``."""
    return window.grades.copy()


def build_grading(window: FockWindow) -> OperatorMatrix:
    # e^{2 pi i nu} depends only on the fractional part of nu; using the exact
    # grade avoids phase drift for large anchors.
    k = window.k
    diag = [_root_of_unity(g, k) for g in window.grades]
    return OperatorMatrix(np.diag(np.array(diag, dtype=complex)), Label.GRADING)


def _root_of_unity(g: int, k: int) -> complex:
    g %= k
    if (4 * g) % k == 0:  # exact for the quarter turns
        return (1, 1j, -1, -1j)[(4 * g) // k]
    return cmath.exp(2j * cmath.pi * g / k)


def build_projector(window: FockWindow, s: int) -> OperatorMatrix:
    """Projector onto the Fock grade-``s`` subspace (``nu = s/k mod 1``)."""
    if not 0 <= s < window.k:
        raise BadGradeIndex(f"grade index {s} outside [0, {window.k})")
    diag = (window.grades == s).astype(complex)
    return OperatorMatrix(np.diag(diag), Label.PROJECTOR, s)


def build_tower_projector(window: FockWindow, s: int) -> OperatorMatrix:
    """Projector onto descending levels ``n`` with ``n = s mod k``.

    Equals the Fock projector of grade ``(-s) mod k`` for integer anchors.
    """
    if not 0 <= s < window.k:
        raise BadGradeIndex(f"grade index {s} outside [0, {window.k})")
    return build_projector(window, (-s) % window.k)


def projector_from_grading(window: FockWindow, s: int) -> OperatorMatrix:
    """``(1/k) sum_t exp(-2 pi i t s / k) T^t`` evaluated as a matrix sum."""
    if not 0 <= s < window.k:
        raise BadGradeIndex(f"grade index {s} outside [0, {window.k})")
    k = window.k
    T = build_grading(window).entries
    acc = np.zeros_like(T)
    Tt = np.eye(window.depth, dtype=complex)
    for t in range(k):
        acc += cmath.exp(-2j * cmath.pi * t * s / k) * Tt
        Tt = Tt @ T
    return OperatorMatrix(acc / k, Label.PROJECTOR, s)


def build_all(window: FockWindow, F: StructureFn) -> dict[str, OperatorMatrix]:
    a, adag = build_ladders(window, F)
    ops = {
        "I": build_identity(window),
        "N": build_number(window),
        "a": a,
        "a_dag": adag,
        "T": build_grading(window),
    }
    for s in range(window.k):
        ops[f"Pi_{s}"] = build_projector(window, s)
    return ops


@dataclass
class RelationReport:
    residuals: dict[str, float]
    boundary_excluded: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals.values())

    def failures(self) -> list[str]:
        return [name for name, r in self.residuals.items() if r > self.tolerance]

    def to_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "boundary_excluded": self.boundary_excluded,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _maxabs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def check_algebra(window: FockWindow, F: StructureFn, tol: float = DEFAULT_TOL, *,
                  include_grading: bool = True,
                  ladders: tuple[OperatorMatrix, OperatorMatrix] | None = None) -> RelationReport:
    """Max-abs residual of every defining relation on ``window``.

    Rows and columns of the top-``nu`` state are dropped from the relations
    that truncation breaks there (``a a^dag`` and the ladder commutators).
    ``ladders`` overrides the matrices built from ``F`` (negative controls).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    k, D = window.k, window.depth
    if ladders is None:
        a, adag = build_ladders(window, F)
    else:
        a, adag = ladders
        if (F.on_window(window) < 0).any():
            raise NegativeStructure("F negative on window")
    A, Ad = a.entries, adag.entries
    N = build_number(window).entries
    I = np.eye(D, dtype=complex)

    keep = np.ones(D, dtype=bool)
    keep[window.top_index] = False
    inner = np.ix_(keep, keep)

    Fdiag = np.diag(F.on_window(window)).astype(complex)
    step = Fraction(1, k)
    Fshift = np.zeros(D)
    for j, nu in enumerate(window.nus):
        if keep[j]:
            Fshift[j] = F(nu + step)
    Fshift = np.diag(Fshift).astype(complex)

    res = {
        "hermitian_a": _maxabs(A.conj().T - Ad),
        "hermitian_N": _maxabs(N - N.conj().T),
        "[a,N]-a/k": _maxabs((A @ N - N @ A - A / k)[inner]),
        "[a_dag,N]+a_dag/k": _maxabs((Ad @ N - N @ Ad + Ad / k)[inner]),
        "a_dag a-F(N)": _maxabs(Ad @ A - Fdiag),
        "a a_dag-F(N+1/k)": _maxabs((A @ Ad - Fshift)[inner]),
    }

    if include_grading:
        T = build_grading(window).entries
        Pis = [build_projector(window, s).entries for s in range(k)]
        phase = cmath.exp(-2j * cmath.pi / k)
        Td = T.conj().T
        res["unitary_T"] = _maxabs(Td @ T - I)
        res["T^k-I"] = _maxabs(np.linalg.matrix_power(T, k) - I)
        res["[N,T]"] = _maxabs(N @ T - T @ N)
        res["a_dag T-e^{-2pi i/k} T a_dag"] = _maxabs((Ad @ T - phase * T @ Ad)[inner])
        res["T_dag a-a T_dag e^{2pi i/k}"] = _maxabs((Td @ A - A @ Td / phase)[inner])
        pp = pc = pn = ph = 0.0
        tr_up = tr_down = 0.0
        for s in range(k):
            ph = max(ph, _maxabs(Pis[s] - Pis[s].conj().T))
            pn = max(pn, _maxabs(N @ Pis[s] - Pis[s] @ N))
            for t in range(k):
                target = Pis[s] if s == t else np.zeros_like(I)
                pp = max(pp, _maxabs(Pis[s] @ Pis[t] - target))
            tr_up = max(tr_up, _maxabs((Ad @ Pis[s] - Pis[(s + 1) % k] @ Ad)[inner]))
            tr_down = max(tr_down, _maxabs((A @ Pis[s] - Pis[(s - 1) % k] @ A)[inner]))
        res["hermitian_Pi"] = ph
        res["[N,Pi_s]"] = pn
        res["Pi_s Pi_t-delta_st Pi_s"] = pp
        res["a_dag Pi_s-Pi_{s+1} a_dag"] = tr_up
        res["a Pi_s-Pi_{s-1} a"] = tr_down
        res["sum_s Pi_s-I"] = _maxabs(sum(Pis) - I)

    return RelationReport(res, True, tol)
