"""Truncated Z_k-graded Fock space.

Two indexing conventions are supported:

* ``ASCENDING`` builds the tower up from the vacuum, state ``j`` carrying
  number eigenvalue ``nu_j = j/k``.
* ``DESCENDING`` walks down from an anchor ``n0``: ``nu_j = n0 - j/k``.
  The descending index ``j`` is the "tower index" ``n`` used by the
  shape-invariance formulas.

The grade of a state is read off ``nu`` alone (``g`` with ``nu - g/k``
integral), so for a descending window with integer anchor the Fock grade of
tower level ``n`` is ``(-n) mod k`` while the tower grade is ``n mod k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidWindow, ZeroK


class Convention(enum.Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


@dataclass(frozen=True)
class StateLabel:
    index: int
    nu: Fraction
    grade: int


def grade_of(nu, k: int) -> int:
    """Grade ``g`` in ``[0, k)`` with ``nu - g/k`` an integer."""
    scaled = Fraction(nu) * k
    if scaled.denominator != 1:
        raise InvalidWindow(f"nu={nu} is not a multiple of 1/{k}")
    return int(scaled.numerator) % k


def tower_grade(n: int, k: int) -> int:
    """Index ``s`` selected by the cyclic Kronecker delta at level ``n``."""
    if k < 1:
        raise ZeroK("k must be a positive integer")
    return n % k


def fock_grade_of_tower(n: int, k: int) -> int:
    """Fock grade of the descending state ``|n0 - n/k>`` for integer ``n0``."""
    return (-tower_grade(n, k)) % k


def tower_grade_of_fock(g: int, k: int) -> int:
    """Inverse of :func:`fock_grade_of_tower` (the map is an involution)."""
    return (-g) % k


@dataclass(frozen=True)
class FockWindow:
    k: int
    depth: int
    n0: int = 0
    convention: Convention = Convention.ASCENDING
    labels: tuple[StateLabel, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ZeroK(f"k must be a positive integer, got {self.k!r}")
        if self.depth < 2:
            raise InvalidWindow(f"depth must be >= 2, got {self.depth}")
        if self.n0 < 0 or int(self.n0) != self.n0:
            raise InvalidWindow(f"n0 must be a nonnegative integer, got {self.n0}")
        if self.convention is Convention.DESCENDING and self.depth > self.k * self.n0 + 1:
            raise InvalidWindow(
                f"descending window of depth {self.depth} from n0={self.n0} "
                f"reaches negative number eigenvalues (max depth {self.k * self.n0 + 1})"
            )
        labels = []
        for j in range(self.depth):
            if self.convention is Convention.ASCENDING:
                nu = Fraction(j, self.k)
            else:
                nu = Fraction(self.n0) - Fraction(j, self.k)
            labels.append(StateLabel(j, nu, grade_of(nu, self.k)))
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def nus(self) -> tuple[Fraction, ...]:
        return tuple(lab.nu for lab in self.labels)

    @property
    def nu(self) -> np.ndarray:
        return np.array([float(lab.nu) for lab in self.labels])

    @property
    def grades(self) -> np.ndarray:
        return np.array([lab.grade for lab in self.labels], dtype=int)

    @property
    def top_index(self) -> int:
        """Index of the highest-nu state (the truncation boundary)."""
        return 0 if self.convention is Convention.DESCENDING else self.depth - 1

    @property
    def bottom_index(self) -> int:
        return self.depth - 1 if self.convention is Convention.DESCENDING else 0

    def tower_index(self, j: int) -> int:
        """Level ``n`` with ``nu_j = n0 - n/k``."""
        n = self.k * (Fraction(self.n0) - self.labels[j].nu)
        return int(n)

    def lower(self, j: int) -> int | None:
        """Index of the state reached by one annihilation step, if in the window."""
        i = j + 1 if self.convention is Convention.DESCENDING else j - 1
        return i if 0 <= i < self.depth else None


def make_window(k: int, depth: int, n0: int = 0,
                convention: Convention | str = Convention.ASCENDING) -> FockWindow:
    if isinstance(convention, str):
        convention = Convention(convention.lower())
    return FockWindow(k, depth, n0, convention)
