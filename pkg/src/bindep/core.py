"""Probability triples, 2x2 tables and Fréchet–Hoeffding bounds.

A pair of events A, B is described by ``p = P(A)``, ``q = P(B)`` and
``r = P(A ∩ B)``. Every dependence measure in this package is a function of
such a triple, and every triple must satisfy

    0 < p < 1,  0 < q < 1,  max(0, p + q - 1) <= r <= min(p, q).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

#: Slack within which float triples are snapped onto a Fréchet–Hoeffding bound.
CLAMP_TOL = 1e-12
#: Tolerance for treating a population cell probability as zero.
CELL_TOL = 1e-12


class DomainError(ValueError):
    """Raised when inputs fall outside the domain of a measure or operation."""


class FrechetBounds(NamedTuple):
    lower: float
    upper: float


class PerfectDependence(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONE = "none"


def _check_marginal(name: str, v: float) -> float:
    v = float(v)
    if not (0.0 < v < 1.0):
        raise DomainError(f"{name} must lie strictly in (0, 1), got {v!r}")
    return v


def fh_bounds(p: float, q: float) -> FrechetBounds:
    """Fréchet–Hoeffding bounds ``(max(0, p+q-1), min(p, q))`` for ``P(A ∩ B)``."""
    p = _check_marginal("p", p)
    q = _check_marginal("q", q)
    return FrechetBounds(max(0.0, p + q - 1.0), min(p, q))


@dataclass(frozen=True)
class JointBinaryDistribution:
    """Population triple ``(p, q, r)``.

    Values of ``r`` outside the bounds by at most :data:`CLAMP_TOL` are snapped
    onto the bound; anything further out raises :class:`DomainError`.
    """

    p: float
    q: float
    r: float
    # set by complement_b so that a second complement returns the original exactly
    _origin: "JointBinaryDistribution | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        p = _check_marginal("p", self.p)
        q = _check_marginal("q", self.q)
        r = float(self.r)
        lo, hi = max(0.0, p + q - 1.0), min(p, q)
        if r < lo:
            if lo - r > CLAMP_TOL:
                raise DomainError(f"r={r!r} below lower bound {lo!r}")
            r = lo
        elif r > hi:
            if r - hi > CLAMP_TOL:
                raise DomainError(f"r={r!r} above upper bound {hi!r}")
            r = hi
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    @property
    def cells(self) -> tuple[float, float, float, float]:
        """Cell probabilities ``(P(A∩B), P(A∩B̄), P(Ā∩B), P(Ā∩B̄))``."""
        p, q, r = self.p, self.q, self.r
        return (r, p - r, q - r, 1.0 - p - q + r)

    @property
    def bounds(self) -> FrechetBounds:
        return fh_bounds(self.p, self.q)

    @property
    def covariance(self) -> float:
        return self.r - self.p * self.q

    @classmethod
    def from_cells(cls, a: float, b: float, c: float, d: float) -> "JointBinaryDistribution":
        """Build from four cell probabilities (normalised by their sum)."""
        tot = a + b + c + d
        if min(a, b, c, d) < 0 or tot <= 0:
            raise DomainError("cell probabilities must be non-negative with positive sum")
        return cls((a + b) / tot, (a + c) / tot, a / tot)

    def swap(self) -> "JointBinaryDistribution":
        """The triple for (B, A)."""
        return JointBinaryDistribution(self.q, self.p, self.r)


def is_positively_dependent(d: JointBinaryDistribution) -> bool:
    return d.r >= d.p * d.q


def is_negatively_dependent(d: JointBinaryDistribution) -> bool:
    return d.r <= d.p * d.q


def is_independent(d: JointBinaryDistribution) -> bool:
    return d.r == d.p * d.q


def is_perfectly_dependent(d: JointBinaryDistribution, tol: float = CELL_TOL) -> PerfectDependence:
    """Classify ``d`` by which (if any) cell probability vanishes.

    A zero in ``P(A∩B̄)`` or ``P(Ā∩B)`` is perfect positive dependence; a zero
    in ``P(A∩B)`` or ``P(Ā∩B̄)`` is perfect negative dependence. The two cannot
    coincide for interior marginals.
    """
    a, b, c, dd = d.cells
    if b <= tol or c <= tol:
        return PerfectDependence.POSITIVE
    if a <= tol or dd <= tol:
        return PerfectDependence.NEGATIVE
    return PerfectDependence.NONE


def complement_b(d: JointBinaryDistribution) -> JointBinaryDistribution:
    """Replace B by its complement: ``(p, q, r) -> (p, 1-q, p-r)``.

    Applying it twice returns the original triple bit for bit.
    """
    if d._origin is not None:
        return d._origin
    return JointBinaryDistribution(d.p, 1.0 - d.q, d.p - d.r, _origin=d)


def compare_dependence(d1: JointBinaryDistribution, d2: JointBinaryDistribution, tol: float = 1e-12) -> int:
    """Order two pairs with identical marginals by strength of dependence.

    Returns ``1`` if ``d1`` is strictly stronger positively dependent than
    ``d2`` (larger joint probability), ``-1`` if strictly stronger negatively
    dependent, and ``0`` if equally dependent. Pairs with different marginals
    have no defined ordering and raise :class:`DomainError`.
    """
    if abs(d1.p - d2.p) > tol or abs(d1.q - d2.q) > tol:
        raise DomainError("dependence ordering is only defined for equal marginals")
    if abs(d1.r - d2.r) <= tol:
        return 0
    return 1 if d1.r > d2.r else -1


_SPLIT = re.compile(r"[\s,;]+")


@dataclass(frozen=True)
class ContingencyTable:
    """Absolute frequencies of a 2x2 table.

    ``n11`` counts A∩B, ``n10`` A∩B̄, ``n01`` Ā∩B and ``n00`` Ā∩B̄.
    """

    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self) -> None:
        for name in ("n11", "n10", "n01", "n00"):
            v = getattr(self, name)
            iv = int(v)
            if iv != v or iv < 0:
                raise DomainError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, iv)
        if self.n < 1:
            raise DomainError("contingency table must contain at least one observation")

    @property
    def n(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.n11, self.n10, self.n01, self.n00)

    def fractions(self) -> tuple[Fraction, Fraction, Fraction]:
        """Exact ``(p̂, q̂, r̂)`` as rationals."""
        n = self.n
        return (Fraction(self.n11 + self.n10, n), Fraction(self.n11 + self.n01, n), Fraction(self.n11, n))

    def proportions(self) -> tuple[float, float, float]:
        """``(p̂, q̂, r̂)``, each a single correctly rounded integer division."""
        n = self.n
        return ((self.n11 + self.n10) / n, (self.n11 + self.n01) / n, self.n11 / n)

    def has_zero_cell(self) -> bool:
        return min(self.counts) == 0

    def perfect_dependence(self) -> PerfectDependence:
        """Exact integer version of :func:`is_perfectly_dependent`."""
        if self.n10 == 0 or self.n01 == 0:
            return PerfectDependence.POSITIVE
        if self.n11 == 0 or self.n00 == 0:
            return PerfectDependence.NEGATIVE
        return PerfectDependence.NONE

    def to_distribution(self) -> JointBinaryDistribution:
        return JointBinaryDistribution(*self.proportions())

    def swap(self) -> "ContingencyTable":
        return ContingencyTable(self.n11, self.n01, self.n10, self.n00)

    def complement_b(self) -> "ContingencyTable":
        return ContingencyTable(self.n10, self.n11, self.n00, self.n01)

    @classmethod
    def parse(cls, text: str) -> "ContingencyTable":
        """Parse a 2x2 block such as ``"197 2\\n139 19"`` or ``"197,2,139,19"``.

        Rows are A then Ā, columns B then B̄.
        """
        tokens = [t for t in _SPLIT.split(text.strip()) if t]
        if len(tokens) != 4:
            raise DomainError(f"expected 4 counts in a 2x2 block, found {len(tokens)}")
        try:
            vals = [int(t) for t in tokens]
        except ValueError as exc:
            raise DomainError(f"non-integer count in table: {exc}") from None
        return cls(*vals)

    @classmethod
    def from_pairs(cls, x, y) -> "ContingencyTable":
        """Cross-tabulate two equal-length 0/1 sequences."""
        import numpy as np

        x = np.asarray(x)
        y = np.asarray(y)
        if x.shape != y.shape or x.ndim != 1:
            raise DomainError("x and y must be 1-d sequences of equal length")
        if not (np.isin(x, (0, 1)).all() and np.isin(y, (0, 1)).all()):
            raise DomainError("values must be 0 or 1")
        x = x.astype(bool)
        y = y.astype(bool)
        return cls(
            int(np.count_nonzero(x & y)),
            int(np.count_nonzero(x & ~y)),
            int(np.count_nonzero(~x & y)),
            int(np.count_nonzero(~x & ~y)),
        )
