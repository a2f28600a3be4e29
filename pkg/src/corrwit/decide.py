"""Representability decisions for classes in products of projective spaces.

Every negative decision carries the code of the first condition that failed,
checked in a fixed order: nonnegativity, then the zero/unit cases, then the
index inequality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .lattice import CorrwitError


class InvalidIndexRange(CorrwitError):
    code = "InvalidIndexRange"


class Verdict(enum.Enum):
    REPRESENTABLE = "Representable"
    NOT_REPRESENTABLE = "NotRepresentable"
    MULTIPLE_REPRESENTABLE = "MultipleRepresentable"
    MULTIPLE_NOT_REPRESENTABLE = "MultipleNotRepresentable"
    CONJECTURALLY_REPRESENTABLE = "ConjecturallyRepresentable"
    CONJECTURALLY_NOT_REPRESENTABLE = "ConjecturallyNotRepresentable"

    @property
    def positive(self) -> bool:
        return self in (
            Verdict.REPRESENTABLE,
            Verdict.MULTIPLE_REPRESENTABLE,
            Verdict.CONJECTURALLY_REPRESENTABLE,
        )

    @property
    def conjectural(self) -> bool:
        return self in (
            Verdict.CONJECTURALLY_REPRESENTABLE,
            Verdict.CONJECTURALLY_NOT_REPRESENTABLE,
        )


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: str
    note: str = ""

    @property
    def conjectural(self) -> bool:
        return self.verdict.conjectural

    @property
    def positive(self) -> bool:
        return self.verdict.positive

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "reason": self.reason, "conjectural": self.conjectural}


class ClassP2P2(NamedTuple):
    """a[P2 x P0] + b[P1 x P1] + c[P0 x P2]."""

    a: int
    b: int
    c: int


class ClassP3P3(NamedTuple):
    """a[P3 x P0] + b[P2 x P1] + c[P1 x P2] + d[P0 x P3]."""

    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class MultiDegreeSequence:
    """sum_i e_i [P^i x P^(k-i)] in A_k(P^n x P^m).

    ``e`` lists the coefficients for i = lo, lo + 1, ..., hi with
    lo = max(0, k - m) and hi = min(n, k).
    """

    n: int
    m: int
    k: int
    e: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(self.e))
        if min(self.n, self.m, self.k) < 0:
            raise InvalidIndexRange(f"n, m, k must be nonnegative, got {(self.n, self.m, self.k)}")
        if self.k > self.n + self.m:
            raise InvalidIndexRange(f"k={self.k} exceeds n + m = {self.n + self.m}")
        expected = self.hi - self.lo + 1
        if len(self.e) != expected:
            raise InvalidIndexRange(
                f"expected {expected} coefficients for indices {self.lo}..{self.hi}, got {len(self.e)}"
            )

    @property
    def lo(self) -> int:
        return max(0, self.k - self.m)

    @property
    def hi(self) -> int:
        return min(self.n, self.k)

    def coefficient(self, i: int) -> int:
        return self.e[i - self.lo]


NEGATIVE = "NegativeCoefficient"
INDEX_INEQUALITY = "IndexInequality"
UNIT_CLASS = "UnitClass"

REPRESENTABLE = Verdict.REPRESENTABLE
NOT_REPRESENTABLE = Verdict.NOT_REPRESENTABLE


def decide_p2p2(x: ClassP2P2) -> Decision:
    a, b, c = x
    if min(a, b, c) < 0:
        return Decision(NOT_REPRESENTABLE, NEGATIVE)
    if b == 0:
        if (a, c) in ((1, 0), (0, 1)):
            return Decision(REPRESENTABLE, UNIT_CLASS)
        return Decision(NOT_REPRESENTABLE, "ZeroBNotUnit")
    if b * b < a * c:
        return Decision(NOT_REPRESENTABLE, INDEX_INEQUALITY, f"b^2 = {b * b} < ac = {a * c}")
    if a == 0 or c == 0:
        return Decision(REPRESENTABLE, "PositiveBHyperbolic", "realised by a hypersurface of a P2 x P1 slice")
    return Decision(REPRESENTABLE, "PositiveBHyperbolic")


def decide_p2p1(a: int, b: int) -> Decision:
    """a[P2 x P0] + b[P1 x P1] in A_2(P2 x P1)."""
    if min(a, b) < 0:
        return Decision(NOT_REPRESENTABLE, NEGATIVE)
    if b > 0:
        return Decision(REPRESENTABLE, "PositiveB")
    if a == 1:
        return Decision(REPRESENTABLE, UNIT_CLASS)
    return Decision(NOT_REPRESENTABLE, "ZeroBNotUnit")


def decide_p1p1(a: int, b: int) -> Decision:
    """a[P1 x P0] + b[P0 x P1] in A_1(P1 x P1)."""
    if min(a, b) < 0:
        return Decision(NOT_REPRESENTABLE, NEGATIVE)
    if a > 0 and b > 0:
        return Decision(REPRESENTABLE, "BothPositive")
    if (a, b) in ((1, 0), (0, 1)):
        return Decision(REPRESENTABLE, UNIT_CLASS)
    return Decision(NOT_REPRESENTABLE, "ZeroCoefficientNotUnit")


def log_concave(e: Sequence[int]) -> bool:
    return all(e[i - 1] * e[i + 1] <= e[i] * e[i] for i in range(1, len(e) - 1))


def no_internal_zeros(e: Sequence[int]) -> bool:
    nonzero = [i for i, v in enumerate(e) if v != 0]
    if not nonzero:
        return True
    return all(v != 0 for v in e[nonzero[0]:nonzero[-1] + 1])


def corner_index(s: MultiDegreeSequence) -> int | None:
    """Index i such that [P^i x P^(k-i)] is the fundamental, a slice, or the point class.

    Returns None when the degree k admits none of them. The fundamental class
    [P^n x P^m] sits at (i, k) = (n, n + m), the slices [P^n x P^0] and
    [P^0 x P^m] at (n, n) and (0, m), the point at (0, 0).
    """
    n, m, k = s.n, s.m, s.k
    if k == n + m:
        return n
    if k == 0:
        return 0
    if k == n:
        return n
    if k == m:
        return 0
    return None


def _corner_multiplier(s: MultiDegreeSequence) -> int | None:
    # k == n == m gives two slice classes; either may carry the support
    candidates = {corner_index(s)}
    if s.k == s.n == s.m:
        candidates = {0, s.n}
    for i in sorted(c for c in candidates if c is not None):
        others = [v for j, v in enumerate(s.e, start=s.lo) if j != i]
        if all(v == 0 for v in others):
            return s.coefficient(i)
    return None


MULTIPLE_NOTE = "verdict concerns some positive multiple of the class, not the class itself"


def decide_multiple(s: MultiDegreeSequence) -> Decision:
    mult = _corner_multiplier(s)
    if mult is not None:
        if mult == 1:
            return Decision(REPRESENTABLE, "CornerUnit")
        return Decision(NOT_REPRESENTABLE, "CornerMultiplier", f"multiplier {mult} != 1")
    e = s.e
    if any(v < 0 for v in e):
        return Decision(Verdict.MULTIPLE_NOT_REPRESENTABLE, NEGATIVE, MULTIPLE_NOTE)
    if all(v == 0 for v in e):
        return Decision(Verdict.MULTIPLE_NOT_REPRESENTABLE, "ZeroClass", MULTIPLE_NOTE)
    if not no_internal_zeros(e):
        return Decision(Verdict.MULTIPLE_NOT_REPRESENTABLE, "InternalZeros", MULTIPLE_NOTE)
    if not log_concave(e):
        return Decision(Verdict.MULTIPLE_NOT_REPRESENTABLE, "NotLogConcave", MULTIPLE_NOTE)
    return Decision(Verdict.MULTIPLE_REPRESENTABLE, "LogConcaveNoInternalZeros", MULTIPLE_NOTE)


SPATIAL_NOTE = (
    "conjectural sufficiency; necessity of the numerical conditions is a theorem"
)


def check_spatial(x: ClassP3P3) -> Decision:
    a, b, c, d = x
    yes, no = Verdict.CONJECTURALLY_REPRESENTABLE, Verdict.CONJECTURALLY_NOT_REPRESENTABLE
    if min(a, b, c, d) < 0:
        return Decision(no, NEGATIVE, SPATIAL_NOTE)
    if b * b + c * c > 0:
        if b * b < a * c or c * c < b * d:
            return Decision(no, INDEX_INEQUALITY, SPATIAL_NOTE)
        return Decision(yes, "MiddlePositiveLogConcave", SPATIAL_NOTE)
    if (a, d) in ((1, 0), (0, 1)):
        return Decision(yes, UNIT_CLASS, SPATIAL_NOTE)
    return Decision(no, "ZeroMiddleNotUnit", SPATIAL_NOTE)
