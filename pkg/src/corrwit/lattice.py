"""Integer lattice vectors, the two bilinear forms, target triples and witness checks.

All arithmetic is done with Python ints, so nothing here can overflow or round.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable


class CorrwitError(Exception):
    """Base class for every error raised by this package."""

    code = "Error"


class LengthMismatch(CorrwitError):
    code = "LengthMismatch"


class PreconditionViolated(CorrwitError):
    code = "PreconditionViolated"


class FormKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    LORENTZIAN = "lorentzian"


@dataclass(frozen=True)
class LatticeVector:
    """A point of Z^{n+1}. Slot 0 is the distinguished (degree) coordinate."""

    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        values = tuple(coords)
        if not values:
            raise ValueError("a lattice vector needs at least one coordinate")
        for v in values:
            # bool is an int subclass but never a sensible coordinate
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"coordinates must be integers, got {v!r}")
        object.__setattr__(self, "coords", values)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: LatticeVector) -> LatticeVector:
        _check_lengths(self, other)
        return LatticeVector(a + b for a, b in zip(self.coords, other.coords))

    def padded(self, length: int) -> LatticeVector:
        """Explicitly extend with trailing zeros to `length` coordinates."""
        if length < len(self.coords):
            raise ValueError(f"cannot pad a vector of length {len(self)} down to {length}")
        return LatticeVector(self.coords + (0,) * (length - len(self.coords)))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.coords)

    def __repr__(self) -> str:
        return f"LatticeVector({self.coords})"


@dataclass(frozen=True)
class Triple:
    """Target Gram values (a, b, c) = (x.x, x.y, y.y)."""

    a: int
    b: int
    c: int

    def positive(self) -> bool:
        return self.a > 0 and self.b > 0 and self.c > 0

    def hyperbolic(self) -> bool:
        return self.b * self.b >= self.a * self.c

    def linear_regime(self) -> bool:
        return 2 * self.b >= self.a + self.c

    def discriminant(self) -> int:
        return self.b * self.b - self.a * self.c

    def transposed(self) -> Triple:
        return Triple(self.c, self.b, self.a)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class WitnessPair:
    x: LatticeVector
    y: LatticeVector
    form: FormKind
    target: Triple

    def gram(self) -> tuple[int, int, int]:
        return (
            inner(self.form, self.x, self.x),
            inner(self.form, self.x, self.y),
            inner(self.form, self.y, self.y),
        )


def _check_lengths(x: LatticeVector, y: LatticeVector) -> None:
    if len(x) != len(y):
        raise LengthMismatch(f"vectors have lengths {len(x)} and {len(y)}")


def inner(form: FormKind, x: LatticeVector, y: LatticeVector) -> int:
    """Exact value of the Euclidean or Lorentzian product of x and y."""
    _check_lengths(x, y)
    head = x.coords[0] * y.coords[0]
    tail = sum(a * b for a, b in zip(x.coords[1:], y.coords[1:]))
    if form is FormKind.EUCLIDEAN:
        return head + tail
    if form is FormKind.LORENTZIAN:
        return head - tail
    raise ValueError(f"unknown form {form!r}")


def is_time_like(x: LatticeVector) -> bool:
    return inner(FormKind.LORENTZIAN, x, x) > 0


def verify_witness(w: WitnessPair) -> bool:
    """Recompute the three Gram values from scratch and compare with the target."""
    return w.gram() == w.target.as_tuple()
