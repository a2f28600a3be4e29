"""Witness construction under the Lorentzian form.

The pipeline for a positive hyperbolic triple (a, b, c):

1. ``reduce_step`` repeatedly replaces (a, b, c) by (a, b - a, a + c - 2b) after
   normalising so that a <= c, until the triple satisfies 2b >= a + c.
2. ``represent_linear_dj`` realises the remaining triple with a pair of
   De Jonquieres-type vectors.
3. The reductions are undone by Shear moves (x, y) -> (x, x + y) and Swap moves.

The result is a ``WitnessCertificate`` that can be replayed and checked without
trusting any of the code that produced it.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from math import isqrt
from typing import Any

from .lattice import (
    CorrwitError,
    FormKind,
    LatticeVector,
    PreconditionViolated,
    Triple,
    WitnessPair,
    verify_witness,
)

MIN_AMBIENT = 6

GENERICITY_DISCLAIMER = (
    "The points p1, ..., pn must be sufficiently general; "
    "no effective genericity test is performed."
)


class InternalInvariantBroken(CorrwitError):
    code = "InternalInvariantBroken"


class NotRepresentableAsPositiveTriple(PreconditionViolated):
    code = "NotRepresentableAsPositiveTriple"


class DegenerateTarget(PreconditionViolated):
    """Targets with a zero entry are hypersurface classes; see ``decide``."""

    code = "DegenerateTarget"


class ReplayMismatch(CorrwitError):
    code = "ReplayMismatch"


class CertificateFormatError(CorrwitError):
    code = "CertificateFormatError"


class Move(enum.Enum):
    SWAP = "swap"
    SHEAR = "shear"


@dataclass(frozen=True)
class FourSquares:
    n: int
    parts: tuple[int, int, int, int]

    def __post_init__(self):
        if sum(p * p for p in self.parts) != self.n:
            raise ValueError(f"{self.parts} is not a four-squares decomposition of {self.n}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError("parts must be nonincreasing")


@dataclass(frozen=True)
class DJVector:
    """A vector (d, m1, ..., mn) of De Jonquieres type; validated on construction."""

    vec: LatticeVector

    def __post_init__(self):
        if not is_dj_type(self.vec):
            raise ValueError(f"{self.vec.coords} is not of De Jonquieres type")

    @property
    def degree(self) -> int:
        return self.vec[0]

    @property
    def ambient_n(self) -> int:
        return len(self.vec) - 1


@dataclass(frozen=True)
class WitnessCertificate:
    """A base pair plus the moves (applied base-outward) that realise ``target``.

    ``base_x``/``base_y`` are kept as plain lattice vectors so that certificates
    read from untrusted input can be represented and then rejected by
    ``check_certificate``. Certificates built by ``represent_general`` always
    have De Jonquieres-type bases.
    """

    base_x: LatticeVector
    base_y: LatticeVector
    moves: tuple[Move, ...]
    target: Triple
    ambient_n: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "target": {"a": self.target.a, "b": self.target.b, "c": self.target.c},
            "ambient_n": self.ambient_n,
            "base_x": list(self.base_x.coords),
            "base_y": list(self.base_y.coords),
            "moves": [m.value for m in self.moves],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Any) -> WitnessCertificate:
        try:
            target = data["target"]
            triple = Triple(*(_strict_int(target[k]) for k in "abc"))
            ambient_n = _strict_int(data["ambient_n"])
            base_x = LatticeVector(_strict_int(v) for v in data["base_x"])
            base_y = LatticeVector(_strict_int(v) for v in data["base_y"])
            moves = tuple(Move(m) for m in data["moves"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc
        return cls(base_x, base_y, moves, triple, ambient_n)

    @classmethod
    def from_json(cls, text: str) -> WitnessCertificate:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _strict_int(v: Any) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# Sums of squares
# ---------------------------------------------------------------------------


def four_squares(n: int) -> FourSquares:
    """Lexicographically largest nonincreasing (n1, n2, n3, n4) with squares summing to n."""
    if n < 0:
        raise PreconditionViolated(f"n must be nonnegative, got {n}")
    for n1 in range(isqrt(n), -1, -1):
        r1 = n - n1 * n1
        for n2 in range(min(n1, isqrt(r1)), -1, -1):
            r2 = r1 - n2 * n2
            for n3 in range(min(n2, isqrt(r2)), -1, -1):
                r3 = r2 - n3 * n3
                n4 = isqrt(r3)
                if n4 * n4 == r3 and n4 <= n3:
                    return FourSquares(n, (n1, n2, n3, n4))
    raise InternalInvariantBroken(f"no four-squares decomposition found for {n}")


def sum_of_squares_representations(n: int, k: int) -> list[tuple[int, ...]]:
    """All nonincreasing k-tuples of nonnegative integers whose squares sum to n.

    Sorted lexicographically descending.
    """
    if n < 0 or k < 1:
        raise PreconditionViolated(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, slots: int, cap: int) -> None:
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        # the largest remaining part must carry at least remaining/slots
        for v in range(min(cap, isqrt(remaining)), -1, -1):
            if v * v * slots < remaining:
                break
            prefix.append(v)
            rec(prefix, remaining - v * v, slots - 1, v)
            prefix.pop()

    rec([], n, k, isqrt(n))
    return out


# ---------------------------------------------------------------------------
# Linear regime
# ---------------------------------------------------------------------------


def _require_linear(t: Triple) -> None:
    if not t.positive():
        raise PreconditionViolated(f"{t.as_tuple()} is not positive")
    if not t.linear_regime():
        raise PreconditionViolated(f"{t.as_tuple()} violates 2b >= a + c")


def _linear_parameters(t: Triple) -> tuple[int, int, int, bool]:
    """(r1, r2, r3, c_is_odd) for a triple already normalised to c <= a."""
    r1 = t.c // 2
    r2 = t.b - t.c
    r3 = 2 * t.b - t.a - t.c
    return r1, r2, r3, t.c % 2 == 1


def represent_linear_nat7(t: Triple) -> WitnessPair:
    """Witness in N^7 for a positive triple with 2b >= a + c."""
    _require_linear(t)
    swapped = t.c > t.a
    s = t.transposed() if swapped else t
    r1, r2, r3, odd = _linear_parameters(s)
    n1, n2, n3, n4 = four_squares(r3).parts
    parity = 0 if odd else 1
    x = LatticeVector((r1 + r2 + 1, r1 + r2, parity, n1, n2, n3, n4))
    y = LatticeVector((r1 + 1, r1, parity, 0, 0, 0, 0))
    if swapped:
        x, y = y, x
    return WitnessPair(x, y, FormKind.LORENTZIAN, t)


def represent_linear_dj(t: Triple, n: int) -> tuple[DJVector, DJVector]:
    """De Jonquieres-type pair in N^{n+1} for a positive triple with 2b >= a + c, b <= n // 2.

    Same shape as the N^7 witness, with the r3 four-squares slots replaced by r3
    unit entries in the leftmost free slots (indices 3, 4, ...).
    """
    _require_linear(t)
    if t.b > n // 2:
        raise PreconditionViolated(f"b={t.b} exceeds n // 2 = {n // 2}")
    swapped = t.c > t.a
    s = t.transposed() if swapped else t
    r1, r2, r3, odd = _linear_parameters(s)
    parity = 0 if odd else 1
    # n >= 2b and a, c >= 1 give r3 <= n - 2
    units = [1] * r3 + [0] * (n - 2 - r3)
    mx = LatticeVector([r1 + r2 + 1, r1 + r2, parity] + units)
    my = LatticeVector([r1 + 1, r1, parity] + [0] * (n - 2))
    for v in (mx, my):
        if not is_dj_type(v):
            raise InternalInvariantBroken(f"constructed {v.coords} is not of De Jonquieres type")
    if swapped:
        mx, my = my, mx
    return DJVector(mx), DJVector(my)


def is_dj_type(x: LatticeVector) -> bool:
    coords = x.coords
    n = len(coords) - 1
    if n < 1:
        return False
    d, m1, rest = coords[0], coords[1], coords[2:]
    if d < 1 or n < 2 * d - 1 or m1 != d - 1:
        return False
    if any(m not in (0, 1) for m in rest):
        return False
    return sum(rest) <= 2 * d - 2


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def reduce_step(t: Triple) -> tuple[Triple, Move | None, Move]:
    """One reduction (a, b, c) -> (a, b - a, a + c - 2b), after normalising to a <= c.

    Returns ``(reduced, swap, shear)`` where ``swap`` is ``Move.SWAP`` if the
    normalisation exchanged a and c, else None. To lift a witness of
    ``reduced`` back to ``t``, apply the shear first and then the swap.
    """
    if not (t.positive() and t.hyperbolic()) or t.linear_regime():
        raise PreconditionViolated(
            f"{t.as_tuple()} must be positive, satisfy b^2 >= ac, and violate 2b >= a + c"
        )
    swap = None
    if t.a > t.c:
        t = t.transposed()
        swap = Move.SWAP
    reduced = Triple(t.a, t.b - t.a, t.a + t.c - 2 * t.b)
    return reduced, swap, Move.SHEAR


def default_ambient(t: Triple) -> int:
    return max(2 * t.b, MIN_AMBIENT)


def represent_general(t: Triple, n: int | None = None) -> WitnessCertificate:
    """Certificate for any positive triple with b^2 >= ac."""
    a, b, c = t.as_tuple()
    if min(a, b, c) < 0:
        raise PreconditionViolated(f"{t.as_tuple()} has a negative entry")
    if min(a, b, c) == 0:
        raise DegenerateTarget(
            f"{t.as_tuple()} has a zero entry; use the decide module for degenerate classes"
        )
    if not t.hyperbolic():
        raise NotRepresentableAsPositiveTriple(f"b^2 = {b * b} < ac = {a * c}")
    needed = default_ambient(t)
    if n is None:
        n = needed
    elif n < needed:
        raise PreconditionViolated(f"ambient n={n} is below max(2b, 6) = {needed}")

    lifts: list[list[Move]] = []
    cur = t
    while not cur.linear_regime():
        cur, swap, shear = reduce_step(cur)
        lifts.append([shear] + ([swap] if swap else []))

    moves: list[Move] = []
    if cur.c > cur.a:
        base_x, base_y = represent_linear_dj(cur.transposed(), n)
        moves.append(Move.SWAP)
    else:
        base_x, base_y = represent_linear_dj(cur, n)
    for lift in reversed(lifts):
        moves.extend(lift)

    cert = WitnessCertificate(base_x.vec, base_y.vec, tuple(moves), t, n)
    replay(cert)
    return cert


# ---------------------------------------------------------------------------
# Replay and checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplayState:
    """Pair after some prefix of the moves, with summand counts over the two bases."""

    x: LatticeVector
    y: LatticeVector
    x_summands: tuple[int, int]
    y_summands: tuple[int, int]


def replay_trace(cert: WitnessCertificate) -> list[ReplayState]:
    """Every intermediate pair, starting with the base pair."""
    x, y = cert.base_x, cert.base_y
    sx, sy = (1, 0), (0, 1)
    states = [ReplayState(x, y, sx, sy)]
    for move in cert.moves:
        if move is Move.SWAP:
            x, y, sx, sy = y, x, sy, sx
        elif move is Move.SHEAR:
            y = x + y
            sy = (sx[0] + sy[0], sx[1] + sy[1])
        else:
            raise CertificateFormatError(f"unknown move {move!r}")
        states.append(ReplayState(x, y, sx, sy))
    return states


def replay(cert: WitnessCertificate) -> WitnessPair:
    final = replay_trace(cert)[-1]
    pair = WitnessPair(final.x, final.y, FormKind.LORENTZIAN, cert.target)
    if not verify_witness(pair):
        raise ReplayMismatch(f"replay gives Gram values {pair.gram()}, expected {cert.target.as_tuple()}")
    return pair


def check_certificate(cert: WitnessCertificate) -> list[dict[str, Any]]:
    """All problems found with ``cert``; an empty list means it is valid.

    Replay is checked first, so a corrupted certificate reports ReplayMismatch
    before any structural complaint.
    """
    failures: list[dict[str, Any]] = []
    width = cert.ambient_n + 1
    for name, vec in (("base_x", cert.base_x), ("base_y", cert.base_y)):
        if len(vec) != width:
            failures.append({"reason": "LengthMismatch", "field": name,
                             "detail": f"length {len(vec)} != ambient_n + 1 = {width}"})
    if failures:
        return failures

    states = replay_trace(cert)
    final = states[-1]
    pair = WitnessPair(final.x, final.y, FormKind.LORENTZIAN, cert.target)
    if not verify_witness(pair):
        failures.append({"reason": ReplayMismatch.code,
                         "detail": f"Gram values {list(pair.gram())} != target {list(cert.target.as_tuple())}"})
    for name, vec in (("base_x", cert.base_x), ("base_y", cert.base_y)):
        if not is_dj_type(vec):
            failures.append({"reason": "NotDJType", "field": name, "detail": list(vec.coords)})
    for step, st in enumerate(states):
        if not (st.x.is_nonnegative() and st.y.is_nonnegative()):
            failures.append({"reason": "NegativeCoordinate", "step": step})
            break
    for step, st in enumerate(states):
        for vec, (p, q) in ((st.x, st.x_summands), (st.y, st.y_summands)):
            expect = tuple(p * u + q * v for u, v in zip(cert.base_x, cert.base_y))
            if vec.coords != expect:
                failures.append({"reason": "SummandMismatch", "step": step})
                break
    return failures


def _system_text(vec: LatticeVector) -> str:
    d = vec[0]
    mults = [(i, m) for i, m in enumerate(vec.coords[1:], start=1) if m]
    if not mults:
        return f"plane curves of degree {d}, no assigned base points"
    where = ", ".join(f"multiplicity >= {m} at p{i}" for i, m in mults)
    return f"plane curves of degree {d} with {where}"


def linear_system_description(cert: WitnessCertificate) -> dict[str, Any]:
    """Human- and machine-readable reading of the final pair as linear systems L(p, m)."""
    final = replay_trace(cert)[-1]
    systems = []
    for role, vec, (p, q) in (("x", final.x, final.x_summands), ("y", final.y, final.y_summands)):
        summands = Counter({"base_x": p, "base_y": q})
        systems.append({
            "role": role,
            "degree": vec[0],
            "multiplicities": list(vec.coords[1:]),
            "text": _system_text(vec),
            "summands": [
                {"base": base, "count": count,
                 "degree": (cert.base_x if base == "base_x" else cert.base_y)[0]}
                for base, count in sorted(summands.items()) if count
            ],
        })
    return {
        "target": {"a": cert.target.a, "b": cert.target.b, "c": cert.target.c},
        "ambient_n": cert.ambient_n,
        "bases": {
            "base_x": {"coords": list(cert.base_x.coords), "text": _system_text(cert.base_x),
                       "dj_type": is_dj_type(cert.base_x)},
            "base_y": {"coords": list(cert.base_y.coords), "text": _system_text(cert.base_y),
                       "dj_type": is_dj_type(cert.base_y)},
        },
        "systems": systems,
        "disclaimer": GENERICITY_DISCLAIMER,
    }


def format_description(desc: dict[str, Any]) -> str:
    t = desc["target"]
    lines = [f"target (a, b, c) = ({t['a']}, {t['b']}, {t['c']}), ambient n = {desc['ambient_n']}"]
    for sys_ in desc["systems"]:
        m = ", ".join(str(v) for v in sys_["multiplicities"])
        lines.append(f"{sys_['role']}: L(p, ({sys_['degree']}; {m})) = {sys_['text']}")
        parts = " + ".join(f"{s['count']} * {s['base']}" for s in sys_["summands"])
        lines.append(f"   = {parts}")
    for name, base in desc["bases"].items():
        kind = "De Jonquieres type" if base["dj_type"] else "NOT De Jonquieres type"
        lines.append(f"{name} = {tuple(base['coords'])}: {base['text']} ({kind})")
    lines.append(desc["disclaimer"])
    return "\n".join(lines)
