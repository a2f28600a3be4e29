"""Brute-force search for witness pairs, independent of the constructors.

Both forms and both lattice kinds are invariant under permuting coordinates
1..n (and, for Z, under flipping the sign of any coordinate in both vectors).
So x only runs over canonical representatives: nonnegative entries with a
nonincreasing tail. y then runs over the whole box in lexicographic order.
Branches are cut only when they provably hold no solution: remaining squared
norm R must be a sum of the remaining squares, and the remaining dot target P
must satisfy P^2 <= R * S (Cauchy-Schwarz, S the norm of x's unassigned part).
"No witness" therefore always means "no witness in the box"; running out of
budget raises instead.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import isqrt
from typing import Any, Callable, Iterator

from .construct import WitnessCertificate, check_certificate, is_dj_type, represent_general
from .lattice import CorrwitError, FormKind, LatticeVector, Triple, WitnessPair, verify_witness

DEFAULT_CAP = 50_000_000


class BoundTooLargeForBudget(CorrwitError):
    code = "BoundTooLargeForBudget"


class LatticeKind(enum.Enum):
    ALL_INTEGERS = "int"
    NONNEGATIVE = "nat"


@dataclass(frozen=True)
class LatticeSpec:
    kind: LatticeKind
    width: int
    coordinate_bound: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be at least 1")
        if self.coordinate_bound < 0:
            raise ValueError("coordinate_bound must be nonnegative")

    @property
    def low(self) -> int:
        return 0 if self.kind is LatticeKind.NONNEGATIVE else -self.coordinate_bound

    def label(self) -> str:
        return f"{self.kind.value}:{self.width}"

    @classmethod
    def parse(cls, text: str, bound: int) -> LatticeSpec:
        """Parse ``nat:7`` or ``int:4``."""
        kind, _, width = text.partition(":")
        return cls(LatticeKind(kind), int(width), bound)


def default_lorentzian_bound(t: Triple) -> int:
    return t.b * t.b + t.b


def is_conclusive(spec: LatticeSpec, form: FormKind, t: Triple) -> bool:
    """Whether exhausting ``spec`` without a witness proves that none exists at all.

    Only the Euclidean form bounds coordinates: |x_i| <= sqrt(x.x).
    """
    if form is not FormKind.EUCLIDEAN:
        return False
    if t.a < 0 or t.c < 0:
        return True
    return spec.coordinate_bound >= isqrt(max(t.a, t.c))


class _SearchState:
    """Node budget plus memo tables shared across one search.

    ``dead`` holds subtrees known to be empty. A subtree is determined by the
    remaining weights, the remaining squared norm and the remaining dot product,
    so what is learnt for one x is reused for every later x with the same tail.
    ``reach[k]`` is a bitset of the norms expressible as k squares from the box.
    """

    def __init__(self, spec: LatticeSpec, cap: int):
        self.cap = cap
        self.used = 0
        self.suffix_ids: dict[tuple[int, ...], int] = {}
        self.dead: set[tuple[int, int, int]] = set()
        bound = spec.coordinate_bound
        slots = spec.width - 1
        limit = slots * bound * bound
        mask = (1 << (limit + 1)) - 1
        squares = [v * v for v in range(bound + 1)]
        self.reach = [1]
        for _ in range(slots):
            prev = self.reach[-1]
            acc = 0
            for sq in squares:
                acc |= prev << sq
            self.reach.append(acc & mask)

    def tick(self) -> None:
        self.used += 1
        if self.used > self.cap:
            raise BoundTooLargeForBudget(f"enumeration exceeded {self.cap} search nodes")

    def reachable(self, slots: int, norm: int) -> bool:
        return norm >= 0 and (self.reach[slots] >> norm) & 1 == 1


def _tails(values: range, slots: int, norm: int, weights: tuple[int, ...], dot: int,
           nonneg: bool, state: _SearchState) -> Iterator[tuple[int, ...]]:
    """Tuples t (lex ascending) with sum t_i^2 == norm and sum w_i t_i == dot."""
    suffix = [0] * (slots + 1)
    for i in range(slots - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i] * weights[i]
    ids = state.suffix_ids
    sid = [ids.setdefault(weights[j:], len(ids)) for j in range(slots + 1)]
    dead = state.dead
    reachable = state.reachable
    prefix: list[int] = []

    def rec(j: int, r: int, p: int) -> Iterator[tuple[int, ...]]:
        if j == slots:
            if r == 0 and p == 0:
                yield tuple(prefix)
            return
        key = (sid[j], r, p)
        if key in dead:
            return
        found = False
        left = slots - j - 1
        w = weights[j]
        s = suffix[j + 1]
        for v in values:
            vv = v * v
            if vv > r:
                if v > 0:
                    break
                continue
            state.tick()
            r2 = r - vv
            if not reachable(left, r2):
                continue
            p2 = p - w * v
            if p2 * p2 > r2 * s:
                continue
            if nonneg and p2 < 0:
                continue
            prefix.append(v)
            for hit in rec(j + 1, r2, p2):
                found = True
                yield hit
            prefix.pop()
        if not found:
            dead.add(key)

    if dot * dot <= norm * suffix[0] and reachable(slots, norm):
        yield from rec(0, norm, dot)


def _canonical_tails(norm: int, slots: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Nonincreasing nonnegative tuples with entries <= bound and squared norm ``norm``, lex ascending."""
    prefix: list[int] = []

    def rec(r: int, k: int, cap: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            if r == 0:
                yield tuple(prefix)
            return
        top = min(cap, isqrt(r))
        # the first remaining entry is the largest, so it carries at least r/k
        lo = 0
        while lo * lo * k < r:
            lo += 1
        for v in range(lo, top + 1):
            prefix.append(v)
            yield from rec(r - v * v, k - 1, v)
            prefix.pop()

    yield from rec(norm, slots, bound)


def _canonical_vectors(spec: LatticeSpec, form: FormKind, value: int,
                       state: _SearchState) -> Iterator[LatticeVector]:
    """Canonical vectors of the box with self-product ``value``, lex ascending."""
    slots = spec.width - 1
    for x0 in range(0, spec.coordinate_bound + 1):
        tail_norm = x0 * x0 - value if form is FormKind.LORENTZIAN else value - x0 * x0
        if not state.reachable(slots, tail_norm):
            continue
        for tail in _canonical_tails(tail_norm, slots, spec.coordinate_bound):
            state.tick()
            yield LatticeVector((x0,) + tail)


def _partners(spec: LatticeSpec, form: FormKind, x: LatticeVector, b: int, c: int,
              state: _SearchState) -> Iterator[LatticeVector]:
    """Vectors y of the box with y.y == c and x.y == b, lex ascending."""
    values = range(spec.low, spec.coordinate_bound + 1)
    slots = spec.width - 1
    weights = tuple(x.coords[1:])
    nonneg = spec.kind is LatticeKind.NONNEGATIVE
    x0 = x[0]
    for y0 in values:
        if form is FormKind.LORENTZIAN:
            # y0^2 - |y'|^2 = c and x0*y0 - <x', y'> = b
            tail_norm, tail_dot = y0 * y0 - c, x0 * y0 - b
        else:
            tail_norm, tail_dot = c - y0 * y0, b - x0 * y0
        if tail_norm < 0:
            continue
        for tail in _tails(values, slots, tail_norm, weights, tail_dot, nonneg, state):
            yield LatticeVector((y0,) + tail)


def brute_search(spec: LatticeSpec, form: FormKind, t: Triple,
                 cap: int = DEFAULT_CAP) -> WitnessPair | None:
    """First witness (x, y) in the box, or None if the box holds none.

    x runs over canonical vectors (nonnegative, tail nonincreasing) in
    lexicographic order, and for each x, y runs over the box in lexicographic
    order. Every witness can be moved to one with canonical x by a symmetry of
    the box and form, so this is exhaustive.
    """
    state = _SearchState(spec, cap)
    for x in _canonical_vectors(spec, form, t.a, state):
        for y in _partners(spec, form, x, t.b, t.c, state):
            pair = WitnessPair(x, y, form, t)
            if not verify_witness(pair):
                raise AssertionError(f"search produced a non-witness {pair}")
            return pair
    return None


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanEntry:
    triple: Triple
    witness: WitnessPair | None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"a": self.triple.a, "b": self.triple.b, "c": self.triple.c,
                             "witnessed": self.witness is not None}
        if self.witness is not None:
            d["x"] = list(self.witness.x.coords)
            d["y"] = list(self.witness.y.coords)
        return d


@dataclass
class ScanReport:
    spec: LatticeSpec
    form: FormKind
    max_b: int
    ac_cap: int | None
    entries: list[ScanEntry] = field(default_factory=list)

    @property
    def unwitnessed(self) -> list[Triple]:
        return [e.triple for e in self.entries if e.witness is None]

    def summary(self) -> dict[str, Any]:
        return {
            "lattice": self.spec.label(),
            "form": self.form.value,
            "bound": self.spec.coordinate_bound,
            "max_b": self.max_b,
            "ac_cap": self.ac_cap,
            "triples": len(self.entries),
            "witnessed": len(self.entries) - len(self.unwitnessed),
            "unwitnessed": len(self.unwitnessed),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(e.to_dict(), sort_keys=True) for e in self.entries]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def scan_triples(form: FormKind, max_b: int, ac_cap: int | None = None) -> list[Triple]:
    """Positive triples with b <= max_b in canonical (b, a, c) order.

    Lorentzian: b^2 >= ac, which already bounds a and c by b^2.
    Euclidean: b^2 <= ac with a, c <= ac_cap.
    """
    out = []
    for b in range(1, max_b + 1):
        if form is FormKind.LORENTZIAN:
            for a in range(1, b * b + 1):
                for c in range(1, b * b // a + 1):
                    out.append(Triple(a, b, c))
        else:
            if ac_cap is None:
                raise ValueError("a Euclidean scan needs ac_cap")
            for a in range(1, ac_cap + 1):
                for c in range(1, ac_cap + 1):
                    if a * c >= b * b:
                        out.append(Triple(a, b, c))
    return out


def _scan_shard(spec: LatticeSpec, form: FormKind, triples: list[Triple],
                cap: int) -> list[ScanEntry]:
    return [ScanEntry(t, brute_search(spec, form, t, cap)) for t in triples]


def completeness_scan(spec: LatticeSpec, form: FormKind, max_b: int, bound: int | None = None, *,
                      ac_cap: int | None = None, shards: int = 1,
                      cap: int = DEFAULT_CAP) -> ScanReport:
    """Search every triple of ``scan_triples`` and record witness or exhaustion.

    ``bound`` overrides the lattice's coordinate bound. For Euclidean scans
    ``ac_cap`` defaults to bound^2, the largest norm the box decides
    conclusively. With ``shards > 1`` the triples are dealt round-robin to
    worker processes and merged back in canonical order, so the report does
    not depend on the shard count.
    """
    if max_b < 1:
        raise ValueError("max_b must be at least 1")
    if shards < 1:
        raise ValueError("shards must be at least 1")
    if bound is not None:
        spec = replace(spec, coordinate_bound=bound)
    if form is FormKind.EUCLIDEAN and ac_cap is None:
        ac_cap = spec.coordinate_bound ** 2
    triples = scan_triples(form, max_b, ac_cap)
    report = ScanReport(spec, form, max_b, ac_cap if form is FormKind.EUCLIDEAN else None)
    if shards == 1:
        report.entries = _scan_shard(spec, form, triples, cap)
        return report
    parts = [triples[i::shards] for i in range(shards)]
    with ProcessPoolExecutor(max_workers=shards) as pool:
        results = list(pool.map(_scan_shard, [spec] * shards, [form] * shards, parts,
                                [cap] * shards))
    merged: list[ScanEntry | None] = [None] * len(triples)
    for i, shard_entries in enumerate(results):
        merged[i::shards] = shard_entries
    report.entries = [e for e in merged if e is not None]
    return report


# ---------------------------------------------------------------------------
# Cross-validation of the constructors
# ---------------------------------------------------------------------------


def hyperbolic_triples(max_b: int) -> list[Triple]:
    return scan_triples(FormKind.LORENTZIAN, max_b)


def cross_validate(max_b: int, builder: Callable[[Triple], WitnessCertificate] = represent_general,
                   cap: int = DEFAULT_CAP) -> tuple[bool, list[dict[str, Any]]]:
    """Check ``builder`` against the brute-force oracle on every positive hyperbolic triple.

    Returns ``(ok, failures)``; each failure names the triple and what went wrong.
    """
    failures: list[dict[str, Any]] = []
    for t in hyperbolic_triples(max_b):
        where = {"a": t.a, "b": t.b, "c": t.c}
        try:
            cert = builder(t)
        except CorrwitError as exc:
            failures.append({**where, "reason": exc.code, "detail": str(exc)})
            continue
        if cert.target != t:
            failures.append({**where, "reason": "WrongTarget"})
            continue
        problems = check_certificate(cert)
        if problems:
            failures.append({**where, "reason": problems[0]["reason"], "problems": problems})
            continue
        if not (is_dj_type(cert.base_x) and is_dj_type(cert.base_y)):
            failures.append({**where, "reason": "NotDJType"})
            continue
        spec = LatticeSpec(LatticeKind.NONNEGATIVE, cert.ambient_n + 1, default_lorentzian_bound(t))
        if brute_search(spec, FormKind.LORENTZIAN, t, cap) is None:
            failures.append({**where, "reason": "OracleFoundNoWitness"})
    return not failures, failures
