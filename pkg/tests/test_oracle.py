import itertools

import pytest

from corrwit.construct import WitnessCertificate, represent_general
from corrwit.lattice import FormKind, LatticeVector, Triple, verify_witness
from corrwit.oracle import (
    BoundTooLargeForBudget,
    LatticeKind,
    LatticeSpec,
    brute_search,
    completeness_scan,
    cross_validate,
    is_conclusive,
    scan_triples,
)

E, L = FormKind.EUCLIDEAN, FormKind.LORENTZIAN
NAT, INT = LatticeKind.NONNEGATIVE, LatticeKind.ALL_INTEGERS


def naive_exists(kind, width, bound, form, t):
    """Full-box enumeration with no symmetry reduction or pruning."""
    lo = 0 if kind is NAT else -bound
    box = list(itertools.product(range(lo, bound + 1), repeat=width))

    def ip(x, y):
        s = sum(u * v for u, v in zip(x[1:], y[1:]))
        return x[0] * y[0] + s if form is E else x[0] * y[0] - s

    xs = [x for x in box if ip(x, x) == t.a]
    ys = [y for y in box if ip(y, y) == t.c]
    return any(ip(x, y) == t.b for x in xs for y in ys)


def test_integer_four_space_counterexample():
    assert brute_search(LatticeSpec(INT, 4, 5), E, Triple(1, 2, 19)) is None
    assert is_conclusive(LatticeSpec(INT, 4, 5), E, Triple(1, 2, 19))


def test_natural_eight_space_counterexample():
    assert brute_search(LatticeSpec(NAT, 8, 3), E, Triple(8, 1, 8)) is None


def test_found_witnesses_verify():
    w = brute_search(LatticeSpec(NAT, 7, 12), L, Triple(3, 4, 2))
    assert w is not None and verify_witness(w)
    w = brute_search(LatticeSpec(INT, 4, 5), E, Triple(1, 1, 19))
    assert w is not None and verify_witness(w)


def test_one_dimensional_lattice():
    spec = LatticeSpec(NAT, 1, 2)
    assert brute_search(spec, L, Triple(1, 1, 1)) is not None
    assert brute_search(spec, L, Triple(1, 1, 2)) is None
    report = completeness_scan(spec, L, max_b=1)
    assert [e.triple.as_tuple() for e in report.entries] == [(1, 1, 1)]
    assert report.unwitnessed == []
    report = completeness_scan(spec, L, max_b=2)
    assert Triple(1, 2, 1) in report.unwitnessed


CASES = [
    (kind, width, bound, form)
    for kind in (NAT, INT)
    for form in (E, L)
    for width, bound in ((1, 4), (2, 3), (3, 2))
]


@pytest.mark.parametrize("kind,width,bound,form", CASES)
def test_pruned_search_matches_naive_enumeration(kind, width, bound, form):
    spec = LatticeSpec(kind, width, bound)
    for a in range(-3, 7):
        for c in range(-3, 7):
            for b in range(-6, 7):
                t = Triple(a, b, c)
                w = brute_search(spec, form, t)
                assert (w is not None) == naive_exists(kind, width, bound, form, t), t
                if w is not None:
                    assert verify_witness(w)
                    assert all(spec.low <= v <= bound for v in w.x.coords + w.y.coords)


def test_search_is_deterministic():
    spec = LatticeSpec(NAT, 7, 6)
    first = brute_search(spec, L, Triple(5, 3, 1))
    assert first == brute_search(spec, L, Triple(5, 3, 1))


def test_budget_exhaustion_raises():
    spec, t = LatticeSpec(NAT, 7, 30), Triple(1, 30, 7)
    with pytest.raises(BoundTooLargeForBudget):
        brute_search(spec, L, t, cap=10)
    assert verify_witness(brute_search(spec, L, t, cap=10_000))


def test_scan_triples_order():
    ts = [t.as_tuple() for t in scan_triples(L, 2)]
    assert ts == [(1, 1, 1), (1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 2, 4),
                  (2, 2, 1), (2, 2, 2), (3, 2, 1), (4, 2, 1)]
    with pytest.raises(ValueError):
        scan_triples(E, 2)


def test_euclidean_z4_scan_finds_known_gap():
    report = completeness_scan(LatticeSpec(INT, 4, 5), E, max_b=2, ac_cap=19)
    assert Triple(1, 2, 19) in report.unwitnessed
    assert report.summary()["ac_cap"] == 19


def test_nat7_scan_small():
    report = completeness_scan(LatticeSpec(NAT, 7, 6), L, max_b=4)
    assert report.unwitnessed == []


def test_sharded_scan_is_byte_identical():
    spec = LatticeSpec(NAT, 3, 4)
    single = completeness_scan(spec, L, max_b=3)
    assert single.unwitnessed  # N^3 is too small, so the report has both kinds of line
    for shards in (2, 3):
        assert completeness_scan(spec, L, max_b=3, shards=shards).to_jsonl() == single.to_jsonl()


def test_cross_validate_small():
    ok, failures = cross_validate(1)
    assert ok and failures == []


def test_cross_validate_up_to_ten():
    ok, failures = cross_validate(10)
    assert ok, failures[:5]


def test_cross_validate_catches_broken_builder():
    def broken(t):
        cert = represent_general(t)
        bad = LatticeVector((cert.base_x[0] + 1,) + cert.base_x.coords[1:])
        return WitnessCertificate(bad, cert.base_y, cert.moves, cert.target, cert.ambient_n)

    ok, failures = cross_validate(2, builder=broken)
    assert not ok
    assert {f["reason"] for f in failures} <= {"ReplayMismatch", "NotDJType"}
    assert len(failures) == len(scan_triples(L, 2))
