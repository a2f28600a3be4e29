"""Acceptance criteria, one test per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import io
import itertools
import json
import random
import time

from corrwit import cli
from corrwit.construct import (
    WitnessCertificate,
    is_dj_type,
    reduce_step,
    replay_trace,
    represent_general,
    sum_of_squares_representations,
)
from corrwit.decide import (
    ClassP2P2,
    MultiDegreeSequence,
    corner_index,
    decide_multiple,
    decide_p2p2,
    log_concave,
    no_internal_zeros,
)
from corrwit.lattice import FormKind, LatticeVector, Triple, WitnessPair, inner, is_time_like, verify_witness
from corrwit.oracle import LatticeKind, LatticeSpec, brute_search, completeness_scan

E, L = FormKind.EUCLIDEAN, FormKind.LORENTZIAN


def test_criterion_1_integer_four_space_counterexample():
    start = time.perf_counter()
    spec = LatticeSpec(LatticeKind.ALL_INTEGERS, 4, 5)
    assert brute_search(spec, E, Triple(1, 2, 19)) is None
    assert sum_of_squares_representations(19, 4) == [(4, 1, 1, 1), (3, 3, 1, 0)]
    assert time.perf_counter() - start < 1.0


def test_criterion_2_natural_eight_space_counterexample():
    start = time.perf_counter()
    spec = LatticeSpec(LatticeKind.NONNEGATIVE, 8, 3)
    assert brute_search(spec, E, Triple(8, 1, 8)) is None
    assert len(sum_of_squares_representations(8, 8)) == 3
    assert time.perf_counter() - start < 1.0


def test_criterion_3_constructor_soundness_sweep():
    start = time.perf_counter()
    failures, count = [], 0
    for b in range(1, 26):
        for a in range(1, min(625, b * b) + 1):
            for c in range(1, min(625, b * b // a) + 1):
                t = Triple(a, b, c)
                count += 1
                cert = represent_general(t)
                trace = replay_trace(cert)
                final = trace[-1]
                ok = (
                    verify_witness(WitnessPair(final.x, final.y, L, t))
                    and is_dj_type(cert.base_x)
                    and is_dj_type(cert.base_y)
                    and all(s.x.is_nonnegative() and s.y.is_nonnegative() for s in trace)
                )
                if not ok:
                    failures.append(t)
    elapsed = time.perf_counter() - start
    print(f"{count} triples in {elapsed:.1f}s")
    assert count > 30_000
    assert failures == []
    assert elapsed < 60.0


def test_criterion_4_discriminant_invariance():
    rng = random.Random(20240611)
    done = 0
    while done < 10_000:
        b = rng.randint(2, 10**12)
        a = rng.randint(1, b * b)
        c = rng.randint(1, b * b // a)
        t = Triple(a, b, c)
        if t.linear_regime():
            continue
        reduced, _, _ = reduce_step(t)
        assert reduced.b * reduced.b - reduced.a * reduced.c == b * b - a * c
        done += 1


def test_criterion_5_oracle_agreement_on_nat7():
    spec = LatticeSpec(LatticeKind.NONNEGATIVE, 7, 10)
    start = time.perf_counter()
    single = completeness_scan(spec, L, max_b=8, bound=10)
    elapsed = time.perf_counter() - start
    assert single.unwitnessed == []
    assert len(single.entries) > 0
    assert elapsed < 300.0
    sharded = completeness_scan(spec, L, max_b=8, bound=10, shards=4)
    assert sharded.to_jsonl().encode() == single.to_jsonl().encode()


def p2p2_truth_table(a, b, c):
    # representable exactly when: nonnegative, and either b > 0 with b^2 >= ac,
    # or the class is one of the two unit classes
    if a < 0 or b < 0 or c < 0:
        return False
    if b > 0:
        return b * b >= a * c
    return (a, c) in {(1, 0), (0, 1)}


def test_criterion_6_decision_table_conformance():
    box = range(-2, 11)
    for a, b, c in itertools.product(box, repeat=3):
        assert decide_p2p2(ClassP2P2(a, b, c)).positive is p2p2_truth_table(a, b, c), (a, b, c)
    expected = {(1, 0, 0): True, (0, 0, 1): True, (2, 0, 0): False, (1, 2, 4): True, (1, 2, 5): False}
    for abc, want in expected.items():
        assert decide_p2p2(ClassP2P2(*abc)).positive is want


def non_corner_ambient(length):
    # (n, m, k) whose degree-k slot has ``length`` coefficients and no corner class
    if length == 1:
        return 0, 5, 2
    return length, length, length - 1


def test_criterion_7_log_concavity_predicates():
    assert log_concave((1, 2, 3, 4, 2, 1)) and no_internal_zeros((1, 2, 3, 4, 2, 1))
    assert not no_internal_zeros((1, 0, 1))
    checked = 0
    for length in range(1, 5):
        n, m, k = non_corner_ambient(length)
        for e in itertools.product(range(5), repeat=length):
            s = MultiDegreeSequence(n, m, k, e)
            assert corner_index(s) is None
            expected = any(e) and log_concave(e) and no_internal_zeros(e)
            assert decide_multiple(s).positive is bool(expected), e
            checked += 1
    assert checked == 5 + 25 + 125 + 625


def test_criterion_8_reversed_cauchy_schwarz():
    rng = random.Random(8)
    pairs = violations = 0
    while pairs < 10_000:
        dim = rng.randint(1, 12)
        x = LatticeVector([rng.randint(-1000, 1000) for _ in range(dim)])
        y = LatticeVector([rng.randint(-1000, 1000) for _ in range(dim)])
        if not (is_time_like(x) and is_time_like(y)):
            continue
        pairs += 1
        if inner(L, x, y) ** 2 < inner(L, x, x) * inner(L, y, y):
            violations += 1
    assert violations == 0


def _run(argv, stdin_text=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = cli.main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_9_certificate_round_trip(monkeypatch):
    triples = [Triple(a, b, c) for b in range(1, 40) for a in range(1, b * b + 1)
               for c in range(1, b * b // a + 1)]
    rng = random.Random(9)
    sample = rng.sample(triples, 1000)
    for t in sample:
        code, text, _ = _run(["--format", "json", "witness", str(t.a), str(t.b), str(t.c)])
        assert code == 0
        payload = text.rstrip("\n")
        cert = WitnessCertificate.from_json(payload)
        assert cert.target == t
        assert cert.to_json() == payload
        code, verdict, _ = _run(["--format", "json", "verify"], payload, monkeypatch)
        assert code == 0 and json.loads(verdict)["ok"] is True
        # a second pass through the parser and verifier changes nothing
        again = WitnessCertificate.from_json(cert.to_json())
        assert again.to_json().encode() == payload.encode()
        code, verdict2, _ = _run(["--format", "json", "verify"], again.to_json(), monkeypatch)
        assert code == 0 and verdict2 == verdict
