import json

import numpy as np
import pytest

from nlscascade.lattice import (
    UNBOUNDED,
    Frequency,
    InteractionTriple,
    check_r_closure,
    complete_parallelogram,
    enumerate_triples,
    find_connecting_parallelograms,
    find_rectangles,
    freq_set_from_json,
    freq_set_to_json,
    omega4,
    rectangle_defect,
)
from conftest import (
    naive_closure_violations,
    naive_mixed_interactions,
    naive_rectangles,
    naive_triples,
    random_frequencies,
)

F = Frequency


def test_omega4_examples():
    assert omega4(F(3, -7), F(3, -7), F(3, -7), F(3, -7)) == 0
    assert omega4(F(0, 0), F(1, 1), F(2, 0), F(1, -1)) == 0
    assert omega4(F(1, 0), F(0, 0), F(2, 0), F(3, 0)) == -4


def test_omega4_huge_coordinates_exact():
    big = 2**30
    n = F(big, big)
    assert omega4(n, F(0, 0), n, F(0, 0)) == 2 * (2 * big**2)


def test_complete_parallelogram_examples():
    assert complete_parallelogram(F(1, 1), F(0, 0), F(1, -1)) == F(2, 0)
    assert complete_parallelogram(F(0, 0), F(1, 0), F(1, 0)) == F(0, 0)
    for n in (F(5, -3), F(0, 0)):
        for m in (F(2, 2), F(-1, 7)):
            assert complete_parallelogram(n, n, m) == m


def test_rectangle_defect_examples():
    assert rectangle_defect(F(1, 1), F(0, 0), F(1, -1)) == 0
    assert rectangle_defect(F(1, 0), F(0, 0), F(2, 0)) == -4
    assert rectangle_defect(F(0, 1), F(0, 0), F(1, 0)) == 0


def test_rectangle_defect_identity_random():
    rng = np.random.default_rng(1)
    for _ in range(2000):
        n1, n2, n3 = random_frequencies(rng, 3, 1000)
        n = complete_parallelogram(n1, n2, n3)
        assert rectangle_defect(n1, n2, n3) == -2 * (n1 - n).dot(n3 - n)


def test_omega4_translation_invariance_on_parallelograms():
    rng = np.random.default_rng(2)
    for _ in range(500):
        n1, n2, n3, w = random_frequencies(rng, 4, 1000)
        n4 = complete_parallelogram(n1, n2, n3)
        assert omega4(n1, n2, n3, n4) == omega4(n1 - w, n2 - w, n3 - w, n4 - w)


def test_enumerate_triples_square_resonant():
    support = {F(0, 0), F(1, 1), F(2, 0), F(1, -1)}
    got = enumerate_triples(F(0, 0), support, 0)
    assert [(t.n1, t.n2, t.n3) for t in got] == [
        (F(1, -1), F(2, 0), F(1, 1)),
        (F(1, 1), F(2, 0), F(1, -1)),
    ]
    assert all(t.omega4 == 0 for t in got)


def test_enumerate_triples_self_interaction_excluded():
    n = F(3, 1)
    assert enumerate_triples(n, {n}, UNBOUNDED) == []


def test_enumerate_triples_collinear_unbounded():
    # Three aligned modes; includes the collapsed-segment triple
    # ((2,0),(1,0),(2,0)), which the defining brute force also finds.
    got = enumerate_triples(F(3, 0), {F(1, 0), F(2, 0), F(0, 0)}, UNBOUNDED)
    assert [(t.n1, t.n2, t.n3, t.omega4) for t in got] == [
        (F(1, 0), F(0, 0), F(2, 0), -4),
        (F(2, 0), F(0, 0), F(1, 0), -4),
        (F(2, 0), F(1, 0), F(2, 0), -2),
    ]


@pytest.mark.parametrize("cutoff", [0, 2, UNBOUNDED])
def test_enumerate_triples_matches_brute_force(cutoff):
    rng = np.random.default_rng(3)
    for _ in range(30):
        support = set(random_frequencies(rng, 10, 4))
        target = random_frequencies(rng, 1, 4)[0]
        got = [(t.n1, t.n2, t.n3) for t in enumerate_triples(target, support, cutoff)]
        assert got == naive_triples(target, support, cutoff)


def test_enumerate_triples_cutoff_nesting_and_symmetry():
    rng = np.random.default_rng(4)
    for _ in range(20):
        support = set(random_frequencies(rng, 12, 5))
        target = random_frequencies(rng, 1, 5)[0]
        tight = {(t.n1, t.n2, t.n3) for t in enumerate_triples(target, support, 0)}
        mid = {(t.n1, t.n2, t.n3) for t in enumerate_triples(target, support, 3)}
        full = {(t.n1, t.n2, t.n3) for t in enumerate_triples(target, support, UNBOUNDED)}
        assert tight <= mid <= full
        assert {(a, b, c) for (c, b, a) in full} == full


def test_interaction_triple_validation():
    with pytest.raises(ValueError):
        InteractionTriple(F(1, 0), F(0, 0), F(2, 0), F(0, 0), -4)
    with pytest.raises(ValueError):
        InteractionTriple(F(3, 0), F(0, 0), F(2, 0), F(3, 0), 0)


def test_find_rectangles_examples():
    square = {F(0, 0), F(1, 1), F(2, 0), F(1, -1)}
    got = find_rectangles(square)
    assert got == [(F(0, 0), F(1, -1), F(2, 0), F(1, 1))]
    assert find_rectangles({F(0, 0), F(1, 0), F(2, 0)}) == []
    box = {F(0, 0), F(3, 0), F(0, 1), F(3, 1), F(1, 5)}
    got = find_rectangles(box)
    assert len(got) == 1
    assert frozenset(got[0]) == frozenset({F(0, 0), F(3, 0), F(0, 1), F(3, 1)})


def test_find_rectangles_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(25):
        pts = set(random_frequencies(rng, 9, 3))
        got = {frozenset(r) for r in find_rectangles(pts)}
        assert got == naive_rectangles(pts)
        for v, u1, w, u2 in find_rectangles(pts):
            assert v == min(v, u1, w, u2)
            assert u1 < u2
            assert v + w == u1 + u2
            assert (v - u1).dot(w - u1) == 0


def test_check_r_closure_examples():
    square = {F(0, 0), F(1, 1), F(2, 0), F(1, -1)}
    assert check_r_closure(square, 0) is None
    w = check_r_closure({F(0, 0), F(1, 1), F(2, 0)}, 0)
    assert w is not None
    assert w.fourth_vertex == F(1, -1)
    assert w.omega4 == 0
    assert check_r_closure({F(7, -2)}, 0) is None
    assert check_r_closure({F(7, -2)}, UNBOUNDED) is None


def test_check_r_closure_matches_brute_force():
    rng = np.random.default_rng(6)
    for cutoff in (0, 2, 5):
        for _ in range(25):
            pts = set(random_frequencies(rng, 8, 3))
            witness = check_r_closure(pts, cutoff)
            naive = naive_closure_violations(pts, cutoff)
            assert (witness is None) == (len(naive) == 0)
            if witness is not None:
                n1, n2, n3 = witness.triple
                assert complete_parallelogram(n1, n2, n3) == witness.fourth_vertex
                assert witness.fourth_vertex not in pts
                assert abs(witness.omega4) <= cutoff


def test_connecting_parallelograms_examples():
    assert find_connecting_parallelograms({F(0, 0)}, {F(5, 0)}, 17) == []
    got = find_connecting_parallelograms({F(0, 1), F(1, 0)}, {F(0, 0)}, 0)
    assert len(got) == 1
    assert got[0].fourth_vertex == F(1, 1)
    assert got[0].omega4 == 0


def test_connecting_parallelograms_square_vs_far_mode():
    # The exhaustive scan finds one genuine axis-aligned rectangle
    # (1,-1),(1,1),(100,1),(100,-1) joining the two sets.
    square = {F(0, 0), F(1, 1), F(2, 0), F(1, -1)}
    got = find_connecting_parallelograms(square, {F(100, 1)}, 1)
    assert len(got) == 1
    assert got[0].omega4 == 0
    assert got[0].fourth_vertex == F(100, -1)


def test_connecting_parallelograms_overlap_is_error():
    with pytest.raises(ValueError):
        find_connecting_parallelograms({F(0, 0), F(1, 0)}, {F(0, 0)}, 0)


def test_connecting_parallelograms_boundary_counts_as_violation():
    # |omega4| == cutoff must be flagged: pasting needs the interaction
    # strictly absent from the retained set.
    s1 = {F(0, 0), F(1, 0)}
    s2 = {F(0, 1)}
    oms = [w.omega4 for w in find_connecting_parallelograms(s1, s2, 2)]
    assert -2 in oms


def test_connecting_empty_iff_no_mixed_interaction():
    rng = np.random.default_rng(7)
    for cutoff in (0, 2, 4):
        for _ in range(40):
            pts = random_frequencies(rng, 7, 3)
            s1 = set(pts[:4])
            s2 = set(pts[4:]) - s1
            if not s2 or not s1:
                continue
            witnesses = find_connecting_parallelograms(s1, s2, cutoff)
            mixed = naive_mixed_interactions(s1, s2, cutoff)
            assert (len(witnesses) == 0) == (len(mixed) == 0)


def test_union_closure_from_parts_and_separation():
    rng = np.random.default_rng(8)
    tried = 0
    for _ in range(200):
        pts = random_frequencies(rng, 6, 3)
        s1 = set(pts[:3])
        shift = F(int(rng.integers(20, 40)), int(rng.integers(20, 40)))
        s2 = {n + shift for n in pts[3:]}
        if s1 & s2:
            continue
        cutoff = int(rng.integers(0, 3))
        if check_r_closure(s1, cutoff) is not None:
            continue
        if check_r_closure(s2, cutoff) is not None:
            continue
        if find_connecting_parallelograms(s1, s2, cutoff):
            continue
        tried += 1
        assert check_r_closure(s1 | s2, cutoff) is None
    assert tried >= 10


def test_frequency_json_round_trip():
    pts = {F(0, 0), F(-3, 7)}
    packed = json.dumps(freq_set_to_json(pts))
    assert freq_set_from_json(json.loads(packed)) == pts
    with pytest.raises(ValueError):
        Frequency.from_json([1.5, 0])
