import json

import numpy as np
import pytest

from nlscascade.genset import (
    GenerationalSet,
    NuclearFamily,
    affine_place,
    build_lambda0,
    choose_v0,
    find_nuclear_families,
    generation_weight_ratio,
    norm_explosion_ratio,
    seed_family_p2,
    separate_from,
    smallest_separated_translate,
    verify_properties,
)
from nlscascade.lattice import UNBOUNDED, Frequency, check_r_closure
from conftest import random_frequencies

F = Frequency

# First result of the deterministic backtracking search at P=3, box=4;
# regenerated by test_build_lambda0_p3_search below.
LAMBDA0_P3 = GenerationalSet.from_json(
    {
        "generations": [
            [[-4, -1], [-3, -2], [3, 2], [4, 1]],
            [[-2, 3], [-1, 4], [1, -4], [2, -3]],
            [[-2, -4], [-1, -3], [1, 3], [2, 4]],
        ]
    }
)


def test_generational_set_disjointness_enforced():
    with pytest.raises(ValueError):
        GenerationalSet((frozenset({F(0, 0)}), frozenset({F(0, 0)})))


def test_seed_family_examples():
    g = seed_family_p2()
    assert g.p == 2
    fams = find_nuclear_families(g)
    assert len(fams) == 1
    f = fams[0]
    assert {f.parent1, f.parent2} == {F(0, 0), F(2, 0)}
    assert {f.child1, f.child2} == {F(1, -1), F(1, 1)}
    assert check_r_closure(g.union(), 0) is None
    assert verify_properties(g, 0).passed


def test_find_nuclear_families_needs_two_parents():
    g = GenerationalSet((frozenset({F(0, 0)}), frozenset({F(1, 1)})))
    assert find_nuclear_families(g) == []


def test_find_nuclear_families_dilation():
    g = affine_place(seed_family_p2(), 7, F(0, 0))
    fams = find_nuclear_families(g)
    assert len(fams) == 1
    assert {fams[0].parent1, fams[0].parent2} == {F(0, 0), F(14, 0)}


def test_nuclear_family_validation():
    with pytest.raises(ValueError):
        NuclearFamily(F(0, 0), F(2, 0), F(1, -1), F(1, 2), 1)  # not a rectangle
    with pytest.raises(ValueError):
        NuclearFamily(F(2, 0), F(0, 0), F(1, -1), F(1, 1), 1)  # not canonical


def test_verify_properties_spec_mutations():
    moved = GenerationalSet(
        (
            frozenset({F(0, 0), F(2, 0), F(1, 1)}),
            frozenset({F(1, -1)}),
        )
    )
    rep = verify_properties(moved, 0)
    assert not rep.passed
    assert "parents_siblings" in rep.failures()
    assert rep.checks["parents_siblings"].witness is not None

    extra = GenerationalSet(
        (
            frozenset({F(0, 0), F(2, 0)}),
            frozenset({F(1, -1), F(1, 1), F(0, 2)}),
        )
    )
    rep = verify_properties(extra, 0)
    assert not rep.passed
    assert "parents_siblings" in rep.failures()
    # (0,2) also opens the 2x2 box through (0,0),(2,0): closure breaks too.
    assert "closure" in rep.failures()


def test_verify_properties_p3_set():
    rep = verify_properties(LAMBDA0_P3, 0, s=2.0)
    assert rep.passed
    assert rep.generation_sizes == (4, 4, 4)
    assert len(find_nuclear_families(LAMBDA0_P3)) == 4
    assert rep.norm_explosion is None  # needs P >= 6


def test_verify_report_json_round_trips():
    rep = verify_properties(seed_family_p2(), 0, forbidden_partner={F(50, 3)})
    payload = json.loads(json.dumps(rep.to_json()))
    assert payload["passed"] is True
    assert set(payload["checks"]) >= {
        "closure",
        "r_closure",
        "spouse_children",
        "parents_siblings",
        "non_degeneracy",
        "faithfulness",
        "rectangular_structure",
        "partner_separation",
    }


def test_norm_explosion_ratio():
    def singleton_gens(points):
        return GenerationalSet(tuple(frozenset({F(*p)}) for p in points))

    g = singleton_gens([(10, 0), (11, 0), (1, 0), (4, 0), (12, 0), (13, 0)])
    assert norm_explosion_ratio(g, 1.0) == pytest.approx(16.0)
    # identical generations 3 and P-2 up to |n|^2 multiset
    g = singleton_gens([(10, 0), (11, 0), (3, 4), (5, 0), (12, 0), (13, 0)])
    assert norm_explosion_ratio(g, 1.7) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        norm_explosion_ratio(seed_family_p2(), 1.0)
    g = singleton_gens([(10, 0), (11, 0), (0, 0), (4, 0), (12, 0), (13, 0)])
    with pytest.raises(ValueError):
        norm_explosion_ratio(g, 1.0)


def test_norm_explosion_dilation_invariance():
    pts = [(10, 0), (11, 0), (1, 2), (4, -1), (12, 0), (13, 0)]
    g = GenerationalSet(tuple(frozenset({F(*p)}) for p in pts))
    base = norm_explosion_ratio(g, 1.3)
    dil = affine_place(g, 5, F(0, 0))
    assert norm_explosion_ratio(dil, 1.3) == pytest.approx(base, rel=1e-12)


def test_affine_place_examples():
    g = seed_family_p2()
    assert affine_place(g, 1, F(0, 0)) == g
    ga = affine_place(g, 10, F(1, 1))
    assert ga.generations[0] == frozenset({F(-1, -1), F(19, -1)})
    assert ga.generations[1] == frozenset({F(9, -11), F(9, 9)})


def test_affine_place_preserves_structure():
    rng = np.random.default_rng(11)
    for g in (seed_family_p2(), LAMBDA0_P3):
        for _ in range(5):
            n = int(rng.integers(1, 9))
            v = random_frequencies(rng, 1, 30)[0]
            placed = affine_place(g, n, v)
            rep = verify_properties(placed, 0)
            assert rep.passed
            assert len(find_nuclear_families(placed)) == len(find_nuclear_families(g))


def test_affine_place_inflates_closure_cutoff():
    # A 0-closed set dilated by N > R becomes R-closed: every nonzero
    # resonance factor is multiplied by N^2.
    g = seed_family_p2()
    for n, r in ((2, 3), (4, 15), (8, 60)):
        placed = affine_place(g, n, F(3, -2))
        assert check_r_closure(placed.union(), r) is None


def test_choose_v0_seed():
    v0 = choose_v0(seed_family_p2(), set())
    assert v0 == F(-2, -1)
    union = sorted(seed_family_p2().union())
    for i, a in enumerate(union):
        for b in union[i + 1 :]:
            assert v0.dot(a - b) != 0


def test_choose_v0_axis_differences():
    g = GenerationalSet((frozenset({F(0, 0)}), frozenset({F(3, 0)})))
    v0 = choose_v0(g, set())
    assert v0.dot(F(3, 0)) != 0
    # (1,0) is itself admissible for x-axis differences
    assert F(1, 0).dot(F(3, 0)) != 0


def test_choose_v0_singleton_partner_vacuous():
    a = choose_v0(seed_family_p2(), set())
    b = choose_v0(seed_family_p2(), {F(17, 5)})
    assert a == b


def test_separate_from_acceptance_parameters():
    placed = separate_from(seed_family_p2(), {F(0, 0)}, 1, 64, 8)
    assert placed is not None
    assert placed.generations[0] == frozenset({F(16, 8), F(144, 8)})
    assert placed.generations[1] == frozenset({F(80, -56), F(80, 72)})
    rep = verify_properties(placed, 1, forbidden_partner={F(0, 0)})
    assert rep.passed


def test_separate_from_empty_partner_immediate():
    placed = separate_from(seed_family_p2(), set(), 1, 64, 8)
    # first l in the window wins: v = 8 * 1 * (-2, -1)
    assert placed == affine_place(seed_family_p2(), 64, F(-16, -8))


def test_separate_from_precondition_errors():
    with pytest.raises(ValueError, match="N > R"):
        separate_from(seed_family_p2(), {F(0, 0)}, 64, 8, 8)
    with pytest.raises(ValueError, match="R-closure"):
        separate_from(seed_family_p2(), {F(0, 0), F(1, 1), F(2, 0)}, 0, 64, 8)
    with pytest.raises(ValueError, match=r"L\*R\*\|v0\|"):
        separate_from(seed_family_p2(), {F(0, 0)}, 1, 64, 64)


def test_separate_from_r0_with_origin_partner_not_found():
    # R = 0 pins the translation at zero, so the set keeps the origin and
    # never separates from it: a normal not-found, not an error.
    assert separate_from(seed_family_p2(), {F(0, 0)}, 0, 8, 4) is None


def test_smallest_separated_translate():
    g = smallest_separated_translate(seed_family_p2(), {F(0, 0)}, 0)
    assert g.union() == {F(1, 0), F(3, 0), F(2, 1), F(2, -1)}


def test_build_lambda0_p2():
    g = build_lambda0(2, 4)
    assert g is not None
    assert verify_properties(g, 0).passed
    assert g.union() == {F(-1, -1), F(0, 0), F(-1, 0), F(0, -1)}
    assert build_lambda0(2, 0) is None


def test_build_lambda0_validation():
    with pytest.raises(ValueError):
        build_lambda0(5, 4)
    with pytest.raises(ValueError):
        build_lambda0(2, 65)


def test_build_lambda0_p3_exhausts_tiny_box():
    assert build_lambda0(3, 2) is None


@pytest.mark.slow
def test_build_lambda0_p3_search():
    g = build_lambda0(3, 4)
    assert g is not None
    assert g == LAMBDA0_P3
    assert verify_properties(g, 0).passed


def test_generation_weight_ratio_seed():
    g = affine_place(seed_family_p2(), 32, F(0, 0))
    expected = (
        sum((1 + n.norm2()) ** 2 for n in g.generations[1])
        / sum((1 + n.norm2()) ** 2 for n in g.generations[0])
    ) ** 0.5
    assert generation_weight_ratio(g, 2.0, 1, 2) == pytest.approx(expected, rel=1e-14)


def test_set_json_round_trip():
    g = LAMBDA0_P3
    again = GenerationalSet.from_json(json.loads(json.dumps(g.to_json())))
    assert again == g
