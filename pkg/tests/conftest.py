"""Shared brute-force oracles: slow, literal transcriptions of the defining
conditions, kept independent of the library's enumeration shortcuts."""

import itertools

from nlscascade.lattice import (
    UNBOUNDED,
    Frequency,
    complete_parallelogram,
    cutoff_keeps,
    omega4,
)


def naive_triples(target, support, cutoff):
    """All ordered (n1, n2, n3) in support^3 with n1 - n2 + n3 = target,
    n1 != target, n3 != target and |omega4| within the cutoff."""
    out = []
    pts = sorted(support)
    for n1, n2, n3 in itertools.product(pts, repeat=3):
        if complete_parallelogram(n1, n2, n3) != target:
            continue
        if n1 == target or n3 == target:
            continue
        if cutoff_keeps(cutoff, omega4(n1, n2, n3, target)):
            out.append((n1, n2, n3))
    return sorted(out, key=lambda t: (t[0], t[2]))


def naive_rectangles(points):
    """All 4-subsets forming a rectangle, as frozensets."""
    out = set()
    for quad in itertools.combinations(sorted(points), 4):
        for a, b, c, d in itertools.permutations(quad):
            if a + c == b + d and (a - b).dot(c - b) == 0:
                out.add(frozenset(quad))
                break
    return out


def naive_closure_violations(points, cutoff):
    """All (triple, fourth) escaping the set with |omega4| within cutoff,
    restricted to interaction-relevant triples (fourth vertex != n1, n3)."""
    pts = sorted(points)
    members = set(pts)
    out = []
    for n1, n2, n3 in itertools.product(pts, repeat=3):
        n4 = complete_parallelogram(n1, n2, n3)
        if n4 in members or n4 == n1 or n4 == n3:
            continue
        if cutoff_keeps(cutoff, omega4(n1, n2, n3, n4)):
            out.append(((n1, n2, n3), n4))
    return out


def naive_mixed_interactions(s1, s2, cutoff):
    """All retained interaction triples over s1 | s2 that mix the two sets.

    These are exactly the terms that break superposition of solutions
    supported on s1 and s2, whatever mode they feed.
    """
    union = sorted(set(s1) | set(s2))
    s1 = frozenset(s1)
    out = []
    for n1, n2, n3 in itertools.product(union, repeat=3):
        target = complete_parallelogram(n1, n2, n3)
        if n1 == target or n3 == target:
            continue
        member = [n in s1 for n in (n1, n2, n3)]
        if all(member) or not any(member):
            continue
        if cutoff_keeps(cutoff, omega4(n1, n2, n3, target)):
            out.append((n1, n2, n3))
    return out


def random_frequencies(rng, count, span):
    return [
        Frequency(int(x), int(y))
        for x, y in rng.integers(-span, span + 1, size=(count, 2))
    ]
