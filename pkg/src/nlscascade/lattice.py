"""Exact integer resonance geometry on the lattice Z^2.

Everything here is pure integer arithmetic: the resonance factor of a
frequency quadruple, parallelogram/rectangle detection, enumeration of the
interaction triples that drive the cubic mode equations, and the closure /
pasting predicates used to certify that a frequency set is dynamically
self-contained.  Python integers are arbitrary precision, so squares never
overflow for any representable coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

# Cutoff sentinel: a cutoff of UNBOUNDED keeps every interaction (the full
# cubic nonlinearity); an integer R >= 0 keeps |omega4| <= R only.
UNBOUNDED = None

Cutoff = Optional[int]


class Frequency(NamedTuple):
    """A lattice point n in Z^2 indexing one Fourier mode."""

    x: int
    y: int

    def __add__(self, other):
        return Frequency(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Frequency(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Frequency(-self.x, -self.y)

    def scale(self, k: int) -> "Frequency":
        return Frequency(k * self.x, k * self.y)

    def dot(self, other) -> int:
        return self.x * other.x + self.y * other.y

    def norm2(self) -> int:
        """|n|^2, exact."""
        return self.x * self.x + self.y * self.y

    def to_json(self):
        return [self.x, self.y]

    @classmethod
    def from_json(cls, pair) -> "Frequency":
        x, y = pair
        if x != int(x) or y != int(y):
            raise ValueError(f"frequency coordinates must be integers, got {pair!r}")
        return cls(int(x), int(y))


def freq_set_to_json(freqs: Iterable[Frequency]):
    """JSON form of a frequency set: a sorted array of [x, y] pairs."""
    return [list(n) for n in sorted(freqs)]


def freq_set_from_json(pairs) -> frozenset[Frequency]:
    return frozenset(Frequency.from_json(p) for p in pairs)


def check_cutoff(cutoff: Cutoff) -> Cutoff:
    if cutoff is UNBOUNDED:
        return cutoff
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise ValueError(f"cutoff must be UNBOUNDED or an integer >= 0, got {cutoff!r}")
    return cutoff


def cutoff_keeps(cutoff: Cutoff, om4: int) -> bool:
    """Whether an interaction with this resonance factor is retained."""
    return cutoff is UNBOUNDED or abs(om4) <= cutoff


def omega4(n1: Frequency, n2: Frequency, n3: Frequency, n4: Frequency) -> int:
    """Resonance factor |n1|^2 - |n2|^2 + |n3|^2 - |n4|^2, exact."""
    return n1.norm2() - n2.norm2() + n3.norm2() - n4.norm2()


def complete_parallelogram(n1: Frequency, n2: Frequency, n3: Frequency) -> Frequency:
    """Fourth vertex n1 - n2 + n3 of the parallelogram (n1, n2, n3, .)."""
    return Frequency(n1.x - n2.x + n3.x, n1.y - n2.y + n3.y)


def rectangle_defect(n1: Frequency, n2: Frequency, n3: Frequency) -> int:
    """omega4 of the completed parallelogram; 0 iff it is a rectangle.

    Equals -2 (n1 - n) . (n3 - n) with n = n1 - n2 + n3, so it measures how
    far the parallelogram is from having right angles (it may collapse to a
    segment; that still counts as a parallelogram here).
    """
    n = complete_parallelogram(n1, n2, n3)
    return omega4(n1, n2, n3, n)


@dataclass(frozen=True)
class InteractionTriple:
    """One retained interaction (n1, n2, n3) feeding the mode at target."""

    n1: Frequency
    n2: Frequency
    n3: Frequency
    target: Frequency
    omega4: int

    def __post_init__(self):
        if self.target != complete_parallelogram(self.n1, self.n2, self.n3):
            raise ValueError("target must equal n1 - n2 + n3")
        if self.omega4 != omega4(self.n1, self.n2, self.n3, self.target):
            raise ValueError("omega4 inconsistent with the vertices")
        if self.n1 == self.target or self.n3 == self.target:
            raise ValueError("self-interactions (n1 or n3 equal to target) are excluded")

    @classmethod
    def build(cls, n1: Frequency, n2: Frequency, n3: Frequency) -> "InteractionTriple":
        target = complete_parallelogram(n1, n2, n3)
        return cls(n1, n2, n3, target, omega4(n1, n2, n3, target))

    def to_json(self):
        return {
            "n1": self.n1.to_json(),
            "n2": self.n2.to_json(),
            "n3": self.n3.to_json(),
            "target": self.target.to_json(),
            "omega4": self.omega4,
        }


@dataclass(frozen=True)
class ParallelogramWitness:
    """A parallelogram violating a closure or pasting predicate."""

    triple: tuple[Frequency, Frequency, Frequency]
    fourth_vertex: Frequency
    omega4: int

    def to_json(self):
        return {
            "triple": [n.to_json() for n in self.triple],
            "fourth_vertex": self.fourth_vertex.to_json(),
            "omega4": self.omega4,
        }


def enumerate_triples(
    target: Frequency, support: Iterable[Frequency], cutoff: Cutoff
) -> list[InteractionTriple]:
    """All retained interactions from `support` into `target`.

    Returns the ordered triples (n1, n2, n3) in support^3 with
    n1 - n2 + n3 = target, n1 != target, n3 != target and |omega4| within
    the cutoff, in lexicographic order of (n1, n3).  Implemented by
    iterating (n1, n3) and testing membership of n2 = n1 + n3 - target.
    """
    check_cutoff(cutoff)
    pts = sorted(set(support))
    members = set(pts)
    out = []
    for n1 in pts:
        if n1 == target:
            continue
        for n3 in pts:
            if n3 == target:
                continue
            n2 = Frequency(n1.x + n3.x - target.x, n1.y + n3.y - target.y)
            if n2 not in members:
                continue
            om = omega4(n1, n2, n3, target)
            if cutoff_keeps(cutoff, om):
                out.append(InteractionTriple(n1, n2, n3, target, om))
    return out


def find_rectangles(points: Iterable[Frequency]):
    """All rectangles with four distinct vertices in the given set.

    A rectangle is an unordered 4-set whose two diagonals share midpoint and
    length (equivalently: a + c = b + d with (a-b).(c-b) = 0).  Each one is
    reported once as (v, u1, w, u2): smallest vertex v first, its two
    neighbours u1 < u2 on either side, opposite vertex w third.
    """
    pts = sorted(set(points))
    # Diagonal pairs bucketed by (vertex sum, squared diagonal length): two
    # distinct pairs in one bucket are the two diagonals of a rectangle.
    buckets: dict[tuple, list[tuple[Frequency, Frequency]]] = {}
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            key = (p.x + q.x, p.y + q.y, (p - q).norm2())
            buckets.setdefault(key, []).append((p, q))
    out = []
    for pairs in buckets.values():
        for i, (a, c) in enumerate(pairs):
            for b, d in pairs[i + 1 :]:
                v = min(a, b, c, d)
                if v in (a, c):
                    w = c if v == a else a
                    u1, u2 = (b, d) if b < d else (d, b)
                else:
                    w = d if v == b else b
                    u1, u2 = (a, c) if a < c else (c, a)
                out.append((v, u1, w, u2))
    out.sort()
    return out


def check_r_closure(points: Iterable[Frequency], cutoff: Cutoff) -> Optional[ParallelogramWitness]:
    """Closure predicate: no retained interaction escapes the set.

    Passes (returns None) iff every triple (n1, n2, n3) in the set with
    n1 != n2, n2 != n3 (these force the fourth vertex back onto n3 or n1)
    has its fourth vertex n4 = n1 - n2 + n3 inside the set whenever
    |omega4| is within the cutoff.  Collapsed parallelograms with n1 = n3
    are scanned too: they are genuine interactions of the mode equations.
    On failure returns the first witness in lexicographic scan order.
    """
    check_cutoff(cutoff)
    pts = sorted(set(points))
    members = set(pts)
    for n1 in pts:
        for n2 in pts:
            if n2 == n1:
                continue
            for n3 in pts:
                if n3 == n2:
                    continue
                n4 = complete_parallelogram(n1, n2, n3)
                if n4 in members:
                    continue
                om = omega4(n1, n2, n3, n4)
                if cutoff_keeps(cutoff, om):
                    return ParallelogramWitness((n1, n2, n3), n4, om)
    return None


def _pair_point_violations(pair_set, point_set, cutoff: int):
    """Violations with two vertices from pair_set and one from point_set."""
    out = []
    firsts = sorted(pair_set)
    seconds = sorted(point_set)
    for i, a in enumerate(firsts):
        # Collapsed parallelogram (a, c, a, 2a - c): retained in the mode
        # equations, so it must be separated as well.
        for c in seconds:
            quad = (a, c, a)
            n4 = complete_parallelogram(*quad)
            om = omega4(*quad, n4)
            if abs(om) <= cutoff:
                out.append(ParallelogramWitness(quad, n4, om))
        for b in firsts[i + 1 :]:
            for c in seconds:
                # The three parallelograms on {a, b, c} with the pair either
                # adjacent (two orientations) or diagonal.
                for quad in ((a, b, c), (b, a, c), (a, c, b)):
                    n4 = complete_parallelogram(*quad)
                    om = omega4(*quad, n4)
                    if abs(om) <= cutoff:
                        out.append(ParallelogramWitness(quad, n4, om))
    return out


def find_connecting_parallelograms(
    s1: Iterable[Frequency], s2: Iterable[Frequency], cutoff: int
) -> list[ParallelogramWitness]:
    """All parallelograms connecting two disjoint sets at eccentricity <= cutoff.

    A violation is any parallelogram with two vertices in one set, one in the
    other, and |omega4| <= cutoff (boundary included: pasting needs the
    interaction strictly absent from the retained set).  An empty result
    means solutions supported on the two sets superpose exactly.
    """
    a = frozenset(s1)
    b = frozenset(s2)
    if a & b:
        raise ValueError(f"sets must be disjoint, share {sorted(a & b)[:3]}")
    if cutoff is UNBOUNDED or not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise ValueError("pasting predicate needs a finite integer cutoff >= 0")
    return _pair_point_violations(a, b, cutoff) + _pair_point_violations(b, a, cutoff)
