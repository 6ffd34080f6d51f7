"""Generational frequency sets and their combinatorial certification.

A generational set is a disjoint union of generations of lattice points in
which mass is meant to cascade: consecutive generations are tied together by
"nuclear families" (rectangles whose diagonals are a parent pair in one
generation and a child pair in the next).  This module extracts families,
verifies the full battery of structural properties a set must satisfy before
the mode dynamics collapses to the finite cascade system, measures the
norm-explosion ratio, and performs the dilate-and-translate placement search
that separates a set from a prescribed partner set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .lattice import (
    UNBOUNDED,
    Cutoff,
    Frequency,
    ParallelogramWitness,
    check_cutoff,
    check_r_closure,
    complete_parallelogram,
    cutoff_keeps,
    find_connecting_parallelograms,
    find_rectangles,
    freq_set_to_json,
    omega4,
)


@dataclass(frozen=True)
class GenerationalSet:
    """Disjoint generations Λ_1, ..., Λ_P of lattice frequencies."""

    generations: tuple[frozenset[Frequency], ...]

    def __post_init__(self):
        gens = tuple(frozenset(g) for g in self.generations)
        object.__setattr__(self, "generations", gens)
        if not gens:
            raise ValueError("need at least one generation")
        total = sum(len(g) for g in gens)
        union = frozenset().union(*gens)
        if len(union) != total:
            raise ValueError("generations must be pairwise disjoint")

    @property
    def p(self) -> int:
        return len(self.generations)

    def union(self) -> frozenset[Frequency]:
        return frozenset().union(*self.generations)

    def generation_of(self, n: Frequency) -> int:
        """1-based generation index of a frequency."""
        for j, gen in enumerate(self.generations, start=1):
            if n in gen:
                return j
        raise KeyError(n)

    def to_json(self):
        return {"generations": [freq_set_to_json(g) for g in self.generations]}

    @classmethod
    def from_json(cls, obj) -> "GenerationalSet":
        gens = tuple(
            frozenset(Frequency.from_json(p) for p in gen) for gen in obj["generations"]
        )
        return cls(gens)


@dataclass(frozen=True)
class NuclearFamily:
    """A rectangle linking a parent pair in Λ_j to a child pair in Λ_{j+1}.

    Canonical form quotients out the trivial permutations: parent1 < parent2
    and child1 < child2 lexicographically.  Parents and children are the two
    diagonals, so parent1 + parent2 = child1 + child2 and the resonance
    factor of the rectangle vanishes.
    """

    parent1: Frequency
    parent2: Frequency
    child1: Frequency
    child2: Frequency
    generation: int

    def __post_init__(self):
        if not (self.parent1 < self.parent2 and self.child1 < self.child2):
            raise ValueError("family not in canonical order")
        if self.parent1 + self.parent2 != self.child1 + self.child2:
            raise ValueError("parents and children are not diagonals of a parallelogram")
        if self.parent1.norm2() + self.parent2.norm2() != self.child1.norm2() + self.child2.norm2():
            raise ValueError("family parallelogram is not a rectangle (omega4 != 0)")
        if len({self.parent1, self.parent2, self.child1, self.child2}) != 4:
            raise ValueError("family vertices must be distinct")

    def to_json(self):
        return {
            "parents": [self.parent1.to_json(), self.parent2.to_json()],
            "children": [self.child1.to_json(), self.child2.to_json()],
            "generation": self.generation,
        }


def find_nuclear_families(g: GenerationalSet) -> list[NuclearFamily]:
    """All nuclear families of the set, sorted by (generation, parent1)."""
    if g.p < 2:
        raise ValueError("family structure needs at least two generations")
    out = []
    for j in range(g.p - 1):
        parents = sorted(g.generations[j])
        children = sorted(g.generations[j + 1])
        # Index child pairs by (diagonal sum, diagonal norm sum): a parent
        # pair with the same key spans the same circle, i.e. a rectangle.
        child_pairs: dict[tuple, list[tuple[Frequency, Frequency]]] = {}
        for a, b in itertools.combinations(children, 2):
            key = (a.x + b.x, a.y + b.y, a.norm2() + b.norm2())
            child_pairs.setdefault(key, []).append((a, b))
        for p, q in itertools.combinations(parents, 2):
            key = (p.x + q.x, p.y + q.y, p.norm2() + q.norm2())
            for a, b in child_pairs.get(key, ()):
                out.append(NuclearFamily(p, q, a, b, j + 1))
    out.sort(key=lambda f: (f.generation, f.parent1, f.parent2))
    return out


@dataclass(frozen=True)
class PropertyCheck:
    passed: bool
    witness: object = None
    note: str = ""

    def to_json(self):
        obj = {"passed": self.passed}
        if self.witness is not None:
            obj["witness"] = self.witness.to_json() if hasattr(self.witness, "to_json") else self.witness
        if self.note:
            obj["note"] = self.note
        return obj


@dataclass
class PropertyReport:
    """Outcome of the structural verification of a generational set."""

    checks: dict[str, PropertyCheck]
    cutoff: Cutoff
    generation_sizes: tuple[int, ...]
    norm_explosion: Optional[float] = None
    min_abs: float = 0.0
    max_abs: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def to_json(self):
        return {
            "passed": self.passed,
            "cutoff": "unbounded" if self.cutoff is UNBOUNDED else self.cutoff,
            "generation_sizes": list(self.generation_sizes),
            "checks": {name: c.to_json() for name, c in self.checks.items()},
            "norm_explosion_ratio": self.norm_explosion,
            "min_abs_frequency": self.min_abs,
            "max_abs_frequency": self.max_abs,
        }


def _family_role_maps(g: GenerationalSet, families: list[NuclearFamily]):
    """Per-frequency family membership as parent and as child."""
    as_parent: dict[Frequency, list[NuclearFamily]] = {}
    as_child: dict[Frequency, list[NuclearFamily]] = {}
    for f in families:
        for p in (f.parent1, f.parent2):
            as_parent.setdefault(p, []).append(f)
        for c in (f.child1, f.child2):
            as_child.setdefault(c, []).append(f)
    return as_parent, as_child


def verify_properties(
    g: GenerationalSet,
    cutoff: Cutoff,
    forbidden_partner: Optional[Iterable[Frequency]] = None,
    s: Optional[float] = None,
) -> PropertyReport:
    """Exhaustively check the structural properties of a generational set.

    Checks, each reported with a first witness on failure:

    * closure            -- rectangle closure (cutoff 0),
    * r_closure          -- closure at the given cutoff,
    * spouse_children    -- every non-final frequency parents exactly one family,
    * parents_siblings   -- every non-initial frequency is a child of exactly one,
    * non_degeneracy     -- no frequency has its sibling equal to its spouse,
    * faithfulness       -- the set contains no rectangles besides families,
    * rectangular_structure -- every retained parallelogram inside the set is
      a genuine rectangle (vacuous at cutoff 0),
    * partner_separation -- no connecting parallelogram to forbidden_partner
      at the cutoff (only when a partner is given; partner {0} is the
      no-rectangle-with-the-origin condition).

    Failures are report entries, never exceptions.  When `s` is given and
    P >= 6 the report also carries the norm-explosion ratio.
    """
    check_cutoff(cutoff)
    if g.p < 2:
        raise ValueError("family-structure verification needs P >= 2")
    union = g.union()
    checks: dict[str, PropertyCheck] = {}

    w = check_r_closure(union, 0)
    checks["closure"] = PropertyCheck(w is None, w)
    if cutoff == 0:
        checks["r_closure"] = checks["closure"]
    else:
        w = check_r_closure(union, cutoff)
        checks["r_closure"] = PropertyCheck(w is None, w)

    families = find_nuclear_families(g)
    as_parent, as_child = _family_role_maps(g, families)

    bad = None
    for j in range(g.p - 1):
        for n in sorted(g.generations[j]):
            k = len(as_parent.get(n, ()))
            if k != 1:
                bad = {"frequency": n.to_json(), "generation": j + 1, "families": k}
                break
        if bad:
            break
    checks["spouse_children"] = PropertyCheck(bad is None, bad)

    bad = None
    for j in range(1, g.p):
        for n in sorted(g.generations[j]):
            k = len(as_child.get(n, ()))
            if k != 1:
                bad = {"frequency": n.to_json(), "generation": j + 1, "families": k}
                break
        if bad:
            break
    checks["parents_siblings"] = PropertyCheck(bad is None, bad)

    # Spouse/sibling comparison only makes sense where both are unique.
    bad = None
    for n in sorted(union):
        pf = as_parent.get(n, ())
        cf = as_child.get(n, ())
        if len(pf) == 1 and len(cf) == 1:
            f = pf[0]
            spouse = f.parent2 if n == f.parent1 else f.parent1
            f = cf[0]
            sibling = f.child2 if n == f.child1 else f.child1
            if spouse == sibling:
                bad = {"frequency": n.to_json(), "spouse": spouse.to_json()}
                break
    checks["non_degeneracy"] = PropertyCheck(bad is None, bad)

    family_rects = set()
    for f in families:
        verts = (f.parent1, f.parent2, f.child1, f.child2)
        family_rects.add(frozenset(verts))
    bad = None
    for rect in find_rectangles(union):
        if frozenset(rect) not in family_rects:
            bad = {"rectangle": [n.to_json() for n in rect]}
            break
    checks["faithfulness"] = PropertyCheck(bad is None, bad)

    checks["rectangular_structure"] = _rectangular_structure(union, cutoff)

    if forbidden_partner is not None:
        partner = frozenset(forbidden_partner)
        if cutoff is UNBOUNDED:
            raise ValueError("partner separation needs a finite cutoff")
        violations = find_connecting_parallelograms(union, partner, cutoff)
        checks["partner_separation"] = PropertyCheck(
            not violations,
            violations[0] if violations else None,
            note=f"{len(violations)} connecting parallelogram(s)" if violations else "",
        )

    ratio = None
    note = ""
    if s is not None:
        try:
            ratio = norm_explosion_ratio(g, s)
        except ValueError as e:
            note = str(e)

    norms = sorted(n.norm2() for n in union)
    report = PropertyReport(
        checks=checks,
        cutoff=cutoff,
        generation_sizes=tuple(len(gen) for gen in g.generations),
        norm_explosion=ratio,
        min_abs=norms[0] ** 0.5,
        max_abs=norms[-1] ** 0.5,
    )
    if note:
        report.checks["norm_explosion"] = PropertyCheck(True, None, note=note)
    return report


def _rectangular_structure(union: frozenset[Frequency], cutoff: Cutoff) -> PropertyCheck:
    """Every retained parallelogram with all four vertices inside must have
    omega4 = 0.  At cutoff 0 this is vacuous; at unbounded cutoff it is the
    literal (and for most sets unsatisfiable) reading."""
    pts = sorted(union)
    for n1 in pts:
        for n2 in pts:
            if n2 == n1:
                continue
            for n3 in pts:
                if n3 == n2:
                    continue
                n4 = complete_parallelogram(n1, n2, n3)
                if n4 not in union:
                    continue
                om = omega4(n1, n2, n3, n4)
                if om != 0 and cutoff_keeps(cutoff, om):
                    return PropertyCheck(False, ParallelogramWitness((n1, n2, n3), n4, om))
    return PropertyCheck(True)


def norm_explosion_ratio(g: GenerationalSet, s: float) -> float:
    """Ratio of generation-weighted norms sum_{Λ_{P-2}} |n|^{2s} / sum_{Λ_3} |n|^{2s}.

    Needs P >= 6 so that generations 3 and P-2 are distinct and interior.
    """
    if s <= 0:
        raise ValueError("norm exponent s must be positive")
    if g.p < 6:
        raise ValueError(f"norm-explosion ratio needs P >= 6, got P = {g.p}")
    denom = sum(n.norm2() ** s for n in g.generations[2])
    if denom == 0.0:
        raise ValueError("generation 3 carries zero weight (all frequencies at the origin)")
    num = sum(n.norm2() ** s for n in g.generations[g.p - 3])
    return num / denom


def generation_weight_ratio(g: GenerationalSet, s: float, first: int, last: int) -> float:
    """sqrt of sum_{Λ_last} <n>^{2s} / sum_{Λ_first} <n>^{2s} (1-based indices).

    The expected cascade growth factor of the weighted l^2 norm when the mass
    moves from generation `first` to generation `last`.
    """
    def gen_weight(j):
        return sum((1 + n.norm2()) ** s for n in g.generations[j - 1])

    return (gen_weight(last) / gen_weight(first)) ** 0.5


def seed_family_p2() -> GenerationalSet:
    """The canonical two-generation set: one tilted unit square.

    Parents (0,0), (2,0); children (1,-1), (1,1).  Passes every structural
    property at cutoff 0 with no partner.
    """
    return GenerationalSet(
        (
            frozenset({Frequency(0, 0), Frequency(2, 0)}),
            frozenset({Frequency(1, -1), Frequency(1, 1)}),
        )
    )


def affine_place(g: GenerationalSet, n_scale: int, v: Frequency) -> GenerationalSet:
    """Map every frequency m to n_scale * m - v, keeping generation labels."""
    if not isinstance(n_scale, int) or n_scale < 1:
        raise ValueError("dilation factor must be a positive integer")
    v = Frequency(*v)
    return GenerationalSet(
        tuple(
            frozenset(m.scale(n_scale) - v for m in gen) for gen in g.generations
        )
    )


def choose_v0(g: GenerationalSet, s: Iterable[Frequency]) -> Frequency:
    """Smallest direction not perpendicular to any internal difference.

    Scans max-norm shells in lexicographic order for the first v0 with
    v0 . (n1 - n2) != 0 for all distinct n1, n2 in the set's union and
    v0 . (k1 - k2) != 0 for all distinct k1, k2 in s.  Terminates because
    the excluded directions form finitely many lines.
    """
    diffs = set()
    for group in (sorted(g.union()), sorted(set(s))):
        for a, b in itertools.combinations(group, 2):
            d = a - b
            # One representative per line through the origin.
            diffs.add(d if (d.x, d.y) > (0, 0) else -d)
    shell = 0
    while True:
        shell += 1
        candidates = sorted(
            Frequency(x, y)
            for x in range(-shell, shell + 1)
            for y in range(-shell, shell + 1)
            if max(abs(x), abs(y)) == shell
        )
        for v in candidates:
            if all(v.dot(d) != 0 for d in diffs):
                return v


def separate_from(
    g0: GenerationalSet,
    s: Iterable[Frequency],
    r: int,
    n_scale: int,
    l_base: int,
) -> Optional[GenerationalSet]:
    """Place N*g0 - l*R*v0 so that it pastes with s at cutoff R.

    Scans l = l_base .. 2*l_base and returns the first placement with no
    connecting parallelogram to s and a fully passing property report
    (partner included).  Returns None when no l in the window works; the
    caller should retry with a larger window.  Precondition violations are
    hard errors naming the violated inequality.
    """
    s = frozenset(s)
    if not isinstance(r, int) or isinstance(r, bool) or r < 0:
        raise ValueError("cutoff R must be an integer >= 0")
    if not isinstance(l_base, int) or l_base < 1:
        raise ValueError("window base L must be a positive integer")
    w = check_r_closure(s, r)
    if w is not None:
        raise ValueError(f"partner set violates R-closure: {w.to_json()}")
    base = verify_properties(g0, 0)
    if not base.passed:
        raise ValueError(f"base set fails verification at cutoff 0: {base.failures()}")
    if not n_scale > r:
        raise ValueError(f"need N > R, got N = {n_scale}, R = {r}")
    v0 = choose_v0(affine_place(g0, n_scale, Frequency(0, 0)), s)
    v0_inf = max(abs(v0.x), abs(v0.y))
    if l_base * r * v0_inf > n_scale / 4:
        raise ValueError(
            f"need L*R*|v0|_inf <= N/4, got {l_base}*{r}*{v0_inf} = "
            f"{l_base * r * v0_inf} > {n_scale / 4}"
        )
    for l in range(l_base, 2 * l_base + 1):
        placed = affine_place(g0, n_scale, v0.scale(l * r))
        union = placed.union()
        if union & s:
            continue
        if find_connecting_parallelograms(union, s, r):
            continue
        if verify_properties(placed, r, forbidden_partner=s).passed:
            return placed
    return None


def _shell(points: Iterable[Frequency]) -> int:
    return max(max(abs(n.x), abs(n.y)) for n in points)


def _oriented_families(box: int, shell: int):
    """Oriented candidate families (parent diagonal, child diagonal) whose
    four vertices lie in [-shell, shell]^2 with at least one on its boundary,
    in canonical sorted order."""
    lo = max(-box, -shell)
    hi = min(box, shell)
    grid = [Frequency(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)]
    cands = []
    for v, u1, w, u2 in find_rectangles(grid):
        if _shell((v, u1, w, u2)) != shell:
            continue
        cands.append(((v, w), (u1, u2)))
        cands.append(((u1, u2), (v, w)))
    cands.sort()
    return cands


def _child_diameters(u: Frequency, v: Frequency, box: int, placed) -> list:
    """New integer diameters {a, b} of the circle with diagonal (u, v).

    Solves a + b = u + v, |a|^2 + |b|^2 = |u|^2 + |v|^2 over lattice points
    inside the box that are not already placed.
    """
    sx, sy = u.x + v.x, u.y + v.y
    q = u.norm2() + v.norm2()
    rr = 2 * q - sx * sx - sy * sy  # (2a - s) lies on a circle of this radius^2
    if rr < 0:
        return []
    out = []
    x_hi = int(rr**0.5) + 1
    for X in range(-x_hi, x_hi + 1):
        if (X - sx) % 2 != 0:
            continue
        Y2 = rr - X * X
        if Y2 < 0:
            continue
        Y = int(Y2**0.5)
        while Y * Y < Y2:
            Y += 1
        if Y * Y != Y2:
            continue
        for Yc in {Y, -Y}:
            if (Yc - sy) % 2 != 0:
                continue
            a = Frequency((X + sx) // 2, (Yc + sy) // 2)
            b = Frequency(sx - a.x, sy - a.y)
            if a >= b:
                continue
            if max(abs(a.x), abs(a.y), abs(b.x), abs(b.y)) > box:
                continue
            if a in placed or b in placed:
                continue
            out.append((a, b))
    out.sort()
    return out


def _matchings(points: list[Frequency], forbidden: set[frozenset]):
    """Perfect matchings of the points avoiding forbidden pairs, lexicographic."""
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        if frozenset((first, other)) in forbidden:
            continue
        for tail in _matchings(rest[:i] + rest[i + 1 :], forbidden):
            yield [(first, other)] + tail


def _partial_ok(placed: dict[Frequency, int], fam_rects: set[frozenset]) -> bool:
    """Necessary conditions a partial placement must satisfy.

    Every rectangle among placed points must be a chosen family, and every
    right-angled triple must already have its completing vertex placed (the
    completion shares a diagonal with the corner vertex, so it would have to
    sit inside an already finalized generation).
    """
    pts = sorted(placed)
    for rect in find_rectangles(pts):
        if frozenset(rect) not in fam_rects:
            return False
    members = set(pts)
    for r in pts:
        for i, a in enumerate(pts):
            if a == r:
                continue
            ra = a - r
            for b in pts[i + 1 :]:
                if b == r:
                    continue
                if ra.dot(b - r) != 0:
                    continue
                if a + b - r not in members:
                    return False
    return True


def build_lambda0(p: int, box: int) -> Optional[GenerationalSet]:
    """Backtracking search for a fully verified generational set.

    Looks in [-box, box]^2 for P generations of 2^{P-1} frequencies each
    (the family bookkeeping forces equal generation sizes: families pair off
    both the parents of one generation and the children of the next).  Each
    generation after the first is obtained as the children of the previous
    one.  Returns the first set, in deterministic order (step-1 families by
    increasing bounding shell, then lexicographically; then spouse matchings
    and child diameters lexicographically), that passes verify_properties at
    cutoff 0 -- or None when the box is exhausted.  Exhaustive search; cost
    grows steeply with box, so keep the box small for P >= 3.
    """
    if not isinstance(p, int) or not 2 <= p <= 4:
        raise ValueError("generation count must satisfy 2 <= P <= 4")
    if not isinstance(box, int) or not 0 <= box <= 64:
        raise ValueError("box must satisfy 0 <= box <= 64")
    n_families = 2 ** (p - 2)
    last_slot_start = 0

    def extend(gens: list[frozenset], sib_pairs, placed, fam_rects):
        if len(gens) == p:
            g = GenerationalSet(tuple(gens))
            return g if verify_properties(g, 0).passed else None
        forbidden = {frozenset(pair) for pair in sib_pairs}
        last = sorted(gens[-1])
        for matching in _matchings(last, forbidden):
            per_pair = [_child_diameters(u, v, box, placed) for u, v in matching]
            if any(not opts for opts in per_pair):
                continue
            for combo in itertools.product(*per_pair):
                pts = [n for pair in combo for n in pair]
                if len(set(pts)) != len(pts):
                    continue
                new_rects = [
                    frozenset((u, v, a, b)) for (u, v), (a, b) in zip(matching, combo)
                ]
                gen_idx = len(gens) + 1
                for n in pts:
                    placed[n] = gen_idx
                fam_rects.update(new_rects)
                if _partial_ok(placed, fam_rects):
                    got = extend(gens + [frozenset(pts)], list(combo), placed, fam_rects)
                    if got is not None:
                        return got
                for n in pts:
                    del placed[n]
                fam_rects.difference_update(new_rects)
        return None

    def first_step(cands, start, chosen, placed, fam_rects):
        if len(chosen) == n_families:
            gen1 = frozenset(n for parents, _ in chosen for n in parents)
            gen2 = frozenset(n for _, children in chosen for n in children)
            sibs = [children for _, children in chosen]
            return extend([gen1, gen2], sibs, placed, fam_rects)
        if len(chosen) == n_families - 1:
            # The largest-index family carries the current outermost shell.
            start = max(start, last_slot_start)
        for i in range(start, len(cands)):
            parents, children = cands[i]
            pts = [*parents, *children]
            if any(n in placed for n in pts):
                continue
            for n in parents:
                placed[n] = 1
            for n in children:
                placed[n] = 2
            rect = frozenset(pts)
            fam_rects.add(rect)
            if _partial_ok(placed, fam_rects):
                got = first_step(cands, i + 1, chosen + [(parents, children)], placed, fam_rects)
                if got is not None:
                    return got
            for n in pts:
                del placed[n]
            fam_rects.discard(rect)
        return None

    # Partition the search by the outermost shell touched by the step-1
    # families: every combination is explored exactly once, at the shell of
    # its largest member, so small solutions never materialise large boxes.
    cands: list = []
    for shell in range(1, box + 1):
        last_slot_start = len(cands)
        new = _oriented_families(box, shell)
        if not new:
            continue
        cands.extend(new)
        got = first_step(cands, 0, [], {}, set())
        if got is not None:
            return got
    return None


def smallest_separated_translate(
    g0: GenerationalSet, s: Iterable[Frequency], r: int, max_shell: int = 16
) -> GenerationalSet:
    """Smallest translate g0 + w disjoint from s with no connecting
    parallelogram at cutoff r, scanning translation shells lexicographically
    and minimising the largest frequency magnitude.

    Used where the dynamics cost grows with |n|^2 and the generic l*R*v0
    placement would inflate the frequencies unnecessarily.
    """
    s = frozenset(s)
    best = None
    for shell in range(0, max_shell + 1):
        for wx in range(-shell, shell + 1):
            for wy in range(-shell, shell + 1):
                if max(abs(wx), abs(wy)) != shell:
                    continue
                placed = affine_place(g0, 1, Frequency(-wx, -wy))
                union = placed.union()
                if union & s:
                    continue
                if find_connecting_parallelograms(union, s, r):
                    continue
                size = max(n.norm2() for n in union)
                if best is None or size < best[0]:
                    best = (size, placed)
        if best is not None:
            return best[1]
    raise ValueError(f"no separated translate within shell {max_shell}")
