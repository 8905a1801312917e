"""Requirement tables for embedding a labeled lattice or upper semilattice.

Points are named by their representation: the generator letters labelling
the point or anything below it.  Requirements that follow from a listed one
are left out.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .lattice_core import (
    FiniteStructure,
    StructureError,
    build_structure,
    is_lattice,
    join,
    join_all,
    meet,
    missing_joins,
    representation,
    rep_str,
    restrict,
    with_ghosts,
)

JOIN = "join"
DIAGONALIZE = "diagonalize"
MEET = "meet"
MEET_CONDITION = "meet-condition"
NON_MEET = "non-meet"
KINDS = (JOIN, DIAGONALIZE, MEET, MEET_CONDITION, NON_MEET)


@dataclass(frozen=True)
class Requirement:
    kind: str
    left: tuple          # representation strings on the left-hand side
    right: str = ""      # representation string on the right-hand side, if any

    def render(self) -> str:
        if self.kind == JOIN:
            return f"{self.left[0]} ≤ {self.right}"
        if self.kind == DIAGONALIZE:
            return f"{self.left[0]} ≰ {self.right}"
        if self.kind == MEET:
            return f"{self.left[0]} ∩ {self.left[1]} ≤ {self.right}"
        if self.kind == MEET_CONDITION:
            return f"(∀W ≤ {self.left[0]}, {self.left[1]})[W ≤ {self.right}]"
        return f"{self.left[0]} ∩ {self.left[1]} does not exist"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class RequirementTable:
    joins: tuple = ()
    diagonalizations: tuple = ()
    meets: tuple = ()
    non_meets: tuple = ()
    notes: tuple = field(default=())

    def rows(self) -> list:
        return [*self.joins, *self.diagonalizations, *self.meets, *self.non_meets]

    def counts(self) -> dict:
        out = {k: 0 for k in KINDS}
        for r in self.rows():
            out[r.kind] += 1
        return out

    def as_dict(self) -> dict:
        return {
            "joins": [r.render() for r in self.joins],
            "diagonalizations": [r.render() for r in self.diagonalizations],
            "meets": [r.render() for r in self.meets],
            "non_meets": [r.render() for r in self.non_meets],
            "notes": list(self.notes),
        }

    def render(self) -> str:
        sections = (("Join", self.joins), ("Diagonalize", self.diagonalizations),
                    ("Meet", self.meets), ("Non-meet", self.non_meets))
        width = max(len(title) for title, _ in sections) + 1
        lines = []
        for title, rows in sections:
            for i, r in enumerate(rows):
                head = f"{title}:" if i == 0 else ""
                lines.append(f"{head:<{width}} {r.render()}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def _rep(s, p) -> str:
    return rep_str(representation(s, p))


def _require_labels(s: FiniteStructure):
    if not s.is_labeled:
        raise StructureError("structure has no generator labels")


def _generators(s: FiniteStructure) -> list:
    return sorted(s.generator_at.items())


def _ordered(*reqs) -> tuple:
    return tuple(sorted(set(reqs), key=lambda r: (r.left, r.right)))


def _drop_supersets(sets: list) -> list:
    return [a for a in sets if not any(b < a for b in sets)]


def generate_joins(s: FiniteStructure) -> tuple:
    """X <= (union of representations of S) for each minimal S of points not above X's point covering it."""
    _require_labels(s)
    out = []
    for gen, p in _generators(s):
        candidates = [q for q in s.names if not s.leq(p, q)]
        covers = []
        for r in range(2, len(candidates) + 1):
            for sub in itertools.combinations(candidates, r):
                if any(set(c) <= set(sub) for c in covers):
                    continue
                top = join_all(s, sub)
                if top is not None and s.leq(p, top):
                    covers.append(sub)
        rights = set()
        for sub in covers:
            gens = frozenset().union(*(representation(s, q) for q in sub)) - {gen}
            rights.add(gens)
        for gens in _drop_supersets(list(rights)):
            out.append(Requirement(JOIN, (gen,), rep_str(gens)))
    return _ordered(*out)


def generate_diagonalizations(s: FiniteStructure) -> tuple:
    """X !<= representation(q) for each maximal q not above X's point."""
    _require_labels(s)
    out = []
    for gen, p in _generators(s):
        for q in s.maximal(q for q in s.names if not s.leq(p, q)):
            rep = representation(s, q)
            if gen in rep:
                raise StructureError(f"self-contradictory diagonalization {gen} against {rep_str(rep)}")
            out.append(Requirement(DIAGONALIZE, (gen,), rep_str(rep)))
    return _ordered(*out)


def _pair_left(s, p, q) -> tuple:
    a, b = _rep(s, p), _rep(s, q)
    return tuple(sorted((a, b), key=lambda x: (-len(x), x)))


def incomparable_pairs(s: FiniteStructure) -> list:
    return [(p, q) for p, q in itertools.combinations(s.names, 2) if not s.comparable(p, q)]


def _dominates(s, big, small) -> bool:
    (p, q), (p2, q2) = big, small
    return (s.leq(p2, p) and s.leq(q2, q)) or (s.leq(p2, q) and s.leq(q2, p))


def meet_groups(s: FiniteStructure) -> dict:
    """Incomparable pairs with a meet, grouped by that meet, keeping the componentwise-maximal ones."""
    groups = {}
    for p, q in incomparable_pairs(s):
        m = meet(s, p, q)
        if m is not None:
            groups.setdefault(m, []).append((p, q))
    return {m: [a for a in pairs if not any(b != a and _dominates(s, b, a) for b in pairs)]
            for m, pairs in groups.items()}


def _condition_targets(s: FiniteStructure, p, q) -> list:
    base = with_ghosts(s)
    lower = base.down[base.idx(p)] & base.down[base.idx(q)]
    ok = [z for z in s.names
          if not s.leq(p, z) and not s.leq(q, z)
          and lower & ~base.down[base.idx(z)] == 0]
    return s.maximal(ok)


def generate_meets(s: FiniteStructure) -> tuple:
    """Meet, meet-condition and non-meet requirements, returned as (meets, non_meets)."""
    _require_labels(s)
    meets, non_meets = [], []
    for m, pairs in meet_groups(s).items():
        for p, q in pairs:
            right = _rep(s, m)
            if right:
                meets.append(Requirement(MEET, _pair_left(s, p, q), right))
            else:
                meets.extend(Requirement(MEET_CONDITION, _pair_left(s, p, q), _rep(s, z))
                             for z in _condition_targets(s, p, q))
    for p, q in incomparable_pairs(s):
        if meet(s, p, q) is not None:
            continue
        left = tuple(sorted((_rep(s, p), _rep(s, q))))
        meets.extend(Requirement(MEET_CONDITION, left, _rep(s, z)) for z in _condition_targets(s, p, q))
        non_meets.append(Requirement(NON_MEET, left))
    return _ordered(*meets), _ordered(*non_meets)


def generate_requirements(s: FiniteStructure) -> RequirementTable:
    gaps = missing_joins(s)
    if gaps:
        raise StructureError(f"join of {gaps[0]} missing; requirements need an upper semilattice")
    meets, non_meets = generate_meets(s)
    notes = ()
    if any(r.kind == MEET_CONDITION for r in meets):
        notes = ("meet-condition targets follow a reconstructed rule",)
    return RequirementTable(generate_joins(s), generate_diagonalizations(s), meets, non_meets, notes)


def remove_meets(L: FiniteStructure, elements) -> FiniteStructure:
    """Delete the given elements, keeping them as ghosts; every join must survive."""
    if not is_lattice(L):
        raise StructureError("meet removal starts from a lattice")
    gone = set(elements)
    for g in gone:
        L.idx(g)
        if g in L.labels:
            raise StructureError(f"cannot remove labeled element {g!r}")
        if not any(meet(L, p, q) == g for p, q in incomparable_pairs(L)):
            raise StructureError(f"{g!r} is not the meet of two incomparable elements")
    kept = [n for n in L.names if n not in gone]
    for p, q in itertools.combinations_with_replacement(kept, 2):
        if join(L, p, q) in gone:
            raise StructureError(f"removing {join(L, p, q)!r} breaks the join of {p} and {q}")
    ghosts = {g: (tuple(lo for lo, hi in L.covers if hi == g), tuple(hi for lo, hi in L.covers if lo == g))
              for g in sorted(gone)}
    small = restrict(L, kept)
    return FiniteStructure(small.names, small.up, small.down, small.labels, ghosts)


def chain(labels: list) -> FiniteStructure:
    """Fully labeled chain, bottom first; handy for tests and examples."""
    names = [f"p{i}" for i in range(len(labels))]
    return build_structure(names, list(zip(names, names[1:])), dict(zip(names, ([g] for g in labels))))
