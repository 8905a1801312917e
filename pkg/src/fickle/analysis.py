"""Distributivity, join-irreducibility, Birkhoff witnesses and n-directness.

Also the exhaustive enumeration of lattices generated (as plain joins and
meets) by an antichain of at most three elements.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fixtures import load_fixture
from .lattice_core import (
    FiniteStructure,
    StructureError,
    build_structure,
    canonical_key,
    find_embeddings,
    is_lattice,
    join,
    join_all,
    meet,
    meet_all,
)


def _require_lattice(L: FiniteStructure):
    if not is_lattice(L):
        raise StructureError("operation requires a lattice")


def is_distributive(L: FiniteStructure):
    """``(True, None)`` or ``(False, (a, b, c))`` with a∧(b∨c) != (a∧b)∨(a∧c)."""
    _require_lattice(L)
    for a, b, c in itertools.product(L.names, repeat=3):
        if meet(L, a, join(L, b, c)) != join(L, meet(L, a, b), meet(L, a, c)):
            return False, (a, b, c)
    return True, None


def forbidden_sublattice(L: FiniteStructure):
    """``(name, mapping)`` embedding N5 or M3 as a sublattice, or None."""
    _require_lattice(L)
    for name in ("n5", "m3"):
        hits = find_embeddings(load_fixture(name), L, first_only=True)
        if hits:
            return name, hits[0]
    return None


def join_irreducibles(L: FiniteStructure) -> list:
    """Elements b such that b = a0 v a1 forces b in {a0, a1}.

    Taken literally, so the bottom element qualifies as well.
    """
    _require_lattice(L)
    return [b for b in L.names
            if all(b in (a0, a1) for a0, a1 in itertools.combinations_with_replacement(L.names, 2)
                   if join(L, a0, a1) == b)]


def join_primes(L: FiniteStructure) -> list:
    """Elements b such that b <= a0 v a1 forces b <= a0 or b <= a1."""
    _require_lattice(L)
    return [b for b in L.names
            if all(L.leq(b, a0) or L.leq(b, a1)
                   for a0, a1 in itertools.combinations_with_replacement(L.names, 2)
                   if L.leq(b, join(L, a0, a1)))]


@dataclass(frozen=True)
class BirkhoffWitness:
    element: str
    cover: tuple

    def check(self, L: FiniteStructure) -> bool:
        b, (a0, a1) = self.element, self.cover
        return (b in join_irreducibles(L) and L.leq(b, join(L, a0, a1))
                and not L.leq(b, a0) and not L.leq(b, a1))


def birkhoff_witness(L: FiniteStructure):
    """Least (b, a0, a1) in canonical order with b join-irreducible, b <= a0 v a1, b below neither."""
    irreducible = set(join_irreducibles(L))
    for b in L.names:
        if b not in irreducible:
            continue
        for a0, a1 in itertools.combinations(L.names, 2):
            if L.leq(b, join(L, a0, a1)) and not L.leq(b, a0) and not L.leq(b, a1):
                return BirkhoffWitness(b, (a0, a1))
    return None


def _generated(L: FiniteStructure, gens) -> set:
    out = set()
    for r in range(1, len(gens) + 1):
        for sub in itertools.combinations(gens, r):
            out.add(join_all(L, sub))
            out.add(meet_all(L, sub))
    return out


def is_n_direct(L: FiniteStructure, n: int):
    """``(True, antichain)`` if some n-antichain generates every element by plain joins or meets."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _require_lattice(L)
    everything = set(L.names)
    for gens in itertools.combinations(L.names, n):
        if any(L.comparable(p, q) for p, q in itertools.combinations(gens, 2)):
            continue
        if _generated(L, gens) == everything:
            return True, gens
    return False, None


# -- enumeration ------------------------------------------------------------

MAX_DIRECT = 3


def _subsets(m: int) -> list:
    return [frozenset(c) for r in range(1, m + 1) for c in itertools.combinations(range(m), r)]


def _term_name(kind: str, block: frozenset) -> str:
    letters = "".join("abc"[i] for i in sorted(block))
    if len(block) == 1:
        return letters
    return ("j_" if kind == "J" else "m_") + letters


def _direct_candidates(m: int):
    """Yield the term preorders for m generators, one per choice of free bits.

    Terms are J(I) (join over I) and M(I) (meet over I, |I| >= 2).  The order
    is pinned down by which meets lie below which joins; only pairs of
    disjoint blocks that are not both singletons are free.
    """
    blocks = _subsets(m)
    terms = [("J", b) for b in blocks] + [("M", b) for b in blocks if len(b) > 1]
    free = [(i, k) for i in blocks for k in blocks
            if not (i & k) and not (len(i) == 1 and len(k) == 1)]
    for bits in itertools.product((False, True), repeat=len(free)):
        chosen = dict(zip(free, bits))

        def below(i, k, chosen=chosen):
            # meet over i <= join over k
            if i & k:
                return True
            return chosen.get((i, k), False)

        def leq(s, t):
            (ks, bs), (kt, bt) = s, t
            if ks == "J" and kt == "J":
                return all(below(frozenset([i]), bt) for i in bs)
            if ks == "M" and kt == "M":
                return all(below(bs, frozenset([k])) for k in bt)
            if ks == "M" and kt == "J":
                return below(bs, bt)
            return bs == bt and len(bs) == 1
        yield terms, leq


def _quotient(terms, leq):
    """Collapse the preorder to a structure, or None if it is not transitive."""
    for a, b, c in itertools.product(terms, repeat=3):
        if leq(a, b) and leq(b, c) and not leq(a, c):
            return None
    classes = []
    for t in terms:
        for cls in classes:
            if leq(t, cls[0]) and leq(cls[0], t):
                cls.append(t)
                break
        else:
            classes.append([t])
    names = [_term_name(*cls[0]) for cls in classes]
    pairs = [(names[i], names[j]) for i, ci in enumerate(classes) for j, cj in enumerate(classes)
             if i != j and leq(ci[0], cj[0])]
    return build_structure(names, pairs)


def enumerate_direct(n: int) -> list:
    """Every lattice that is m-direct for some 2 <= m <= n, one per isomorphism class.

    Sorted by (size, canonical key).  The single point is left out.
    """
    if n > MAX_DIRECT:
        raise ValueError(f"enumeration supports n <= {MAX_DIRECT}")
    if n < 1:
        raise ValueError("n must be at least 1")
    found = {}
    for m in range(2, n + 1):
        for terms, leq in _direct_candidates(m):
            L = _quotient(terms, leq)
            if L is None or not is_lattice(L):
                continue
            ok, _ = is_n_direct(L, m)
            if not ok:
                continue
            found.setdefault(canonical_key(L), L)
    return [found[k] for k in sorted(found, key=lambda k: (k[0], k))]
