"""Fickleness verdicts for finite lattices and upper semilattices.

A verdict is reached by a fixed cascade: the built-in catalog, then
distributivity, then the three-element omega^omega test, then the search for
one of the four omega^omega patterns as a sublattice.  Every witness carried
by a :class:`Classification` can be re-checked with the functions here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .analysis import is_distributive
from .fixtures import load_fixture
from .lattice_core import (
    LATTICE,
    POSET,
    FiniteStructure,
    StructureError,
    canonical_key,
    classify_structure,
    find_embeddings,
    is_embedding,
    join,
    missing_joins,
    with_ghosts,
)

CATALOG_KNOWN = "catalog-known"
DISTRIBUTIVE = "distributive-bounded-below-any-nonzero"
OMEGA_OMEGA = "omega-omega-necessary"
REJECTED = "rejected-omega2-candidate"
OPEN = "open-candidate"

# patterns whose presence as a sublattice rules out >omega^2 characterization
OMEGA_OMEGA_PATTERNS = ("m3", "oo1", "oo2", "oo3")


def _common_lower_bounds_below(s: FiniteStructure, p, q, z) -> bool:
    mask = s.down[s.idx(p)] & s.down[s.idx(q)]
    return mask & ~s.down[s.idx(z)] == 0


def is_omega_omega_triple(s: FiniteStructure, a, b, c) -> bool:
    """The three-element test: A <= B v C, B <= A v C, lower bounds of A,B below C,
    lower bounds of A,C below B, and one of A !<= C, B !<= C, A !<= B.

    Removed meets still count as lower bounds, so for a semilattice with
    ghosts the lower-bound clauses are read in the original lattice.
    """
    bc, ac = join(s, b, c), join(s, a, c)
    if bc is None or ac is None:
        raise StructureError(f"join missing for the triple ({a}, {b}, {c})")
    base = with_ghosts(s)
    return (s.leq(a, bc) and s.leq(b, ac)
            and _common_lower_bounds_below(base, a, b, c)
            and _common_lower_bounds_below(base, a, c, b)
            and (not s.leq(a, c) or not s.leq(b, c) or not s.leq(a, b)))


def omega_omega_triple(s: FiniteStructure):
    """First triple of distinct elements, in canonical order, passing the test; else None."""
    gaps = missing_joins(s)
    if gaps:
        raise StructureError(f"join missing for {gaps[0]}; the triple test needs all joins")
    for a, b, c in itertools.permutations(s.names, 3):
        if is_omega_omega_triple(s, a, b, c):
            return (a, b, c)
    return None


@dataclass(frozen=True)
class Embedding:
    pattern: str
    mapping: dict

    def check(self, host: FiniteStructure) -> bool:
        return is_embedding(pattern_structure(self.pattern), host, self.mapping)

    def render(self) -> str:
        pairs = ", ".join(f"{k}->{v}" for k, v in self.mapping.items())
        return f"{self.pattern} {{{pairs}}}"


@lru_cache(maxsize=None)
def pattern_structure(name: str) -> FiniteStructure:
    return load_fixture(name)


def _patterns_in_order() -> list:
    return sorted(OMEGA_OMEGA_PATTERNS, key=lambda n: (len(pattern_structure(n)), canonical_key(pattern_structure(n))))


def reject_omega2_candidate(L: FiniteStructure):
    """Embedding of one of the four omega^omega patterns into L, or None."""
    if classify_structure(L) != LATTICE:
        raise StructureError("rejection test needs a lattice")
    for name in _patterns_in_order():
        hits = find_embeddings(pattern_structure(name), L, first_only=True)
        if hits:
            return Embedding(name, hits[0])
    return None


# -- catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    level: str | None
    notes: tuple = ()
    group: str | None = None


_OO = "characterizes the r.e. degrees containing >=w^w-fickle sets"
_NONZERO = "can be bounded below any nonzero r.e. degree"
_DRAWN_DISTRIBUTIVE = "drawn among the distributive three-direct lattices"

CATALOG_ENTRIES = (
    CatalogEntry("diamond", ">0", ("distributive", _NONZERO, "the only <=2-direct lattice"), ">0"),
    CatalogEntry("n5", ">1", ("degrees bounding it are exactly those with >1-fickle sets",)),
    CatalogEntry("m3", ">=w^w", (_OO,), ">=w^w"),
    CatalogEntry("l7", ">w", ("degrees bounding it are exactly those with >w-fickle sets",), ">w"),
    CatalogEntry("s8", "not embeddable", ("cannot be embedded in the r.e. degrees",)),
    CatalogEntry("oo1", ">=w^w", (_OO,), ">=w^w"),
    CatalogEntry("oo2", ">=w^w", (_OO,), ">=w^w"),
    CatalogEntry("oo3", ">=w^w", (_OO,), ">=w^w"),
    CatalogEntry("a0", ">0", (_NONZERO, "has the trace-probe property"), ">0"),
    CatalogEntry("a1", ">0", (_NONZERO, "has the trace-probe property"), ">0"),
    CatalogEntry("a2", ">0", (_NONZERO, "has the trace-probe property"), ">0"),
    CatalogEntry("a3", ">0", (_NONZERO, "lacks the trace-probe property; permissions bounded by the size of the "
                                        "diagonalization requirement"), ">0"),
    CatalogEntry("a4", ">0", (_DRAWN_DISTRIBUTIVE, _NONZERO), ">0"),
    CatalogEntry("b0", ">0", (_DRAWN_DISTRIBUTIVE,), ">0"),
    CatalogEntry("b1", ">0", (_DRAWN_DISTRIBUTIVE, _NONZERO), ">0"),
    CatalogEntry("b2", ">0", (_DRAWN_DISTRIBUTIVE,), ">0"),
    CatalogEntry("b3", ">0", (_DRAWN_DISTRIBUTIVE,), ">0"),
    CatalogEntry("b4", ">0", (_DRAWN_DISTRIBUTIVE,), ">0"),
    CatalogEntry("b5", ">0", (_DRAWN_DISTRIBUTIVE,), ">0"),
    CatalogEntry("cholak", None, ("conjectured (not proved) to characterize >=w^w-fickleness",)),
)

_USL_BASES = {
    "m3_usl": "m3", "l7_usl1": "l7", "l7_usl2": "l7", "l7_usl3": "l7",
    "oo1_usl1": "oo1", "oo1_usl2": "oo1", "oo2_usl": "oo2", "oo3_usl1": "oo3", "oo3_usl2": "oo3",
}

# the three groups of the three-direct catalog
DIRECT_GROUPS = {
    ">=w^w": ("m3", "oo1", "oo2", "oo3"),
    ">w": ("l7",),
    ">0": ("a0", "a1", "a2", "a3", "diamond", "a4", "b0", "b1", "b2", "b3", "b4", "b5"),
}
# drawn left to right; the diamond and everything after it is drawn as distributive
DRAWN_DISTRIBUTIVE = ("diamond", "a4", "b0", "b1", "b2", "b3", "b4", "b5")


def _usl_entry(name: str, base: str) -> CatalogEntry:
    base_entry = next(e for e in CATALOG_ENTRIES if e.name == base)
    return CatalogEntry(name, base_entry.level,
                        (f"upper semilattice from {base} by removing meets",
                         f"characterizes the same r.e. degrees as {base}"))


def structure_key(s: FiniteStructure) -> tuple:
    """Isomorphism key that also sees removed meets."""
    if not s.removed:
        return canonical_key(s)
    return canonical_key(with_ghosts(s), marked=s.removed)


@lru_cache(maxsize=None)
def _catalog_index() -> dict:
    entries = list(CATALOG_ENTRIES) + [_usl_entry(n, b) for n, b in _USL_BASES.items()]
    index = {}
    for e in entries:
        key = structure_key(load_fixture(e.name))
        if key in index:
            raise RuntimeError(f"catalog entries {index[key].name} and {e.name} coincide")
        index[key] = e
    return index


def catalog_match(s: FiniteStructure):
    """Catalog entry isomorphic to ``s`` (labels ignored, removed meets respected), or None."""
    return _catalog_index().get(structure_key(s))


# -- cascade ----------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    verdict: str
    kind: str
    level: str | None = None
    catalog: str | None = None
    triple: tuple | None = None
    embedding: Embedding | None = None
    distributive: bool | None = None
    counterexample: tuple | None = None
    findings: tuple = ()
    notes: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "kind": self.kind,
            "level": self.level,
            "catalog": self.catalog,
            "findings": list(self.findings),
            "triple": list(self.triple) if self.triple else None,
            "embedding": ({"pattern": self.embedding.pattern, "mapping": self.embedding.mapping}
                          if self.embedding else None),
            "distributive": self.distributive,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "notes": list(self.notes),
        }


def classify(s: FiniteStructure) -> Classification:
    kind = classify_structure(s)
    entry = catalog_match(s)
    findings, notes = [], []
    level = catalog = None
    if entry is not None:
        findings.append(CATALOG_KNOWN)
        level, catalog = entry.level, entry.name
        notes.extend(entry.notes)
    elif kind == POSET:
        raise StructureError(f"not an upper semilattice: join of {missing_joins(s)[0]} missing")

    distributive = counterexample = triple = embedding = None
    if kind == LATTICE:
        distributive, counterexample = is_distributive(s)
        if distributive:
            findings.append(DISTRIBUTIVE)
    if kind != POSET:
        triple = omega_omega_triple(s)
        if triple:
            findings.append(OMEGA_OMEGA)
    else:
        notes.append("some joins are missing: triple and pattern searches skipped")
    if kind == LATTICE:
        embedding = reject_omega2_candidate(s)
        if embedding:
            findings.append(REJECTED)
    if entry is None:
        notes.append("verdict derived by search, not taken from the literature")
    verdict = findings[0] if findings else OPEN
    return Classification(verdict, kind, level, catalog, triple, embedding, distributive,
                          counterexample, tuple(findings), tuple(notes))
