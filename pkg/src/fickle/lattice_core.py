"""Finite posets, lattices and upper semilattices.

Elements are stored in a fixed linear extension (bottom-up, ties broken by
name); that order is the "canonical element order" used for every
deterministic tie-break in the package.  The order relation is kept as
bitmasks of up-sets and down-sets.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class StructureError(ValueError):
    """Invalid structure: cycle, duplicate generator, unknown element..."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


LATTICE = "lattice"
USL = "upper-semilattice"
POSET = "poset-only"


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    names: tuple
    up: tuple          # up[i]: bitmask of elements >= i
    down: tuple        # down[i]: bitmask of elements <= i
    labels: Mapping = field(default_factory=dict)       # name -> frozenset of generators
    removed: Mapping = field(default_factory=dict)      # ghost name -> (lower names, upper names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    @cached_property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    def idx(self, name) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise StructureError(f"unknown element {name!r}") from None

    def leq(self, p, q) -> bool:
        return bool(self.up[self.idx(p)] >> self.idx(q) & 1)

    def lt(self, p, q) -> bool:
        return p != q and self.leq(p, q)

    def comparable(self, p, q) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def above(self, p) -> list:
        return self._members(self.up[self.idx(p)])

    def below(self, p) -> list:
        return self._members(self.down[self.idx(p)])

    def _members(self, mask: int) -> list:
        return [n for i, n in enumerate(self.names) if mask >> i & 1]

    @cached_property
    def covers(self) -> tuple:
        """Hasse diagram edges ``(lower, upper)``."""
        out = []
        for i, lo in enumerate(self.names):
            strict = self.up[i] & ~(1 << i)
            for j, hi in enumerate(self.names):
                if not strict >> j & 1:
                    continue
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((lo, hi))
        return tuple(out)

    @cached_property
    def join_table(self) -> tuple:
        n = len(self.names)
        return tuple(tuple(_least(self.up[i] & self.up[j], self.up) for j in range(n)) for i in range(n))

    @cached_property
    def meet_table(self) -> tuple:
        n = len(self.names)
        return tuple(tuple(_least(self.down[i] & self.down[j], self.down) for j in range(n)) for i in range(n))

    @property
    def is_labeled(self) -> bool:
        return bool(self.labels)

    @cached_property
    def generator_at(self) -> dict:
        return {g: p for p, gens in self.labels.items() for g in gens}

    def bottom(self):
        full = (1 << len(self.names)) - 1
        for i, n in enumerate(self.names):
            if self.up[i] == full:
                return n
        return None

    def top(self):
        full = (1 << len(self.names)) - 1
        for i, n in enumerate(self.names):
            if self.down[i] == full:
                return n
        return None

    def maximal(self, names: Iterable) -> list:
        """Maximal elements of the given subset, in canonical order."""
        subset = set(names)
        return [p for p in self.names if p in subset and not any(q != p and self.leq(p, q) for q in subset)]

    def __repr__(self):
        return f"<FiniteStructure {len(self.names)} elements: {', '.join(self.names)}>"


def _least(mask: int, up: tuple):
    """Index of the least element of ``mask`` (w.r.t. the up-sets), or None."""
    m, i = mask, 0
    while m:
        if m & 1 and mask & ~up[i] == 0:
            return i
        m >>= 1
        i += 1
    return None


def build_structure(elements: Iterable, covers: Iterable = (), labels: Mapping | None = None,
                    removed: Mapping | None = None) -> FiniteStructure:
    """Build from elements and (lower, upper) pairs; the order is their reflexive-transitive closure."""
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise StructureError("duplicate element")
    known = set(elements)
    succ = {e: set() for e in elements}
    for lo, hi in covers:
        for x in (lo, hi):
            if x not in known:
                raise StructureError(f"unknown element {x!r} in cover ({lo}, {hi})")
        if lo == hi:
            raise StructureError(f"cycle detected: {lo} < {lo}")
        succ[lo].add(hi)
    # Kahn's algorithm, smallest name first among available minimal elements
    indeg = {e: 0 for e in elements}
    for lo in succ:
        for hi in succ[lo]:
            indeg[hi] += 1
    heap = [e for e in elements if indeg[e] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        e = heapq.heappop(heap)
        order.append(e)
        for hi in sorted(succ[e]):
            indeg[hi] -= 1
            if indeg[hi] == 0:
                heapq.heappush(heap, hi)
    if len(order) != len(elements):
        stuck = sorted(e for e in elements if indeg[e] > 0)
        raise StructureError(f"cycle detected among {', '.join(stuck)}")
    pos = {e: i for i, e in enumerate(order)}
    up = [0] * len(order)
    for e in reversed(order):
        i = pos[e]
        mask = 1 << i
        for hi in succ[e]:
            mask |= up[pos[hi]]
        up[i] = mask
    down = [0] * len(order)
    for i in range(len(order)):
        m = up[i]
        j = 0
        while m:
            if m & 1:
                down[j] |= 1 << i
            m >>= 1
            j += 1
    clean_labels = {}
    seen = {}
    for name, gens in (labels or {}).items():
        if name not in known:
            raise StructureError(f"label on unknown element {name!r}")
        gens = frozenset(gens)
        if not gens:
            continue
        for g in gens:
            if g in seen:
                raise StructureError(f"duplicate generator name {g!r} at {seen[g]!r} and {name!r}")
            seen[g] = name
        clean_labels[name] = gens
    return FiniteStructure(tuple(order), tuple(up), tuple(down), clean_labels, dict(removed or {}))


def from_relation(elements: Iterable, leq) -> FiniteStructure:
    """Build from a predicate ``leq(p, q)`` that is already a partial order."""
    elements = list(elements)
    pairs = [(p, q) for p in elements for q in elements if p != q and leq(p, q)]
    return build_structure(elements, pairs)


def restrict(s: FiniteStructure, keep: Iterable) -> FiniteStructure:
    """Induced subposet on ``keep`` (labels of dropped elements are dropped)."""
    wanted = set(keep)
    keep = [n for n in s.names if n in wanted]
    pairs = [(p, q) for p in keep for q in keep if p != q and s.leq(p, q)]
    labels = {p: g for p, g in s.labels.items() if p in keep}
    return build_structure(keep, pairs, labels, s.removed)


def relabel(s: FiniteStructure, mapping: Mapping) -> FiniteStructure:
    pairs = [(mapping[p], mapping[q]) for p, q in s.covers]
    labels = {mapping[p]: g for p, g in s.labels.items()}
    return build_structure([mapping[n] for n in s.names], pairs, labels)


# -- join / meet ------------------------------------------------------------

def join(s: FiniteStructure, p, q):
    r = s.join_table[s.idx(p)][s.idx(q)]
    return None if r is None else s.names[r]


def meet(s: FiniteStructure, p, q):
    r = s.meet_table[s.idx(p)][s.idx(q)]
    return None if r is None else s.names[r]


def join_all(s: FiniteStructure, items: Iterable):
    items = list(items)
    if not items:
        return s.bottom()
    mask = (1 << len(s.names)) - 1
    for p in items:
        mask &= s.up[s.idx(p)]
    r = _least(mask, s.up)
    return None if r is None else s.names[r]


def meet_all(s: FiniteStructure, items: Iterable):
    items = list(items)
    if not items:
        return s.top()
    mask = (1 << len(s.names)) - 1
    for p in items:
        mask &= s.down[s.idx(p)]
    r = _least(mask, s.down)
    return None if r is None else s.names[r]


def missing_pairs(s: FiniteStructure, table: str) -> list:
    tab = s.join_table if table == "join" else s.meet_table
    n = len(s.names)
    return [(s.names[i], s.names[j]) for i in range(n) for j in range(i + 1, n) if tab[i][j] is None]


def missing_meets(s: FiniteStructure) -> list:
    return missing_pairs(s, "meet")


def missing_joins(s: FiniteStructure) -> list:
    return missing_pairs(s, "join")


def classify_structure(s: FiniteStructure) -> str:
    if missing_joins(s):
        return POSET
    return USL if missing_meets(s) else LATTICE


def is_lattice(s: FiniteStructure) -> bool:
    return classify_structure(s) == LATTICE


# -- embeddings -------------------------------------------------------------

SUBPOSET = "subposet"
SUBLATTICE = "sublattice"


def find_embeddings(pattern: FiniteStructure, host: FiniteStructure, mode: str = SUBLATTICE,
                    first_only: bool = False) -> list:
    """All embeddings as dicts pattern-name -> host-name, sorted canonically.

    ``subposet`` mode asks for order embeddings; ``sublattice`` mode further
    asks that host joins and meets of images are images of pattern joins and
    meets.
    """
    if mode not in (SUBPOSET, SUBLATTICE):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == SUBLATTICE:
        for st, role in ((pattern, "pattern"), (host, "host")):
            if not is_lattice(st):
                raise StructureError(f"sublattice mode needs a lattice {role}")
    n, m = len(pattern.names), len(host.names)
    if n > m:
        return []
    pj, pm = pattern.join_table, pattern.meet_table
    hj, hm = host.join_table, host.meet_table
    assign = [-1] * n
    used = [False] * m
    results = []

    def consistent(k: int, h: int) -> bool:
        for i in range(k):
            hi = assign[i]
            if (pattern.up[i] >> k & 1) != (host.up[hi] >> h & 1):
                return False
            if (pattern.up[k] >> i & 1) != (host.up[h] >> hi & 1):
                return False
        if mode == SUBPOSET:
            return True
        assign[k] = h
        try:
            for i in range(k + 1):
                for j in range(i, k + 1):
                    a, b = assign[i], assign[j]
                    for ptab, htab in ((pj, hj), (pm, hm)):
                        r, image = ptab[i][j], htab[a][b]
                        if r <= k:
                            if assign[r] != image:
                                return False
                        elif image == h or used[image]:
                            return False
            return True
        finally:
            assign[k] = -1

    def search(k: int) -> bool:
        if k == n:
            results.append({pattern.names[i]: host.names[assign[i]] for i in range(n)})
            return first_only
        for h in range(m):
            if used[h] or not consistent(k, h):
                continue
            assign[k] = h
            used[h] = True
            if search(k + 1):
                return True
            used[h] = False
            assign[k] = -1
        return False

    search(0)
    return results


def is_embedding(pattern: FiniteStructure, host: FiniteStructure, mapping: Mapping,
                 mode: str = SUBLATTICE) -> bool:
    """Independent re-check of one embedding, straight from the definitions."""
    if set(mapping) != set(pattern.names) or len(set(mapping.values())) != len(mapping):
        return False
    for p in pattern.names:
        for q in pattern.names:
            if pattern.leq(p, q) != host.leq(mapping[p], mapping[q]):
                return False
            if mode == SUBLATTICE:
                if join(host, mapping[p], mapping[q]) != mapping.get(join(pattern, p, q)):
                    return False
                if meet(host, mapping[p], mapping[q]) != mapping.get(meet(pattern, p, q)):
                    return False
    return True


# -- canonical form ---------------------------------------------------------

def _refine(s: FiniteStructure, colors: list) -> list:
    n = len(colors)
    while True:
        sigs = []
        for i in range(n):
            ups = sorted(colors[j] for j in range(n) if j != i and s.up[i] >> j & 1)
            downs = sorted(colors[j] for j in range(n) if j != i and s.down[i] >> j & 1)
            sigs.append((colors[i], tuple(ups), tuple(downs)))
        ranks = {sig: r for r, sig in enumerate(sorted(set(sigs)))}
        new = [ranks[sig] for sig in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_key(s: FiniteStructure, marked: Iterable = ()) -> tuple:
    """Isomorphism invariant of the underlying poset (labels ignored).

    Colour refinement on up/down neighbourhoods, then individualisation of
    each element of the first non-singleton cell; the key is the least
    adjacency encoding over all leaves of that search tree.  Elements in
    ``marked`` may only be matched with marked elements.
    """
    n = len(s.names)
    marked = set(marked)
    start = [int(name in marked) for name in s.names]
    best = None

    def encode(colors: list) -> tuple:
        order = sorted(range(n), key=lambda i: colors[i])
        pos = {v: k for k, v in enumerate(order)}
        rows = []
        for v in order:
            row = 0
            for u in range(n):
                if s.up[v] >> u & 1:
                    row |= 1 << pos[u]
            rows.append(row)
        if marked:
            return tuple(start[v] for v in order), tuple(rows)
        return tuple(rows)

    def explore(colors: list):
        nonlocal best
        colors = _refine(s, colors)
        counts = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        split = [c for c in sorted(counts) if counts[c] > 1]
        if not split:
            key = encode(colors)
            if best is None or key < best:
                best = key
            return
        target = split[0]
        for v in range(n):
            if colors[v] != target:
                continue
            seeded = [2 * c + 1 for c in colors]
            seeded[v] = 2 * target
            explore(seeded)

    explore(start)
    return (n, best)


def is_isomorphic(a: FiniteStructure, b: FiniteStructure) -> bool:
    return canonical_key(a) == canonical_key(b)


def with_ghosts(s: FiniteStructure) -> FiniteStructure:
    """The structure before its meets were removed (ghosts restored, unlabeled)."""
    if not s.removed:
        return s
    pairs = list(s.covers)
    for g, (lows, highs) in s.removed.items():
        pairs += [(lo, g) for lo in lows] + [(g, hi) for hi in highs]
    return build_structure(list(s.names) + sorted(s.removed), pairs, s.labels)


# -- labels -----------------------------------------------------------------

def representation(s: FiniteStructure, p) -> frozenset:
    """Generator names labelling ``p`` or anything below it."""
    if not s.is_labeled:
        raise StructureError("structure has no generator labels")
    out = set()
    for q in s.below(p):
        out |= s.labels.get(q, frozenset())
    return frozenset(out)


def rep_str(gens: Iterable) -> str:
    return "".join(sorted(gens))


# -- text format ------------------------------------------------------------

_NAME = r"[A-Za-z0-9_']+"
_ELEM = re.compile(rf"^elem\s+({_NAME})((?:\s+\S+)*)$")
_COVER = re.compile(rf"^cover\s+({_NAME})\s+({_NAME})$")


def parse_structure(text: str) -> FiniteStructure:
    """Parse ``elem``/``cover`` directives.

    ``elem <name> [label=G1,G2] [removed]``; a ``removed`` element is a
    deleted meet: it is not part of the structure, but its covers still
    induce order between the remaining elements and it is drawn as a ghost.
    """
    elements, covers, labels, ghosts = [], [], {}, set()
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ELEM.match(line)
        if m:
            name = m.group(1)
            if name in seen:
                raise ParseError(f"duplicate elem {name!r}", lineno)
            seen.add(name)
            elements.append(name)
            for opt in m.group(2).split():
                if opt == "removed":
                    ghosts.add(name)
                elif opt.startswith("label="):
                    gens = [g for g in opt[6:].split(",") if g]
                    if not gens:
                        raise ParseError("empty label list", lineno)
                    labels[name] = gens
                else:
                    raise ParseError(f"unknown elem option {opt!r}", lineno)
            continue
        m = _COVER.match(line)
        if m:
            covers.append((m.group(1), m.group(2), lineno))
            continue
        raise ParseError(f"cannot parse {raw.strip()!r}", lineno)
    for lo, hi, lineno in covers:
        for x in (lo, hi):
            if x not in seen:
                raise ParseError(f"cover mentions undeclared element {x!r}", lineno)
    full = build_structure(elements, [(lo, hi) for lo, hi, _ in covers], labels)
    if not ghosts:
        return full
    if any(g in labels for g in ghosts):
        raise StructureError("a removed element cannot carry generator labels")
    removed = {g: (tuple(lo for lo, hi in full.covers if hi == g), tuple(hi for lo, hi in full.covers if lo == g))
               for g in ghosts}
    kept = restrict(full, [e for e in full.names if e not in ghosts])
    return FiniteStructure(kept.names, kept.up, kept.down, kept.labels, removed)


def load_structure(path) -> FiniteStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def dump_structure(s: FiniteStructure) -> str:
    lines = []
    for n in s.names:
        opt = f" label={','.join(sorted(s.labels[n]))}" if n in s.labels else ""
        lines.append(f"elem {n}{opt}")
    for g in sorted(s.removed):
        lines.append(f"elem {g} removed")
    for lo, hi in s.covers:
        lines.append(f"cover {lo} {hi}")
    for g in sorted(s.removed):
        lows, highs = s.removed[g]
        lines.extend(f"cover {lo} {g}" for lo in lows)
        lines.extend(f"cover {g} {hi}" for hi in highs)
    return "\n".join(lines) + "\n"


def to_dot(s: FiniteStructure, name: str = "structure") -> str:
    """Hasse diagram in DOT, bottom-up; removed meets are open circles."""
    out = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle, style=filled, fillcolor=black, "
           'fontcolor=white, width=0.3, fixedsize=false];', "  edge [arrowhead=none];"]
    for n in s.names:
        label = rep_str(s.labels[n]) if n in s.labels else n
        out.append(f'  "{n}" [label="{label}"];')
    for g in sorted(s.removed):
        out.append(f'  "{g}" [label="{g}", fillcolor=white, fontcolor=black];')
    for lo, hi in s.covers:
        out.append(f'  "{lo}" -> "{hi}";')
    for g in sorted(s.removed):
        lows, highs = s.removed[g]
        for lo in lows:
            out.append(f'  "{lo}" -> "{g}" [style=dashed];')
        for hi in highs:
            out.append(f'  "{g}" -> "{hi}" [style=dashed];')
    out.append("}")
    return "\n".join(out) + "\n"
