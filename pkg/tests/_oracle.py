"""Independent ordinal arithmetic on explicit well-orders.

A well-order is a list of blocks; block ``e`` is the set of e-tuples of
naturals in lexicographic order (one point when e == 0).  Concatenation is
list concatenation.  The order type is found by deleting every block that
is followed somewhere later by a block of larger exponent: such a block is
swallowed by an initial segment of the later one.  Nothing here calls into
the package's CNF code.
"""
from fickle.ordinal import ZERO, Ordinal, ordinal


def blocks_of_triple(i: int, j: int, k: int) -> list:
    """w^2*i + w*j + k as an explicit block list."""
    return [2] * i + [1] * j + [0] * k


def order_type(blocks: list) -> list:
    """Non-increasing block list of the same order type."""
    kept, best = [], -1
    for e in reversed(blocks):
        if e >= best:
            kept.append(e)
            best = e
    return kept[::-1]


def concat(a: list, b: list) -> list:
    return a + b


def product(a: list, b: list) -> list:
    """Well-order on pairs (y, x), y from ``b`` first, x from ``a``.

    A point of ``b`` contributes one copy of ``a``.  A block f >= 1 of ``b``
    contributes N^(f-1) copies of "w copies of a"; in an endless repetition
    of ``a`` every block below the largest exponent e is followed by an
    e-block, so the repetition is the set N x N^e, i.e. block e+1.
    """
    out = []
    if not a:
        return out
    top = max(a)
    for f in b:
        out.extend(a if f == 0 else [top + f])
    return out


def to_cnf(blocks: list) -> Ordinal:
    """Read a non-increasing block list as an ordinal in the package's type."""
    terms = []
    for e in order_type(blocks):
        if terms and terms[-1][0] == e:
            terms[-1][1] += 1
        else:
            terms.append([e, 1])
    return Ordinal(tuple((ordinal(e), c) for e, c in terms)) if terms else ZERO


def compare(a: list, b: list, candidates) -> int:
    """-1/0/1 by searching for a remainder: a <= b iff a + g has the type of b for some g."""
    ta, tb = order_type(a), order_type(b)
    if ta == tb:
        return 0
    for g in candidates:
        if g and order_type(concat(a, g)) == tb:
            return -1
        if g and order_type(concat(b, g)) == ta:
            return 1
    raise AssertionError("no remainder found; widen the candidate set")
