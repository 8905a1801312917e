"""Ordinals below epsilon-zero in Cantor normal form, and mind-change validation."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``terms`` is a tuple of ``(exponent, coefficient)`` with strictly decreasing exponents.

    The empty tuple is zero.  Use :func:`ordinal` or :func:`parse_ordinal`
    rather than building terms by hand; the constructor checks canonicity.
    """

    terms: tuple = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal):
                raise TypeError("exponent must be an Ordinal")
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive int, got {coeff!r}")
            if prev is not None and ord_cmp(exp, prev) >= 0:
                raise ValueError("exponents must strictly decrease")
            prev = exp

    def __lt__(self, other):
        return ord_cmp(self, _coerce(other)) < 0

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = ordinal(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return ord_add(self, _coerce(other))

    def __radd__(self, other):
        return ord_add(_coerce(other), self)

    def __mul__(self, other):
        return ord_mul(self, _coerce(other))

    def __rmul__(self, other):
        return ord_mul(_coerce(other), self)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Ordinal({self})"

    def __str__(self):
        return format_ordinal(self)

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0].terms)

    def __int__(self):
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO


def _coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return ordinal(x)
    raise TypeError(f"cannot treat {x!r} as an ordinal")


def ordinal(n: int) -> Ordinal:
    """The natural number ``n`` as an ordinal."""
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return Ordinal(((ZERO, n),)) if n else ZERO


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    """Return -1, 0 or 1."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = ord_cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead = b.terms[0][0]
    kept = []
    for exp, coeff in a.terms:
        c = ord_cmp(exp, lead)
        if c > 0:
            kept.append((exp, coeff))
        elif c == 0:
            kept.append((exp, coeff + b.terms[0][1]))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    lead_exp, lead_coeff = a.terms[0]
    out = ZERO
    for exp, coeff in b.terms:
        if exp.terms:
            piece = Ordinal(((ord_add(lead_exp, exp), coeff),))
        else:
            piece = Ordinal(((lead_exp, lead_coeff * coeff),) + a.terms[1:])
        out = ord_add(out, piece)
    return out


def ord_omega_pow(a: Ordinal) -> Ordinal:
    return Ordinal(((a, 1),))


def is_power_of_omega(a: Ordinal) -> bool:
    return len(a.terms) == 1 and a.terms[0][1] == 1


def ord_product(factors: Iterable) -> Ordinal:
    out = ONE
    for f in factors:
        out = ord_mul(out, _coerce(f))
    return out


# -- literal syntax ---------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if not exp.terms:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite:
            base = f"w^{int(exp)}"
        else:
            base = f"w^({format_ordinal(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)


class OrdinalSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalSyntaxError(f"unexpected character at position {pos}: {text[pos:]!r}")
        kinds = ("int", "w", "^", "*", "+", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                out.append((kind, val))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise OrdinalSyntaxError(f"expected {kind!r}, got {got!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def expr(self) -> Ordinal:
        value = self.term()
        while self.peek() == "+":
            self.take("+")
            value = ord_add(value, self.term())
        return value

    def term(self) -> Ordinal:
        value = self.factor()
        while self.peek() == "*":
            self.take("*")
            value = ord_mul(value, self.factor())
        return value

    def factor(self) -> Ordinal:
        kind = self.peek()
        if kind == "int":
            return ordinal(int(self.take("int")))
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        self.take("w")
        if self.peek() != "^":
            return OMEGA
        self.take("^")
        if self.peek() == "int":
            return ord_omega_pow(ordinal(int(self.take("int"))))
        self.take("(")
        exp = self.expr()
        self.take(")")
        return ord_omega_pow(exp)


def parse_ordinal(text: str, strict: bool = True) -> Ordinal:
    """Parse ``w^(E)*c + ...`` syntax.

    With ``strict`` the text must already be in canonical form (as produced by
    :func:`format_ordinal`, whitespace aside); otherwise any sum/product
    expression is evaluated.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise OrdinalSyntaxError("empty ordinal expression")
    p = _Parser(tokens)
    value = p.expr()
    if p.i != len(tokens):
        raise OrdinalSyntaxError(f"trailing input: {tokens[p.i][1]!r}")
    if strict:
        canon = format_ordinal(value)
        if re.sub(r"\s+", "", canon) != re.sub(r"\s+", "", text):
            raise OrdinalSyntaxError(f"not in canonical form: {text!r} (canonical: {canon!r})")
    return value


# -- mind-change sequences --------------------------------------------------

def validate_mind_change(steps: Sequence) -> tuple[bool, int | None]:
    """Check ``[(value, mark), ...]`` for one argument.

    Returns ``(True, None)`` or ``(False, i)`` where ``i`` is the first
    offending step.
    """
    for i, (value, mark) in enumerate(steps):
        mark = _coerce(mark)
        if i == 0:
            if value != 0:
                return False, 0
            continue
        prev_value, prev_mark = steps[i - 1]
        c = ord_cmp(mark, _coerce(prev_mark))
        if c > 0:
            return False, i
        if value != prev_value and c == 0:
            return False, i
    return True, None
