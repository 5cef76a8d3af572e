"""Products of harmonic sums and Bernoulli numbers, and rational combinations of them.

A factor is ``S(2,1)``, ``A(3,1,1)`` or ``B(p-3)`` (the Bernoulli number
``B_{p-3}``, weight 3).  A :class:`GenExpr` is a commutative product of
factors; a linear combination maps ``GenExpr -> Fraction``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .compositions import Composition, DomainError, as_composition
from .mhs import SumTable
from .modp import bernoulli_mod_p


class Factor(NamedTuple):
    kind: str  # "A", "S" or "B"
    index: object  # Composition for sums, int k for B_{p-k}

    @property
    def weight(self) -> int:
        return self.index if self.kind == "B" else self.index.weight

    def sort_key(self):
        if self.kind == "B":
            return (1, self.index, ())
        return (0, self.index.weight, tuple(self.index), self.kind)

    def __str__(self) -> str:
        if self.kind == "B":
            return f"B(p-{self.index})"
        return f"{self.kind}{self.index}"


def S(*parts) -> "GenExpr":
    return GenExpr.of(Factor("S", _comp(parts)))


def A(*parts) -> "GenExpr":
    return GenExpr.of(Factor("A", _comp(parts)))


def B(offset: int) -> "GenExpr":
    """``B_{p - offset}``."""
    return GenExpr.of(Factor("B", int(offset)))


def _comp(parts) -> Composition:
    if len(parts) == 1 and not isinstance(parts[0], int):
        return as_composition(parts[0])
    return Composition(parts)


@dataclass(frozen=True)
class GenExpr:
    """A product of factors in canonical order; the empty product is 1."""

    factors: tuple[Factor, ...] = ()

    @classmethod
    def of(cls, *factors: Factor) -> "GenExpr":
        return cls(tuple(sorted(factors, key=Factor.sort_key)))

    @property
    def degree(self) -> int:
        return sum(f.weight for f in self.factors)

    def __mul__(self, other: "GenExpr") -> "GenExpr":
        return GenExpr.of(*self.factors, *other.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(str(f) for f in self.factors)

    def sort_key(self):
        return (len(self.factors), [f.sort_key() for f in self.factors])

    def value(self, table: SumTable) -> int:
        """Residue of the product at ``table``'s prime."""
        p = table.p
        out = 1 % p
        for f in self.factors:
            if f.kind == "B":
                out = out * bernoulli_mod_p(p - f.index, table.ctx).value % p
            else:
                out = out * table.raw(f.kind, f.index) % p
        return out

    @classmethod
    def parse(cls, text: str) -> "GenExpr":
        text = text.strip()
        if text == "1":
            return cls()
        factors = []
        for tok in _split_top(text, "*"):
            factors.append(_parse_factor(tok))
        return cls.of(*factors)


_FACTOR_RE = re.compile(r"^\s*([AS])\s*(\([\d,\s]*\))\s*$|^\s*B\s*\(\s*p\s*-\s*(\d+)\s*\)\s*$")


def _parse_factor(tok: str) -> Factor:
    m = _FACTOR_RE.match(tok)
    if not m:
        raise DomainError(f"cannot parse factor {tok!r}")
    if m.group(3):
        return Factor("B", int(m.group(3)))
    return Factor(m.group(1), Composition.parse(m.group(2)))


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


# -- linear combinations --------------------------------------------------

LinComb = dict  # GenExpr -> Fraction


def lin(items: Mapping | None = None) -> LinComb:
    acc: dict[GenExpr, Fraction] = defaultdict(Fraction)
    for g, c in (items or {}).items():
        acc[g] += Fraction(c)
    return {g: c for g, c in acc.items() if c}


def lin_add(*combs: Mapping) -> LinComb:
    acc: dict[GenExpr, Fraction] = defaultdict(Fraction)
    for lc in combs:
        for g, c in lc.items():
            acc[g] += c
    return {g: c for g, c in acc.items() if c}


def lin_scale(lc: Mapping, s) -> LinComb:
    s = Fraction(s)
    return {g: c * s for g, c in lc.items() if c * s}


def lin_mul(a: Mapping, b: Mapping) -> LinComb:
    acc: dict[GenExpr, Fraction] = defaultdict(Fraction)
    for g, c in a.items():
        for h, d in b.items():
            acc[g * h] += c * d
    return {g: c for g, c in acc.items() if c}


def lin_value(lc: Mapping, table: SumTable) -> int:
    """Residue of a combination; ZeroDivisionError if p divides a denominator."""
    p = table.p
    total = 0
    for g, c in lc.items():
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"coefficient {c} has denominator divisible by {p}")
        total += table.ctx.reduce(c) * g.value(table)
    return total % p


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_lincomb(lc: Mapping) -> str:
    if not lc:
        return "0"
    pieces = []
    for g in sorted(lc, key=GenExpr.sort_key):
        c = lc[g]
        mag = abs(c)
        body = str(g) if mag == 1 else (format_rational(mag) if not g.factors else f"{format_rational(mag)}*{g}")
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_RATIONAL_RE = re.compile(r"^\s*(\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_lincomb(text: str) -> LinComb:
    """Inverse of :func:`format_lincomb`; also accepts ``+ -c*g`` spellings."""
    text = text.strip()
    if text == "0":
        return {}
    # split on top-level + and - (not the minus inside B(p-k))
    terms, depth, cur, sign = [], 0, "", 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            if cur.strip():
                terms.append((sign, cur))
                cur = ""
                sign = 1
            sign *= -1 if ch == "-" else 1
        else:
            cur += ch
        i += 1
    if cur.strip():
        terms.append((sign, cur))
    acc: dict[GenExpr, Fraction] = defaultdict(Fraction)
    for sign, body in terms:
        toks = _split_top(body.strip(), "*")
        coeff = Fraction(1)
        m = _RATIONAL_RE.match(toks[0])
        if m:
            coeff = Fraction(int(m.group(1)), int(m.group(2) or 1))
            toks = toks[1:]
        g = GenExpr.of(*(_parse_factor(t) for t in toks)) if toks else GenExpr()
        acc[g] += sign * coeff
    return {g: c for g, c in acc.items() if c}
