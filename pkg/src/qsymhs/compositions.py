"""Compositions, the refinement order on them, and set partitions.

A composition is an ordered tuple of positive integers.  The empty
composition stands for the unit of the algebra.  Words over the alphabet
``{x, y}`` ending in ``y`` are in bijection with nonempty compositions via
``(i1, ..., ik) <-> x^(i1-1) y ... x^(ik-1) y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial, prod
from typing import Iterable, Iterator


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class Composition(tuple):
    """Immutable tuple of positive integer parts.

    Equality and hashing are those of the underlying tuple, so a
    ``Composition`` compares equal to the plain tuple of its parts.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(i) for i in parts)
        for i in parts:
            if i < 1:
                raise DomainError(f"composition parts must be positive, got {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def __add__(self, other):
        return Composition(tuple(self) + tuple(other))

    def __repr__(self) -> str:
        return f"Composition({tuple(self)!r})"

    def __str__(self) -> str:
        return "(" + ",".join(str(i) for i in self) + ")"

    def sort_key(self) -> tuple:
        return (self.weight, tuple(self))

    @classmethod
    def parse(cls, text: str) -> "Composition":
        """Parse ``"(2,1,1)"``, ``"2,1,1"``, ``"()"`` or the compact form ``"211"``."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1].strip()
            if not s:
                return cls()
            if "," not in s and not s.isdigit():
                raise DomainError(f"malformed composition {text!r}")
            fields = s.split(",") if "," in s else [s]
        elif "," in s:
            fields = s.split(",")
        elif re.fullmatch(r"[1-9]+", s):
            # compact digit form, only meaningful when every part is <= 9
            return cls(int(c) for c in s)
        else:
            raise DomainError(f"malformed composition {text!r}")
        try:
            parts = [int(f) for f in fields]
        except ValueError:
            raise DomainError(f"malformed composition {text!r}") from None
        return cls(parts)


def as_composition(value) -> Composition:
    if isinstance(value, Composition):
        return value
    if isinstance(value, str):
        return Composition.parse(value)
    return Composition(value)


def canonical_sorted(comps: Iterable) -> list[Composition]:
    """Sort by weight, then lexicographically on parts."""
    return sorted((as_composition(c) for c in comps), key=Composition.sort_key)


def compositions(n: int) -> Iterator[Composition]:
    """All compositions of weight ``n`` in canonical (lexicographic) order."""
    if n < 0:
        raise DomainError("weight must be nonnegative")
    if n == 0:
        yield Composition()
        return
    out = []
    for k in range(1, n + 1):
        for cuts in combinations(range(1, n), k - 1):
            out.append(from_subset(cuts, n))
    yield from sorted(out)


def compositions_up_to(max_weight: int, min_weight: int = 1) -> Iterator[Composition]:
    for n in range(min_weight, max_weight + 1):
        yield from compositions(n)


def to_subset(I) -> frozenset[int]:
    """Partial sums ``{i1, i1+i2, ..., i1+...+i_{k-1}}``."""
    out = set()
    s = 0
    for i in tuple(I)[:-1]:
        s += i
        out.add(s)
    return frozenset(out)


def from_subset(subset: Iterable[int], n: int) -> Composition:
    cuts = sorted(subset)
    if cuts and (cuts[0] < 1 or cuts[-1] > n - 1):
        raise DomainError(f"subset {cuts} not inside 1..{n - 1}")
    points = [0, *cuts, n]
    return Composition(b - a for a, b in zip(points, points[1:]))


def dual(I) -> Composition:
    """The involution obtained by complementing the partial-sum subset."""
    I = as_composition(I)
    if not I:
        raise DomainError("the empty composition has no dual")
    n = I.weight
    return from_subset(set(range(1, n)) - to_subset(I), n)


def reverse(I) -> Composition:
    return Composition(reversed(tuple(I)))


def refines(I, J) -> bool:
    """True iff ``J`` is obtained from ``I`` by summing runs of adjacent parts."""
    I, J = as_composition(I), as_composition(J)
    if I.weight != J.weight:
        return False
    return to_subset(J) <= to_subset(I)


def coarsenings(I) -> list[Composition]:
    """All ``J`` with ``I`` refining ``J`` (including ``I``), 2^(k-1) of them."""
    I = as_composition(I)
    if not I:
        return [I]
    k = len(I)
    out = []
    for mask in range(1 << (k - 1)):
        # bit g set = merge across gap g
        parts = [I[0]]
        for g in range(k - 1):
            if mask >> g & 1:
                parts[-1] += I[g + 1]
            else:
                parts.append(I[g + 1])
        out.append(Composition(parts))
    return canonical_sorted(out)


def refinements(I) -> list[Composition]:
    """All ``J`` refining ``I`` (including ``I``); prod 2^(i_t - 1) of them."""
    I = as_composition(I)
    pieces: list[list[tuple[int, ...]]] = []
    for part in I:
        # each subset of the part's interior points splits it
        opts = []
        for mask in range(1 << (part - 1)):
            cuts = [c for c in range(1, part) if mask >> (c - 1) & 1]
            opts.append(tuple(from_subset(cuts, part)))
        pieces.append(opts)
    out = [Composition()]
    for opts in pieces:
        out = [Composition(tuple(a) + o) for a in out for o in opts]
    return canonical_sorted(out)


def mobius(J, I) -> int:
    """Möbius function of the refinement order: nonzero only when I refines J."""
    if not refines(I, J):
        return 0
    return (-1) ** (len(I) - len(J))


def c_statistic(I) -> int:
    """sum_{j<k} (-1)^(i1+..+ij) * binom(|I|, i1+..+ij) for odd |I| and k >= 2."""
    I = as_composition(I)
    if len(I) < 2:
        raise DomainError(f"C(I) needs length >= 2, got {I}")
    n = I.weight
    if n % 2 == 0:
        raise DomainError(f"C(I) needs odd weight, got {I}")
    total = 0
    s = 0
    for i in I[:-1]:
        s += i
        total += (-1) ** s * comb(n, s)
    return total


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{1, ..., k}`` into blocks (1-based, sorted)."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def coefficient(self) -> int:
        """c(B) = prod (|B_s| - 1)!"""
        return prod(factorial(len(b) - 1) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_sums(self, I) -> tuple[int, ...]:
        I = tuple(I)
        return tuple(sum(I[j - 1] for j in b) for b in self.blocks)


def set_partitions(k: int) -> Iterator[SetPartition]:
    """Every set partition of ``{1..k}`` exactly once (Bell(k) of them)."""
    if k < 1:
        raise DomainError("k must be >= 1")

    def rec(m: int, blocks: list[list[int]]):
        if m > k:
            yield SetPartition(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(m)
            yield from rec(m + 1, blocks)
            b.pop()
        blocks.append([m])
        yield from rec(m + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def word_of(I) -> str:
    """``(i1, ..., ik) -> x^(i1-1) y ... x^(ik-1) y`` as a string over ``xy``."""
    return "".join("x" * (i - 1) + "y" for i in as_composition(I))


def composition_of(w: str) -> Composition:
    if w and not w.endswith("y"):
        raise DomainError(f"word {w!r} does not end in y")
    if set(w) - {"x", "y"}:
        raise DomainError(f"word {w!r} is not over the alphabet {{x, y}}")
    parts = []
    run = 0
    for ch in w:
        if ch == "x":
            run += 1
        else:
            parts.append(run + 1)
            run = 0
    return Composition(parts)
