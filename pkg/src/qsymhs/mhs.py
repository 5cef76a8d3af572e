"""Multiple harmonic sums, exactly and modulo p.

``A_I(n)`` sums ``1/(n1^i1 ... nk^ik)`` over ``n >= n1 > ... > nk >= 1``;
``S_I(n)`` is the same over weak chains ``n >= n1 >= ... >= nk >= 1``.
Both are evaluated by layered prefix sums, innermost part first.
"""

from __future__ import annotations

import threading
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from sympy.utilities.iterables import multiset_permutations

from .compositions import (
    Composition,
    DomainError,
    as_composition,
    coarsenings,
    set_partitions,
)
from .modp import PrimeCtx, Residue, prime_ctx, stirling1, stirling2_row_mod
from .qsym import deconcatenations

KINDS = ("A", "S")

SumRef = tuple  # (kind, Composition)
# a signed product expansion: list of (coefficient, (SumRef, SumRef, ...))
Expansion = list


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise DomainError(f"unknown sum kind {kind!r}; expected 'A' or 'S'")


# -- exact evaluation -----------------------------------------------------


def eval_exact_table(kind: str, I, n: int) -> list[Fraction]:
    """``[X_I(0), X_I(1), ..., X_I(n)]`` as exact rationals.

    Intended for small ``n`` (denominators grow like ``lcm(1..n)^l``).
    """
    _check_kind(kind)
    I = as_composition(I)
    if n < 0:
        raise DomainError("n must be nonnegative")
    prefix = [Fraction(1)] * (n + 1)
    strict = kind == "A"
    for part in reversed(I):
        layer = [Fraction(0)] * (n + 1)
        for a in range(1, n + 1):
            inner = prefix[a - 1] if strict else prefix[a]
            layer[a] = inner / a**part
        run = Fraction(0)
        prefix = []
        for v in layer:
            run += v
            prefix.append(run)
    return prefix


def eval_exact(kind: str, I, n: int) -> Fraction:
    """Exact ``A_I(n)`` or ``S_I(n)``; the empty composition gives 1."""
    return eval_exact_table(kind, I, n)[n]


# -- mod p evaluation -----------------------------------------------------


@lru_cache(maxsize=4096)
def _inverse_powers(p: int, i: int) -> tuple[int, ...]:
    ctx = prime_ctx(p)
    table = ctx.inverse_table
    if table is None:
        return (0,) + tuple(pow(ctx.inv(a), i, p) for a in range(1, p))
    return (0,) + tuple(pow(table[a], i, p) for a in range(1, p))


def eval_mod_p_raw(kind: str, I, p: int) -> int:
    """``X_I(p-1) mod p`` as a plain int; O(l(I) * p) operations."""
    _check_kind(kind)
    I = tuple(I)
    if not I:
        return 1 % p
    strict = kind == "A"
    n = p - 1
    prefix = None  # None = the constant-1 base layer
    for part in reversed(I):
        w = _inverse_powers(p, part)
        out = [0] * (n + 1)
        run = 0
        if prefix is None:
            for a in range(1, n + 1):
                run = (run + w[a]) % p
                out[a] = run
        elif strict:
            for a in range(1, n + 1):
                run = (run + w[a] * prefix[a - 1]) % p
                out[a] = run
        else:
            for a in range(1, n + 1):
                run = (run + w[a] * prefix[a]) % p
                out[a] = run
        prefix = out
    return prefix[n]


def eval_mod_p(kind: str, I, ctx: PrimeCtx | int) -> Residue:
    """``A_I(p-1)`` or ``S_I(p-1)`` in Z/pZ."""
    if isinstance(ctx, int):
        ctx = prime_ctx(ctx)
    return Residue(eval_mod_p_raw(kind, as_composition(I), ctx.p), ctx)


class SumTable:
    """Per-prime cache of ``(kind, I) -> X_I(p-1) mod p``.

    Reads are lock-free; inserts take a lock so concurrent threads never
    evaluate into a half-built dict.
    """

    def __init__(self, ctx: PrimeCtx | int):
        self.ctx = prime_ctx(ctx) if isinstance(ctx, int) else ctx
        self._values: dict[tuple[str, Composition], int] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.evaluations = 0

    @property
    def p(self) -> int:
        return self.ctx.p

    def raw(self, kind: str, I) -> int:
        key = (kind, as_composition(I))
        val = self._values.get(key)
        if val is not None:
            self.hits += 1
            return val
        val = eval_mod_p_raw(kind, key[1], self.ctx.p)
        with self._lock:
            self._values.setdefault(key, val)
            self.evaluations += 1
        return val

    def __call__(self, kind: str, I) -> Residue:
        return Residue(self.raw(kind, I), self.ctx)

    def __len__(self) -> int:
        return len(self._values)

    def items(self):
        return sorted(self._values.items(), key=lambda kv: (kv[0][1].sort_key(), kv[0][0]))


# -- height one sums ------------------------------------------------------


def height_one(h: int, k: int) -> Composition:
    """The composition ``(h, 1^(k-1))``."""
    if h < 1 or k < 1:
        raise DomainError("height-one sums need h, k >= 1")
    return Composition((h,) + (1,) * (k - 1))


def height_one_exact(h: int, k: int, n: int) -> Fraction:
    """``A_{(h,1^(k-1))}(n) = sum_{j=k}^{n} s1(j, k) / (j^(h-1) j!)``."""
    height_one(h, k)
    return sum(
        (Fraction(stirling1(j, k), j ** (h - 1) * factorial(j)) for j in range(k, n + 1)),
        Fraction(0),
    )


def height_one_mod_p(h: int, k: int, ctx: PrimeCtx | int) -> Residue:
    """``A_{(h,1^(k-1))}(p-1) mod p`` via second-kind Stirling numbers.

    ``sum_{j=1}^{p-k} (-1)^j (-j)^(p-h) (j-1)! S2(p-k, j)``.
    """
    if isinstance(ctx, int):
        ctx = prime_ctx(ctx)
    height_one(h, k)
    p = ctx.p
    if h >= p or k >= p:
        raise DomainError("height_one_mod_p needs h, k < p")
    row = stirling2_row_mod(p - k, ctx)
    total = 0
    fact = 1  # (j-1)!
    for j in range(1, p - k + 1):
        if j > 1:
            fact = fact * (j - 1) % p
        term = pow(-j % p, p - h, p) * fact % p * row[j] % p
        total += -term if j % 2 else term
    return Residue(total, ctx)


# -- sequence operators ---------------------------------------------------


def sigma(seq: Sequence) -> list[Fraction]:
    """Partial sums ``(Sigma a)(n) = sum_{i<=n} a(i)``."""
    out = []
    run = Fraction(0)
    for v in seq:
        run += v
        out.append(run)
    return out


def sigma_inverse(seq: Sequence) -> list[Fraction]:
    """First differences, the inverse of :func:`sigma`."""
    return [Fraction(v) - (seq[i - 1] if i else 0) for i, v in enumerate(seq)]


def nabla(seq: Sequence) -> list[Fraction]:
    """``(nabla a)(n) = sum_{i<=n} binom(n, i) (-1)^i a(i)``."""
    return [
        sum((comb(n, i) * (-1) ** i * Fraction(seq[i]) for i in range(n + 1)), Fraction(0))
        for n in range(len(seq))
    ]


# -- A <-> S conversion ---------------------------------------------------


def convert_A_to_S(I) -> dict[Composition, int]:
    """``A_I = sum_{J coarser than I} (-1)^(l(I)-l(J)) S_J``."""
    I = as_composition(I)
    if not I:
        raise DomainError("needs a nonempty composition")
    return {J: (-1) ** (len(I) - len(J)) for J in coarsenings(I)}


def convert_S_to_A(I) -> dict[Composition, int]:
    """``S_I = sum_{J coarser than I} A_J``."""
    I = as_composition(I)
    if not I:
        raise DomainError("needs a nonempty composition")
    return {J: 1 for J in coarsenings(I)}


def expand_A_as_S_products(I) -> Expansion:
    """``A_I = sum (-1)^(l(I)-l) S_{rev I1} ... S_{rev Il}`` over deconcatenations."""
    I = as_composition(I)
    if not I:
        raise DomainError("needs a nonempty composition")
    out = []
    for pieces in deconcatenations(I):
        refs = tuple(("S", Composition(reversed(P))) for P in pieces)
        out.append(((-1) ** (len(I) - len(pieces)), refs))
    return out


def antipode_product_identity(I) -> tuple[Expansion, Expansion]:
    """Both sides of ``(-1)^l(I) S_{rev I} = sum (-1)^l A_{I1} ... A_{Il}``."""
    I = as_composition(I)
    if not I:
        raise DomainError("needs a nonempty composition")
    lhs = [((-1) ** len(I), (("S", Composition(reversed(I))),))]
    rhs = [((-1) ** len(pieces), tuple(("A", P) for P in pieces)) for pieces in deconcatenations(I)]
    return lhs, rhs


def evaluate_expansion(expansion: Iterable, value: Callable[[str, Composition], object]):
    """Evaluate ``sum coeff * prod value(kind, I)`` with a caller-supplied evaluator."""
    total = 0
    for coeff, refs in expansion:
        term = coeff
        for kind, I in refs:
            term = term * value(kind, I)
        total = term + total
    return total


def exact_evaluator(n: int) -> Callable[[str, Composition], Fraction]:
    cache: dict = {}

    def value(kind: str, I) -> Fraction:
        key = (kind, as_composition(I))
        if key not in cache:
            cache[key] = eval_exact(kind, key[1], n)
        return cache[key]

    return value


# -- symmetric sums -------------------------------------------------------


@dataclass
class SymmetricSumReport:
    composition: Composition
    where: str
    s_symmetric: object
    s_partition: object
    a_symmetric: object
    a_partition: object
    vanishing_expected: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def s_ok(self) -> bool:
        return self.s_symmetric == self.s_partition

    @property
    def a_ok(self) -> bool:
        return self.a_symmetric == self.a_partition

    @property
    def vanishing_ok(self) -> bool:
        if not self.vanishing_expected:
            return True
        return self.s_symmetric == 0 and self.a_symmetric == 0

    @property
    def passed(self) -> bool:
        return self.s_ok and self.a_ok and self.vanishing_ok


def symmetric_sum_sides(I) -> tuple[Expansion, Expansion, Expansion, Expansion]:
    """Symbolic sides of the symmetric-sum formulas for S and A."""
    I = as_composition(I)
    k = len(I)
    # each distinct rearrangement occurs prod(m!) times among the k! permutations
    mult = 1
    for m in Counter(I).values():
        mult *= factorial(m)
    if not I:
        raise DomainError("needs a nonempty composition")
    perms = [Composition(perm) for perm in multiset_permutations(list(I))]
    s_sym = [(mult, (("S", J),)) for J in perms]
    a_sym = [(mult, (("A", J),)) for J in perms]
    s_part, a_part = [], []
    for part in set_partitions(k):
        refs = tuple(("S", Composition((b,))) for b in part.block_sums(I))
        c = part.coefficient
        s_part.append((c, refs))
        a_part.append(((-1) ** (k - len(part)) * c, refs))
    return s_sym, s_part, a_sym, a_part


def symmetric_sum_check(I, n: int | None = None, ctx: PrimeCtx | int | None = None) -> SymmetricSumReport:
    """Compare symmetrised sums with their set-partition expansions.

    With ``n`` the comparison is exact at that ``n``; with ``ctx`` it is mod
    p at ``n = p - 1`` and, when ``p > |I| + 1``, both symmetrised sums are
    also required to vanish.
    """
    I = as_composition(I)
    if (n is None) == (ctx is None):
        raise DomainError("give exactly one of n or ctx")
    s_sym, s_part, a_sym, a_part = symmetric_sum_sides(I)
    if n is not None:
        value = exact_evaluator(n)
        where = f"n={n}"
        vanish = False
    else:
        table = SumTable(ctx)
        value = table
        where = f"p={table.p}"
        vanish = table.p > I.weight + 1
    return SymmetricSumReport(
        composition=I,
        where=where,
        s_symmetric=evaluate_expansion(s_sym, value),
        s_partition=evaluate_expansion(s_part, value),
        a_symmetric=evaluate_expansion(a_sym, value),
        a_partition=evaluate_expansion(a_part, value),
        vanishing_expected=vanish,
    )


def evaluation_rows(table: SumTable) -> list[tuple[str, str, int, int]]:
    """CSV-ready ``(kind, composition, p, value)`` rows from a cache."""
    return [(kind, str(I), table.p, v) for (kind, I), v in table.items()]


def expansion_as_dict(expansion: Expansion) -> dict:
    acc: dict = defaultdict(int)
    for c, refs in expansion:
        acc[tuple(sorted(refs))] += c
    return {k: v for k, v in acc.items() if v}
