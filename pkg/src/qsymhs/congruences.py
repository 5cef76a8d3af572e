"""Congruence records and the short-length reduction formulas for S_I(p-1).

Every reduction returns a :class:`Congruence` whose left side is a single
``S`` sum and whose right side is a rational combination of shorter sums,
products of sums, or Bernoulli numbers ``B_{p-k}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .compositions import Composition, DomainError, as_composition, c_statistic
from .expr import B, GenExpr, S, format_lincomb, lin, lin_add, lin_value
from .mhs import SumTable


@dataclass(frozen=True)
class InstanceResult:
    """Outcome of one congruence at one prime.

    ``status`` is ``"pass"``, ``"fail"`` or ``"skip"`` (a coefficient
    denominator is divisible by ``p``, or ``p`` is below the validity bound).
    """

    theorem: str
    label: str
    p: int
    status: str
    lhs: int | None = None
    rhs: int | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"theorem": self.theorem, "instance": self.label, "p": self.p, "status": self.status}
        if self.status == "fail":
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Congruence:
    """``lhs == sum c * g (mod p)`` claimed for every prime ``p > bound``."""

    lhs: GenExpr
    rhs: dict = field(default_factory=dict)
    bound: int = 0
    source: str = ""
    conjecture: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rhs", lin(self.rhs))
        for g in self.rhs:
            if g.degree != self.lhs.degree:
                raise DomainError(f"inhomogeneous congruence: {self.lhs} vs {g}")

    @property
    def weight(self) -> int:
        return self.lhs.degree

    @property
    def label(self) -> str:
        return f"{self.lhs} == {format_lincomb(self.rhs)}"

    def __str__(self) -> str:
        return f"{self.label}  (p > {self.bound})"

    def to_record(self) -> str:
        """One line of the relation-table format."""
        return f"{self.weight}; {self.lhs}; {format_lincomb(self.rhs)}; {self.bound}"

    def residues(self, table: SumTable) -> tuple[int, int]:
        return self.lhs.value(table), lin_value(self.rhs, table)

    def check(self, table: SumTable, theorem: str | None = None) -> InstanceResult:
        p = table.p
        theorem = theorem or self.source
        if p <= self.bound:
            return InstanceResult(theorem, self.label, p, "skip", note=f"needs p > {self.bound}")
        bad = [c for c in self.rhs.values() if c.denominator % p == 0]
        if bad:
            return InstanceResult(theorem, self.label, p, "skip", note=f"denominator of {bad[0]} divisible by p")
        lhs, rhs = self.residues(table)
        return InstanceResult(theorem, self.label, p, "pass" if lhs == rhs else "fail", lhs, rhs)


def _n(*parts) -> int:
    return sum(parts)


def reduce_double(i: int, j: int, via: str = "bernoulli") -> Congruence:
    """``S_(i,j) == (-1)^i / (i+j) * binom(i+j, i) * B_{p-i-j}`` for ``p > i+j+1``.

    With ``via="sum"`` the Bernoulli number is replaced by ``S_(i+j-1, 1)``.
    For even ``i + j`` the Bernoulli number has odd index and the right
    side is zero.
    """
    if i < 1 or j < 1:
        raise DomainError("reduce_double needs i, j >= 1")
    n = i + j
    coeff = Fraction((-1) ** i * comb(n, i), n)
    if via == "bernoulli":
        rhs = {B(n): coeff} if n % 2 == 1 else {}
        src = "6.1"
    elif via == "sum":
        rhs = {S(n - 1, 1): coeff}
        src = "eq23"
    else:
        raise DomainError(f"unknown variant {via!r}")
    return Congruence(S(i, j), rhs, bound=n + 1, source=src)


def reduce_triple(i: int, j: int, k: int) -> Congruence:
    """``S_(i,j,k) == C(I) / (2n) * S_(n-1,1)`` for odd ``n = i+j+k``, ``p > n+1``."""
    n = _n(i, j, k)
    if n % 2 == 0:
        raise DomainError(f"reduce_triple needs odd weight, got {n}")
    I = Composition((i, j, k))
    return Congruence(S(I), {S(n - 1, 1): Fraction(c_statistic(I), 2 * n)}, bound=n + 1, source="6.2")


def reduce_quad_even(i: int, j: int, k: int, l: int) -> Congruence:
    """Even-weight length-4 sums through triples and ``S_(i,j) S_(k,l)``."""
    n = _n(i, j, k, l)
    if n % 2 == 1:
        raise DomainError(f"reduce_quad_even needs even weight, got {n}")
    half = Fraction(1, 2)
    rhs = lin_add(
        {S(i + j, k, l): half},
        {S(i, j + k, l): half},
        {S(i, j, k + l): half},
        {S(i, j) * S(k, l): half},
    )
    return Congruence(S(i, j, k, l), rhs, bound=n + 1, source="6.3")


def reduce_quint_odd(i: int, j: int, k: int, l: int, m: int) -> Congruence:
    """Odd-weight length-5 sums through length 4, ``S_(n-1,1)`` and products."""
    n = _n(i, j, k, l, m)
    if n % 2 == 0:
        raise DomainError(f"reduce_quint_odd needs odd weight, got {n}")
    I = Composition((i, j, k, l, m))
    half = Fraction(1, 2)
    rhs = lin_add(
        {S(i + j, k, l, m): half},
        {S(i, j + k, l, m): half},
        {S(i, j, k + l, m): half},
        {S(i, j, k, l + m): half},
        {S(n - 1, 1): -Fraction(c_statistic(I), 4 * n)},
        {S(i, j) * S(k, l, m): half},
        {S(i, j, k) * S(l, m): half},
    )
    return Congruence(S(I), rhs, bound=n + 1, source="6.4")


def square_law(i: int, j: int) -> Congruence:
    """``2 S_(i,j,i,j) == S_(i,j)^2`` for ``p > 2(i+j)+1``."""
    return Congruence(
        S(i, j, i, j), {S(i, j) * S(i, j): Fraction(1, 2)}, bound=2 * (i + j) + 1, source="eq26"
    )


def reduce_any(I) -> Congruence:
    """Dispatch to the reduction matching ``I``'s length and weight parity."""
    I = as_composition(I)
    n, k = I.weight, len(I)
    if k == 2:
        return reduce_double(*I)
    if k == 3 and n % 2:
        return reduce_triple(*I)
    if k == 4 and n % 2 == 0:
        return reduce_quad_even(*I)
    if k == 5 and n % 2:
        return reduce_quint_odd(*I)
    raise DomainError(f"no short-length reduction for {I}")
