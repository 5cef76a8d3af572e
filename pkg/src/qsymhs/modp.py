"""Arithmetic in Z/pZ and the special numbers used by the congruences.

Exact rationals are :class:`fractions.Fraction`.  Bernoulli numbers use the
recurrence ``sum_{j=0}^{m} binom(m+1, j) B_j = 0`` (so ``B_1 = -1/2``).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from sympy import isprime

from .compositions import DomainError

ExactRational = Fraction

# above this size inverses are computed per call instead of tabulated
INVERSE_TABLE_LIMIT = 1 << 20


class PrimeCtx:
    """A prime modulus with a precomputed table of inverses when affordable."""

    __slots__ = ("p", "_inv")

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not isprime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self._inv: tuple[int, ...] | None = None
        if p <= INVERSE_TABLE_LIMIT:
            inv = [0, 1] + [0] * (p - 2) if p > 2 else [0, 1]
            for a in range(2, p):
                inv[a] = (p - (p // a) * inv[p % a] % p) % p
            self._inv = tuple(inv)

    def __repr__(self):
        return f"PrimeCtx({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeCtx) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeCtx", self.p))

    def __reduce__(self):
        return (PrimeCtx, (self.p,))

    @property
    def inverse_table(self) -> tuple[int, ...] | None:
        return self._inv

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        if self._inv is not None:
            return self._inv[a]
        return pow(a, -1, self.p)

    def reduce(self, q) -> int:
        """Reduce an int or Fraction with denominator prime to p."""
        if isinstance(q, Fraction):
            if q.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {q} divisible by {self.p}")
            return q.numerator % self.p * self.inv(q.denominator) % self.p
        return int(q) % self.p

    def __call__(self, value) -> "Residue":
        return Residue(self.reduce(value), self)


@lru_cache(maxsize=64)
def prime_ctx(p: int) -> PrimeCtx:
    return PrimeCtx(p)


class Residue:
    """An element of Z/pZ."""

    __slots__ = ("value", "ctx")

    def __init__(self, value: int, ctx: PrimeCtx):
        self.ctx = ctx
        self.value = int(value) % ctx.p

    @property
    def p(self) -> int:
        return self.ctx.p

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.ctx.p != self.ctx.p:
                raise DomainError(f"moduli differ: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.ctx.reduce(other)
        raise TypeError(f"cannot combine Residue with {type(other).__name__}")

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.ctx)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.ctx)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.ctx)

    def __truediv__(self, other):
        return Residue(self.value * self.ctx.inv(self._coerce(other)), self.ctx)

    def __rtruediv__(self, other):
        return Residue(self._coerce(other) * self.ctx.inv(self.value), self.ctx)

    def __pow__(self, e: int):
        if e < 0:
            return Residue(pow(self.ctx.inv(self.value), -e, self.p), self.ctx)
        return Residue(pow(self.value, e, self.p), self.ctx)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.ctx.reduce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)

    def inv(self) -> "Residue":
        return Residue(self.ctx.inv(self.value), self.ctx)

    def signed(self) -> int:
        """Representative in (-p/2, p/2]."""
        return self.value - self.p if self.value > self.p // 2 else self.value

    def to_json(self) -> dict:
        return {"value": str(self.value), "modulus": str(self.p)}


def inv(a: Residue) -> Residue:
    if not a:
        raise DomainError(f"0 has no inverse mod {a.p}")
    return a.inv()


def _binom_small_mod(n: int, k: int, ctx: PrimeCtx) -> int:
    # n < p here, so every factor below is a unit
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    num = den = 1
    p = ctx.p
    for i in range(1, k + 1):
        num = num * (n - k + i) % p
        den = den * i % p
    return num * ctx.inv(den) % p if den != 1 else num


def binom_mod(n: int, k: int, ctx: PrimeCtx) -> Residue:
    """``binom(n, k) mod p``; Lucas' theorem on base-p digits when ``n >= p``."""
    if n < 0:
        raise DomainError("binom_mod needs n >= 0")
    if k < 0 or k > n:
        return Residue(0, ctx)
    p = ctx.p
    out = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return Residue(0, ctx)
        out = out * _binom_small_mod(nd, kd, ctx) % p
        n //= p
        k //= p
    return Residue(out, ctx)


# -- Bernoulli numbers ----------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_exact_table(k: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, k + 1):
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli_exact(k: int) -> Fraction:
    """Exact ``B_k`` by the same recurrence over the rationals (small k)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return _bernoulli_exact_table(k)[k]


@lru_cache(maxsize=128)
def _bernoulli_mod_table(p: int, k: int) -> tuple[int, ...]:
    """``B_0..B_k mod p`` for ``k <= p - 2``.

    Rewrites the recurrence as
    ``B_m / m! = -sum_{j<m} (B_j / j!) / (m+1-j)!``
    which is a dot product, vectorised with int64 when ``k * p^2 < 2^63``.
    Odd indices ``>= 3`` are zero and skipped.
    """
    ctx = prime_ctx(p)
    fact = [1] * (k + 2)
    for i in range(1, k + 2):
        fact[i] = fact[i - 1] * i % p
    inv_fact = [0] * (k + 2)
    inv_fact[k + 1] = ctx.inv(fact[k + 1])
    for i in range(k + 1, 0, -1):
        inv_fact[i - 1] = inv_fact[i] * i % p
    # b[j] = B_j / j!
    b = [0] * (k + 1)
    b[0] = 1
    if k >= 1:
        b[1] = (-ctx.inv(2)) % p
    vectorise = k * p * p < (1 << 62)
    if vectorise:
        bv = np.zeros(k + 1, dtype=np.int64)
        bv[0] = b[0]
        if k >= 1:
            bv[1] = b[1]
        # ifr[t] = 1/(t)! laid out so a slice gives 1/(m+1-j)! for j = 0..m-1
        ifv = np.array(inv_fact, dtype=np.int64)
    for m in range(2, k + 1):
        if m % 2 == 1:
            continue
        if vectorise:
            # j runs over 0..m-1, (m+1-j) runs over m+1..2
            s = int(np.dot(bv[:m], ifv[m + 1 : 1 : -1]) % p)
        else:
            s = sum(b[j] * inv_fact[m + 1 - j] for j in range(m) if b[j]) % p
        val = -s % p
        b[m] = val
        if vectorise:
            bv[m] = val
    return tuple(b[m] * fact[m] % p for m in range(k + 1))


def bernoulli_mod_p(k: int, ctx: PrimeCtx) -> Residue:
    """``B_k mod p`` for ``0 <= k <= p - 2``."""
    if k < 0 or k > ctx.p - 2:
        raise DomainError(f"B_{k} mod {ctx.p} needs 0 <= k <= p-2")
    return Residue(_bernoulli_mod_table(ctx.p, k)[k], ctx)


def power_sum_via_bernoulli(r: int, n: int) -> Fraction:
    """``sum_{a=1}^{n-1} a^r`` from the Bernoulli-number closed form."""
    B = _bernoulli_exact_table(r)
    return sum(comb(r + 1, k) * B[k] * Fraction(n) ** (r + 1 - k) for k in range(r + 1)) / (r + 1)


def power_sum_mod(r: int, ctx: PrimeCtx) -> Residue:
    """``sum_{a=1}^{p-1} a^r mod p`` by direct summation."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    p = ctx.p
    return Residue(sum(pow(a, r, p) for a in range(1, p)), ctx)


# -- Stirling numbers -----------------------------------------------------


def _check_nk(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise DomainError("Stirling numbers need nonnegative n, k")


@lru_cache(maxsize=None)
def _stirling1_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling1_row(n - 1) + (0,)
    return tuple((prev[k - 1] if k else 0) + (n - 1) * prev[k] for k in range(n + 1))


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1) + (0,)
    return tuple((prev[k - 1] if k else 0) + k * prev[k] for k in range(n + 1))


def stirling1(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind (permutations with k cycles)."""
    _check_nk(n, k)
    if k > n:
        return 0
    return _stirling1_row(n)[k]


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind (set partitions into k blocks)."""
    _check_nk(n, k)
    if k > n:
        return 0
    return _stirling2_row(n)[k]


def stirling1_mod(n: int, k: int, ctx: PrimeCtx) -> Residue:
    """First-kind Stirling number mod p, by the recurrence on residues."""
    _check_nk(n, k)
    if k > n:
        return Residue(0, ctx)
    p = ctx.p
    # only columns 0..k are ever needed
    row = [1] + [0] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = (row[j - 1] + (m - 1) * row[j]) % p
        row[0] = 0
    return Residue(row[k], ctx)


def stirling2_mod(n: int, k: int, ctx: PrimeCtx) -> Residue:
    """Second-kind Stirling number mod p, by the recurrence on residues."""
    _check_nk(n, k)
    if k > n:
        return Residue(0, ctx)
    p = ctx.p
    row = [1] + [0] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            row[j] = (row[j - 1] + j * row[j]) % p
        row[0] = 0
    return Residue(row[k], ctx)


def stirling2_row_mod(n: int, ctx: PrimeCtx) -> list[int]:
    """``[S2(n, 0), ..., S2(n, n)] mod p`` for ``n < p``.

    Uses ``S2(n, j) = sum_i (-1)^(j-i) i^n / (i! (j-i)!)``, one dot product
    per column.
    """
    p = ctx.p
    if n >= p:
        return [stirling2_mod(n, j, ctx).value for j in range(n + 1)]
    fact = [1] * (n + 1)
    for i in range(1, n + 1):
        fact[i] = fact[i - 1] * i % p
    inv_fact = [ctx.inv(f) for f in fact]
    a = [pow(i, n, p) * inv_fact[i] % p for i in range(n + 1)]
    b = [(inv_fact[t] if t % 2 == 0 else -inv_fact[t] % p) for t in range(n + 1)]
    if n * p * p < (1 << 62):
        av = np.array(a, dtype=np.int64)
        bv = np.array(b, dtype=np.int64)
        return [int(np.dot(av[: j + 1], bv[j::-1]) % p) for j in range(n + 1)]
    return [sum(a[i] * b[j - i] for i in range(j + 1)) % p for j in range(n + 1)]


def factorial_mod(n: int, ctx: PrimeCtx) -> Residue:
    out = 1
    for i in range(2, n + 1):
        out = out * i % ctx.p
    return Residue(out, ctx)
