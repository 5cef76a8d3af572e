"""Recover small rational coefficients of a congruence from residues at several primes.

Given a target ``T`` and generators ``G_1..G_m`` we look for rationals
``c_g`` with ``T == sum c_g G_g (mod p)`` for every prime used.  Writing
``c_g = a_g / d`` this is the integer condition
``sum a_g G_g(p) - d T(p) == 0 (mod p)``; after Chinese remaindering it is a
single congruence modulo ``M = prod p`` and the wanted ``(a, d)`` is an
unusually short vector of the lattice of its solutions.

One generator is handled by dividing residues and reconstructing the
rational from its CRT lift; several generators by lattice reduction.
Either way the answer is checked at a held-out prime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, prod
from typing import Sequence

from sympy.ntheory.modular import crt
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .compositions import DomainError
from .expr import GenExpr, format_lincomb
from .mhs import SumTable

DENOMINATOR_CAP = 10**4
# the solution must be this many times shorter than the next lattice vector
UNIQUENESS_MARGIN = 16


@dataclass
class FitResult:
    status: str  # "ok", "no solution" or "need more primes"
    coefficients: list[Fraction] | None
    target: GenExpr
    generators: list[GenExpr]
    primes: list[int]
    holdout: int | None = None
    notes: list[str] = field(default_factory=list)
    # integer vectors r with sum r_g * g == 0 at every prime used
    relations: list[list[int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def unique(self) -> bool:
        return self.ok and not self.relations

    def relation(self) -> str:
        if not self.ok:
            return self.status
        rhs = {g: c for g, c in zip(self.generators, self.coefficients) if c}
        return f"{self.target} == {format_lincomb(rhs)}"

    def generator_relations(self) -> list[str]:
        out = []
        for rel in self.relations:
            lc = {g: Fraction(c) for g, c in zip(self.generators, rel) if c}
            out.append(f"{format_lincomb(lc)} == 0")
        return out

    def admits(self, coefficients: Sequence) -> bool:
        """Whether ``coefficients`` differ from the fit by a rational combination of the relations."""
        if not self.ok:
            return False
        diff = [Fraction(c) - f for c, f in zip(coefficients, self.coefficients)]
        if not any(diff):
            return True
        if not self.relations:
            return False
        from sympy import Matrix, Rational

        R = Matrix(self.relations).T
        aug = R.row_join(Matrix([Rational(d.numerator, d.denominator) for d in diff]))
        return R.rank() == aug.rank()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "target": str(self.target),
            "generators": [str(g) for g in self.generators],
            "coefficients": None if self.coefficients is None else [str(c) for c in self.coefficients],
            "primes": self.primes,
            "holdout": self.holdout,
            "relations": self.generator_relations(),
            "notes": self.notes,
        }


def rational_reconstruction(a: int, m: int, bound: int | None = None, den_cap: int = DENOMINATOR_CAP):
    """Smallest ``n/d`` with ``n == a d (mod m)``, ``|n|, d <= bound``; ``None`` if absent.

    ``bound`` defaults to ``sqrt(m/2)``, which makes the answer unique.
    """
    if bound is None:
        bound = isqrt(m // 2)
    a %= m
    r0, r1, t0, t1 = m, a, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > min(bound, den_cap) or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _values(exprs: Sequence[GenExpr], primes: Sequence[int]) -> list[list[int]]:
    tables = [SumTable(p) for p in primes]
    return [[e.value(t) for t in tables] for e in exprs]


def _holds(target_vals, gen_vals, coeffs, primes) -> list[int]:
    """Primes (by index) where the fitted relation fails."""
    bad = []
    for k, p in enumerate(primes):
        rhs = 0
        for c, vals in zip(coeffs, gen_vals):
            if c.denominator % p == 0:
                bad.append(k)
                break
            rhs += c.numerator * pow(c.denominator, -1, p) * vals[k]
        else:
            if (rhs - target_vals[k]) % p:
                bad.append(k)
    return bad


def _fit_single(t_vals, g_vals, primes, notes):
    residues, moduli = [], []
    for t, g, p in zip(t_vals, g_vals, primes):
        if g % p == 0:
            if t % p:
                return "no solution", None, []
            notes.append(f"generator vanishes at p={p}; prime carries no information")
            continue
        residues.append(t * pow(g, -1, p) % p)
        moduli.append(p)
    if not moduli:
        return "need more primes", None, []
    a, m = crt(moduli, residues)
    c = rational_reconstruction(int(a), int(m))
    if c is None:
        return "need more primes", None, []
    return "ok", [c], []


def _norm2(v) -> int:
    return sum(x * x for x in v)


def _short_kernel(cols: list[int], M: int) -> list[list[int]] | None:
    """Basis of the genuine integer relations ``sum x_i cols_i == 0 (mod M)``.

    Reduction returns a basis of the full solution lattice; genuine
    relations are far shorter than the rest, so we cut at the largest jump
    in length (a first-jump cut can separate a very short solution from a
    genuine relation).  ``None`` means no clear gap.
    """
    dim = len(cols)
    K = M * (dim + 1)
    rows = []
    for i in range(dim):
        row = [0] * (dim + 1)
        row[i] = 1
        row[dim] = K * cols[i]
        rows.append(row)
    rows.append([0] * dim + [K * M])
    reduced = DomainMatrix([[ZZ(x) for x in r] for r in rows], (dim + 1, dim + 1), ZZ).lll().to_Matrix().tolist()
    kernel = [[int(x) for x in r[:dim]] for r in reduced if r[dim] == 0 and any(r[:dim])]
    kernel.sort(key=_norm2)
    if len(kernel) < 2:
        return None
    ratios = [Fraction(_norm2(kernel[r]), _norm2(kernel[r - 1])) for r in range(1, len(kernel))]
    best = max(range(len(ratios)), key=ratios.__getitem__)
    if ratios[best] <= UNIQUENESS_MARGIN**2:
        return None
    return kernel[: best + 1]


def _canonical(basis: list[list[int]]) -> tuple[list[int] | None, list[list[int]]]:
    """Split a relation basis into a particular solution and pure generator relations.

    The particular solution has the least positive last entry ``d`` and is
    then shortened against the pure relations, so the result depends only
    on the lattice, not on the basis handed in.
    """
    from sympy import Matrix

    # Euclid across rows on the last coordinate until one row carries it
    rows = [list(v) for v in basis]
    while sum(1 for v in rows if v[-1]) > 1:
        rows.sort(key=lambda v: (v[-1] == 0, abs(v[-1])))
        head = rows[0]
        for i in range(1, len(rows)):
            q = rows[i][-1] // head[-1]
            rows[i] = [x - q * y for x, y in zip(rows[i], head)]
    pivot = next((v for v in rows if v[-1]), None)
    pure = [v for v in rows if v[-1] == 0 and any(v)]
    if pivot is None:
        return None, pure
    if pivot[-1] < 0:
        pivot = [-x for x in pivot]
    if pure:
        # reduce the pure relations, then size-reduce the particular solution
        R = DomainMatrix([[ZZ(x) for x in v] for v in pure], (len(pure), len(pure[0])), ZZ).lll()
        pure = [[int(x) for x in r] for r in R.to_Matrix().tolist() if any(r)]
        # fix signs: first nonzero entry positive
        pure = [v if next(x for x in v if x) > 0 else [-x for x in v] for v in pure]
        pure.sort(key=lambda v: (_norm2(v), v))
        G = Matrix(pure)
        coeffs = (G * G.T).solve(G * Matrix(pivot))
        shift = Matrix([[round(c) for c in coeffs]])
        pivot = [int(x) for x in (Matrix([pivot]) - shift * G)]
    return pivot, pure


def _fit_lattice(t_vals, g_vals, primes, notes):
    M = prod(primes)
    cols = [int(crt(primes, vals)[0]) for vals in g_vals]
    cols.append(-int(crt(primes, t_vals)[0]) % M)
    kernel = _short_kernel(cols, M)
    if kernel is None:
        notes.append("no clear separation between genuine and accidental solutions")
        return "need more primes", None, []
    particular, pure = _canonical(kernel)
    relations = [v[:-1] for v in pure]
    if particular is None:
        return "no solution", None, relations
    d = particular[-1]
    coeffs = [Fraction(a, d) for a in particular[:-1]]
    if any(c.denominator > DENOMINATOR_CAP for c in coeffs):
        notes.append(f"denominator above cap {DENOMINATOR_CAP}")
        return "need more primes", None, relations
    return "ok", coeffs, relations


def fit_coefficients(
    target: GenExpr,
    generators: Sequence[GenExpr],
    primes: Sequence[int],
    holdout: int | None = None,
) -> FitResult:
    """Find rationals ``c`` with ``target == sum c_g g`` at all ``primes``.

    When the generators themselves satisfy integer relations at the primes
    used, the coefficients are only determined up to those relations; the
    result then carries them in ``relations`` next to a canonical solution.
    ``holdout`` (if given) is a further prime at which the solution and
    every relation must also hold; a mismatch yields ``"no solution"``.
    """
    generators = list(generators)
    primes = sorted(set(primes))
    if not generators:
        raise DomainError("need at least one generator")
    if len(primes) < 2:
        raise DomainError("need at least two primes")
    if holdout is not None and holdout in primes:
        raise DomainError("the held-out prime must not be among the fitting primes")
    weight = target.degree
    if any(g.degree != weight for g in generators):
        raise DomainError("generators must have the target's weight")
    small = [p for p in primes + ([holdout] if holdout else []) if p <= weight + 1]
    if small:
        raise DomainError(f"primes must exceed weight + 1 = {weight + 1}: {small}")
    notes: list[str] = []
    t_vals = _values([target], primes)[0]
    g_vals = _values(generators, primes)
    if len(generators) == 1:
        status, coeffs, relations = _fit_single(t_vals, g_vals[0], primes, notes)
    else:
        status, coeffs, relations = _fit_lattice(t_vals, g_vals, primes, notes)
    result = FitResult(status, coeffs, target, generators, primes, holdout, notes, relations)
    if status != "ok":
        return result
    if _holds(t_vals, g_vals, coeffs, primes):
        result.status, result.coefficients = "no solution", None
        return result
    if holdout is not None:
        ht = _values([target], [holdout])[0]
        hg = _values(generators, [holdout])
        zero = [0]
        if _holds(ht, hg, coeffs, [holdout]) or any(
            _holds(zero, hg, [Fraction(x) for x in rel], [holdout]) for rel in relations
        ):
            notes.append(f"fitted relation fails at held-out prime {holdout}")
            result.status, result.coefficients = "no solution", None
    return result


def consistent_at(target: GenExpr, generators: Sequence[GenExpr], coefficients: Sequence, primes: Sequence[int]) -> bool:
    """Whether a given relation holds at every prime in ``primes``."""
    coeffs = [Fraction(c) for c in coefficients]
    return not _holds(_values([target], primes)[0], _values(generators, primes), coeffs, list(primes))
