"""Named congruence families, checked prime by prime.

Each theorem id maps to a generator of checks at a single prime; a sweep
runs it over a list of primes (optionally in worker processes) and merges
the outcomes into a :class:`VerificationReport`.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .compositions import (
    Composition,
    DomainError,
    composition_of,
    compositions,
    compositions_up_to,
    dual,
    reverse,
    word_of,
)
from .congruences import (
    Congruence,
    InstanceResult,
    reduce_double,
    reduce_quad_even,
    reduce_quint_odd,
    reduce_triple,
    square_law,
)
from .expr import lin_value
from .mhs import SumTable, height_one, height_one_mod_p, symmetric_sum_check
from .qsym import WordPoly, psi_word
from .relations import TablePipeline, load_conjectures, load_tables, published_values


@dataclass
class VerificationReport:
    """Outcome of one theorem (or weight table) over a list of primes."""

    theorem: str
    primes: list[int]
    results: list[InstanceResult] = field(default_factory=list)
    elapsed: float = 0.0
    conjecture: bool = False

    @property
    def failures(self) -> list[InstanceResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def skipped(self) -> list[InstanceResult]:
        return [r for r in self.results if r.status == "skip"]

    @property
    def checked(self) -> int:
        return sum(1 for r in self.results if r.status != "skip")

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        if self.conjecture:
            return "conjecture consistent" if self.passed else "conjecture violated"
        return "pass" if self.passed else "FAIL"

    def summary(self) -> str:
        span = f"{self.primes[0]}..{self.primes[-1]}" if self.primes else "none"
        return (
            f"{self.theorem}: {self.verdict} ({self.checked} checks, {len(self.skipped)} skipped, "
            f"{len(self.primes)} primes in {span}, {self.elapsed:.2f}s)"
        )

    def to_text(self, show_skips: bool = False) -> str:
        lines = [self.summary()]
        for r in self.failures:
            lines.append(f"  fail p={r.p}: {r.label}  lhs={r.lhs} rhs={r.rhs}")
        if show_skips:
            for r in self.skipped:
                lines.append(f"  skip p={r.p}: {r.label}  ({r.note})")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "conjecture": self.conjecture,
            "primes": self.primes,
            "checked": self.checked,
            "skipped": len(self.skipped),
            "elapsed": round(self.elapsed, 4),
            "failures": [r.to_json() for r in self.failures],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# -- per-prime instance generators ----------------------------------------
#
# Every generator takes (table, max_weight, tables_dir) and yields
# InstanceResult objects for the prime of ``table``.

Checker = Callable[[SumTable, int, "str | None"], Iterator[InstanceResult]]


def _result(theorem: str, label: str, p: int, lhs: int, rhs: int) -> InstanceResult:
    return InstanceResult(theorem, label, p, "pass" if lhs == rhs else "fail", lhs, rhs)


def _nonempty(max_weight: int) -> Iterator[Composition]:
    return (I for I in compositions_up_to(max_weight) if I)


def _check_symmetric(table, max_weight, _dir) -> Iterator[InstanceResult]:
    for I in _nonempty(max_weight):
        rep = symmetric_sum_check(I, ctx=table.ctx)
        for kind, ok, lhs, rhs in (
            ("S", rep.s_ok, rep.s_symmetric, rep.s_partition),
            ("A", rep.a_ok, rep.a_symmetric, rep.a_partition),
        ):
            label = f"sym {kind}{I} == set-partition expansion"
            yield InstanceResult("4.1", label, table.p, "pass" if ok else "fail", int(lhs), int(rhs))


def _check_symmetric_vanishing(table, max_weight, _dir) -> Iterator[InstanceResult]:
    for I in _nonempty(max_weight):
        if table.p <= I.weight + 1:
            yield InstanceResult("4.4", f"sym {I} == 0", table.p, "skip", note=f"needs p > {I.weight + 1}")
            continue
        rep = symmetric_sum_check(I, ctx=table.ctx)
        yield _result("4.4", f"sym S{I} == 0", table.p, int(rep.s_symmetric), 0)
        yield _result("4.4", f"sym A{I} == 0", table.p, int(rep.a_symmetric), 0)


def _check_length_one(table, max_weight, _dir) -> Iterator[InstanceResult]:
    for k in range(1, max_weight + 1):
        if table.p <= k + 1:
            yield InstanceResult("4.3", f"S({k}) == 0", table.p, "skip", note=f"needs p > {k + 1}")
            continue
        yield _result("4.3", f"S({k}) == 0", table.p, table.raw("S", (k,)), 0)


def _check_constant(table, max_weight, _dir) -> Iterator[InstanceResult]:
    for r in range(1, max_weight + 1):
        for k in range(1, max_weight // r + 1):
            I = Composition((r,) * k)
            if table.p <= r * k + 1:
                yield InstanceResult("eq19", f"{I} == 0", table.p, "skip", note=f"needs p > {r * k + 1}")
                continue
            for kind in ("A", "S"):
                yield _result("eq19", f"{kind}{I} == 0", table.p, table.raw(kind, I), 0)


def _check_reversal(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for I in _nonempty(max_weight):
        sign = (-1) ** I.weight
        for kind in ("A", "S"):
            label = f"{kind}{I} == {'+' if sign > 0 else '-'}{kind}{reverse(I)}"
            yield _result("4.5", label, p, table.raw(kind, I), sign * table.raw(kind, reverse(I)) % p)


def _check_duality(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for I in _nonempty(max_weight):
        D = dual(I)
        yield _result("4.6", f"S{I} == -S{D}", p, table.raw("S", I), -table.raw("S", D) % p)


def _check_psi(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for I in _nonempty(max_weight):
        w = word_of(I)
        image = psi_word(WordPoly.word(w))
        rhs = sum(c * table.raw("A", composition_of(v)) for v, c in image.terms.items()) % p
        yield _result("4.7", f"chi({w}) == chi(psi({w}))", p, table.raw("A", I), rhs)


def _height_pairs(max_weight: int) -> Iterator[tuple[int, int]]:
    for h in range(1, max_weight + 1):
        for k in range(1, max_weight + 2 - h):
            yield h, k


def _check_height_sign(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for h, k in _height_pairs(max_weight):
        I = height_one(h, k)
        label = f"S{I} == (-1)^{h} A{I}"
        if p <= k:
            yield InstanceResult("5.1", label, p, "skip", note=f"needs p > {k}")
            continue
        yield _result("5.1", label, p, table.raw("S", I), (-1) ** h * table.raw("A", I) % p)


def _check_height_symmetry(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for h, k in _height_pairs(max_weight):
        I, J = height_one(h, k), height_one(k, h)
        label = f"A{I} == A{J}"
        if p <= max(h, k):
            yield InstanceResult("5.2", label, p, "skip", note=f"needs p > {max(h, k)}")
            continue
        yield _result("5.2", label, p, table.raw("A", I), table.raw("A", J))


def _check_height_stirling(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for h, k in _height_pairs(max_weight):
        I = height_one(h, k)
        label = f"A{I} == Stirling-2 sum"
        if p <= max(h, k):
            yield InstanceResult("5.4", label, p, "skip", note=f"needs p > {max(h, k)}")
            continue
        yield _result("5.4", label, p, table.raw("A", I), height_one_mod_p(h, k, table.ctx).value)


def _check_congruences(theorem: str, congs: Iterable[Congruence], table: SumTable) -> Iterator[InstanceResult]:
    for c in congs:
        try:
            yield c.check(table, theorem)
        except ZeroDivisionError as exc:
            yield InstanceResult(theorem, c.label, table.p, "skip", note=str(exc))


def _reduction_family(theorem: str, build: Callable[[Composition], Congruence | None]) -> Checker:
    def run(table, max_weight, _dir):
        congs = []
        for I in _nonempty(max_weight):
            c = build(I)
            if c is not None:
                congs.append(c)
        return _check_congruences(theorem, congs, table)

    return run


def _double_bernoulli(I):
    return reduce_double(*I) if len(I) == 2 else None


def _double_sum(I):
    return reduce_double(*I, via="sum") if len(I) == 2 else None


def _triple(I):
    return reduce_triple(*I) if len(I) == 3 and I.weight % 2 else None


def _quad(I):
    return reduce_quad_even(*I) if len(I) == 4 and I.weight % 2 == 0 else None


def _quint(I):
    return reduce_quint_odd(*I) if len(I) == 5 and I.weight % 2 else None


def _check_square(table, max_weight, _dir) -> Iterator[InstanceResult]:
    p = table.p
    for n in range(2, max_weight // 2 + 1):
        for i in range(1, n):
            j = n - i
            yield from _check_congruences("eq26", [square_law(i, j)], table)
            if (i - j) % 2 == 0:
                I = Composition((i, j, i, j))
                label = f"S{I} == 0"
                if p <= 2 * n + 1:
                    yield InstanceResult("eq26", label, p, "skip", note=f"needs p > {2 * n + 1}")
                else:
                    yield _result("eq26", label, p, table.raw("S", I), 0)


def _table_family(theorem: str) -> Checker:
    def run(table, _max_weight, tables_dir):
        congs = [c for c in load_tables(tables_dir) if c.source == theorem]
        yield from _check_congruences(theorem, congs, table)
        yield from _published(theorem, table, tables_dir)

    return run


def _published(theorem: str, table: SumTable, tables_dir) -> Iterator[InstanceResult]:
    for pv in published_values(tables_dir):
        if pv.theorem == theorem and pv.p == table.p:
            yield _result(theorem, f"{pv.expr} == {pv.value}", table.p, pv.expr.value(table), pv.value % table.p)


def _check_zhao(table, _max_weight, tables_dir) -> Iterator[InstanceResult]:
    return _check_congruences("zhao", load_conjectures(tables_dir), table)


@dataclass(frozen=True)
class TheoremEntry:
    id: str
    description: str
    checker: Checker
    default_weight: int = 8
    default_primes: tuple[int, int] = (11, 101)
    conjecture: bool = False


REGISTRY: dict[str, TheoremEntry] = {
    e.id: e
    for e in (
        TheoremEntry("4.1", "symmetrised sums equal their set-partition expansions", _check_symmetric, 6),
        TheoremEntry("4.3", "S_(k)(p-1) vanishes for p > k+1", _check_length_one, 12),
        TheoremEntry("4.4", "symmetrised sums vanish for p > |I|+1", _check_symmetric_vanishing, 6),
        TheoremEntry("eq19", "S and A of a constant composition vanish", _check_constant, 12),
        TheoremEntry("4.5", "reversal changes the sign by (-1)^|I|", _check_reversal, 8),
        TheoremEntry("4.6", "S_I == -S_{I*}", _check_duality, 8),
        TheoremEntry("4.7", "evaluation commutes with psi on words", _check_psi, 7, (11, 61)),
        TheoremEntry("5.1", "height-one sign law between S and A", _check_height_sign, 8),
        TheoremEntry("5.2", "height-one symmetry h <-> k", _check_height_symmetry, 8),
        TheoremEntry("5.4", "height-one sums via Stirling numbers of the second kind", _check_height_stirling, 8),
        TheoremEntry("6.1", "double sums via Bernoulli numbers", _reduction_family("6.1", _double_bernoulli), 9),
        TheoremEntry("eq23", "odd-weight double sums via S_(n-1,1)", _reduction_family("eq23", _double_sum), 9),
        TheoremEntry("6.2", "odd-weight triple sums", _reduction_family("6.2", _triple), 9),
        TheoremEntry("6.3", "even-weight quadruple sums", _reduction_family("6.3", _quad), 10),
        TheoremEntry("6.4", "odd-weight quintuple sums", _reduction_family("6.4", _quint), 9),
        TheoremEntry("eq26", "2 S_(i,j,i,j) == S_(i,j)^2", _check_square, 10),
        TheoremEntry("7.w3", "weight 3 generator", _table_family("7.w3"), 3),
        TheoremEntry("7.1", "weight 5 table", _table_family("7.1"), 5),
        TheoremEntry("7.2", "weight 6 table", _table_family("7.2"), 6),
        TheoremEntry("7.3", "weight 7 table", _table_family("7.3"), 7),
        TheoremEntry("7.4", "weight 8 table", _table_family("7.4"), 8),
        TheoremEntry("7.5", "weight 9 table", _table_family("7.5"), 9),
        TheoremEntry("zhao", "conjectured weight 9 relation", _check_zhao, 9, (13, 500), conjecture=True),
    )
}


def theorem_ids() -> list[str]:
    return list(REGISTRY)


def _lookup(theorem: str) -> TheoremEntry:
    try:
        return REGISTRY[theorem]
    except KeyError:
        raise DomainError(f"unknown theorem id {theorem!r}; known: {', '.join(REGISTRY)}") from None


def _run_at_prime(theorem: str, max_weight: int, tables_dir, p: int) -> list[InstanceResult]:
    return list(REGISTRY[theorem].checker(SumTable(p), max_weight, tables_dir))


def _fan_out(fn: Callable[[int], list], primes: list[int], workers: int) -> list:
    if workers > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, primes))
    else:
        chunks = [fn(p) for p in primes]
    # primes were sorted up front, so concatenation is already canonical
    return [r for chunk in chunks for r in chunk]


def _prime_list(primes: Iterable[int]) -> list[int]:
    from sympy import isprime

    out = sorted(set(int(p) for p in primes))
    bad = [p for p in out if not isprime(p)]
    if bad:
        raise DomainError(f"not prime: {bad}")
    return out


def default_primes(theorem: str) -> list[int]:
    from sympy import primerange

    lo, hi = _lookup(theorem).default_primes
    return list(primerange(lo, hi + 1))


def check_theorem(
    theorem: str,
    primes: Iterable[int] | None = None,
    max_weight: int | None = None,
    workers: int = 1,
    tables_dir: str | Path | None = None,
) -> VerificationReport:
    """Check every instance of ``theorem`` at every prime."""
    entry = _lookup(theorem)
    primes = _prime_list(default_primes(theorem) if primes is None else primes)
    max_weight = entry.default_weight if max_weight is None else max_weight
    tables_dir = str(tables_dir) if tables_dir is not None else None
    start = time.perf_counter()
    results = _fan_out(partial(_run_at_prime, theorem, max_weight, tables_dir), primes, workers)
    return VerificationReport(theorem, primes, results, time.perf_counter() - start, entry.conjecture)


# -- weight tables ---------------------------------------------------------


def _weight_table_at_prime(n: int, tables_dir, p: int) -> list[InstanceResult]:
    theorem = f"weight-{n}"
    table = SumTable(p)
    if p <= n + 1:
        return [InstanceResult(theorem, f"weight {n} table", p, "skip", note=f"needs p > {n + 1}")]
    relations = load_tables(tables_dir)
    out = list(_check_congruences(theorem, [c for c in relations if c.weight == n], table))
    pipeline = TablePipeline(relations)
    for I in compositions(n):
        expr = pipeline.express(I)
        label = f"S{I} via {pipeline.trace[I]}"
        try:
            out.append(_result(theorem, label, p, table.raw("S", I), lin_value(expr, table)))
        except ZeroDivisionError as exc:
            out.append(InstanceResult(theorem, label, p, "skip", note=str(exc)))
    for pv in published_values(tables_dir):
        if pv.p == p and pv.expr.degree == n:
            out.append(_result(theorem, f"{pv.expr} == {pv.value}", p, pv.expr.value(table), pv.value % p))
    return out


def verify_weight_table(
    n: int,
    primes: Iterable[int] | None = None,
    workers: int = 1,
    tables_dir: str | Path | None = None,
) -> VerificationReport:
    """Check the weight-``n`` table rows and that every ``S_I`` of weight ``n``
    is reproduced by its pipeline expression in the generators.
    """
    from sympy import primerange

    if not 2 <= n <= 9:
        raise DomainError("weight tables cover 2 <= n <= 9")
    primes = _prime_list(primerange(n + 2, 102) if primes is None else primes)
    tables_dir = str(tables_dir) if tables_dir is not None else None
    start = time.perf_counter()
    results = _fan_out(partial(_weight_table_at_prime, n, tables_dir), primes, workers)
    return VerificationReport(f"weight-{n}", primes, results, time.perf_counter() - start)


def generator_values(n: int, p: int) -> list[tuple[str, int]]:
    """Residues of the weight-``n`` generators at ``p``."""
    from .relations import GENERATORS

    if n not in GENERATORS:
        return []
    table = SumTable(p)
    return [(str(g), g.value(table)) for g in GENERATORS[n]]
