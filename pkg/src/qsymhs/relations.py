"""Relation tables and the pipeline that expresses every weight-n sum in generators.

Relation files are line oriented::

    # theorem: 7.5
    9; S(5,2,1,1); S(6,1,1,1) - 310/27*S(8,1) + 1/3*S(2,1)*S(4,1,1); 10

i.e. ``weight; lhs; rhs; bound`` with the congruence claimed for ``p > bound``.
``# theorem:`` and ``# status: conjecture`` comments apply to the lines
that follow them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

from sympy.utilities.iterables import multiset_permutations

from .compositions import Composition, DomainError, as_composition, dual, reverse
from .congruences import Congruence, reduce_double, reduce_quad_even, reduce_quint_odd, reduce_triple
from .expr import GenExpr, LinComb, S, lin_add, lin_mul, lin_scale, parse_lincomb

TABLE_FILES = ("weight3.rel", "weight5.rel", "weight6.rel", "weight7.rel", "weight8.rel", "weight9.rel")
CONJECTURE_FILES = ("zhao.rel",)

GENERATORS: dict[int, tuple[GenExpr, ...]] = {
    3: (S(2, 1),),
    5: (S(4, 1),),
    6: (S(4, 1, 1),),
    7: (S(6, 1), S(4, 1, 1, 1)),
    8: (S(6, 1, 1), S(2, 1) * S(4, 1)),
    9: (S(6, 1, 1, 1), S(8, 1), S(2, 1) * S(4, 1, 1)),
}


class TableFormatError(ValueError):
    pass


def parse_relation(line: str, source: str = "", conjecture: bool = False) -> Congruence:
    fields = [f.strip() for f in line.split(";")]
    if len(fields) != 4:
        raise TableFormatError(f"expected 'weight; lhs; rhs; bound', got {line!r}")
    weight, lhs, rhs, bound = fields
    try:
        weight = int(weight)
        cong = Congruence(
            GenExpr.parse(lhs), parse_lincomb(rhs), bound=int(bound), source=source, conjecture=conjecture
        )
    except (ValueError, DomainError) as exc:
        raise TableFormatError(f"bad record {line!r}: {exc}") from exc
    if cong.weight != weight:
        raise TableFormatError(f"declared weight {weight} but lhs has weight {cong.weight}: {line!r}")
    return cong


def parse_relations(text: str, source: str = "") -> list[Congruence]:
    out = []
    conjecture = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("theorem:"):
                source = body.split(":", 1)[1].strip()
                conjecture = False
            elif body.startswith("status:"):
                conjecture = body.split(":", 1)[1].strip() == "conjecture"
            continue
        out.append(parse_relation(line, source, conjecture))
    return out


def _read(name: str, tables_dir: str | Path | None) -> str:
    if tables_dir is not None:
        return (Path(tables_dir) / name).read_text()
    return resources.files("qsymhs").joinpath("tables", name).read_text()


def load_tables(tables_dir: str | Path | None = None, include_conjectures: bool = False) -> list[Congruence]:
    """All shipped relations (or those in ``tables_dir``)."""
    names = TABLE_FILES + (CONJECTURE_FILES if include_conjectures else ())
    out = []
    for name in names:
        out.extend(parse_relations(_read(name, tables_dir)))
    return out


def load_conjectures(tables_dir: str | Path | None = None) -> list[Congruence]:
    out = []
    for name in CONJECTURE_FILES:
        out.extend(parse_relations(_read(name, tables_dir)))
    return out


@dataclass(frozen=True)
class PublishedValue:
    theorem: str
    p: int
    expr: GenExpr
    value: int


def published_values(tables_dir: str | Path | None = None) -> list[PublishedValue]:
    lines = [l for l in _read("generator_values.csv", tables_dir).splitlines() if l and not l.startswith("#")]
    return [
        PublishedValue(row["theorem"], int(row["p"]), GenExpr.parse(row["expr"]), int(row["value"]))
        for row in csv.DictReader(lines)
    ]


# -- expression pipeline --------------------------------------------------


class ExpressionError(LookupError):
    """No rule expresses the sum in terms of the generators."""


class _Cycle(Exception):
    pass


class TablePipeline:
    """Rewrites ``S_I(p-1)`` as a rational combination of generator products.

    Rules, tried in order: generators themselves; vanishing of length-one and
    constant compositions; table rows (directly or via reversal); duality when
    the dual is shorter; the double/triple/quadruple/quintuple reductions;
    table rows reached through duality; duality in general; and finally the
    vanishing of the symmetrised sum.  A rule whose recursion runs into a
    sum already being expanded is abandoned in favour of the next one.  Valid for primes ``p > |I| + 1``.
    """

    def __init__(self, relations: Iterable[Congruence] | None = None):
        relations = load_tables() if relations is None else list(relations)
        gens = {g for gs in GENERATORS.values() for g in gs}
        self.rows: dict[Composition, LinComb] = {}
        for cong in relations:
            if len(cong.lhs.factors) != 1 or cong.lhs.factors[0].kind != "S" or cong.conjecture:
                continue
            # rows in Bernoulli numbers define generators, they are not rewrites
            if any(f.kind == "B" for g in cong.rhs for f in g.factors):
                continue
            if cong.lhs in gens:
                continue
            self.rows[cong.lhs.factors[0].index] = dict(cong.rhs)
        self._gens = gens
        self._memo: dict[Composition, LinComb] = {}
        self._active: set[Composition] = set()
        self.trace: dict[Composition, str] = {}

    def express(self, I) -> LinComb:
        I = as_composition(I)
        if I in self._memo:
            return self._memo[I]
        if I in self._active:
            raise _Cycle(I)
        self._active.add(I)
        try:
            for name, rule in self._rules():
                try:
                    out = rule(I)
                except (_Cycle, ExpressionError):
                    # a sub-expression is blocked on this path; try the next rule
                    continue
                if out is not None:
                    self._memo[I] = out
                    self.trace[I] = name
                    return out
        finally:
            self._active.discard(I)
        raise ExpressionError(f"cannot express S{I} in generators")

    def _rules(self):
        return (
            ("generator", self._generator),
            ("vanishing", self._vanishing),
            ("table", self._table),
            ("table-reversed", self._table_reversed),
            ("duality", self._shorter_dual),
            ("double", self._double),
            ("triple", self._triple),
            ("quadruple", self._quadruple),
            ("quintuple", self._quintuple),
            ("table-dual", self._table_dual),
            ("dual", self._dual),
            ("symmetric-sum", self._symmetric),
        )

    def _generator(self, I):
        g = S(I)
        return {g: Fraction(1)} if g in self._gens else None

    def _vanishing(self, I):
        if len(I) == 1 or len(set(I)) == 1:
            return {}
        return None

    def _table(self, I):
        return self.rows.get(I)

    def _known(self, I) -> LinComb | None:
        if S(I) in self._gens:
            return {S(I): Fraction(1)}
        return self.rows.get(I)

    def _table_reversed(self, I):
        row = self._known(reverse(I))
        if row is None:
            return None
        return lin_scale(row, (-1) ** I.weight)

    def _shorter_dual(self, I):
        D = dual(I)
        if len(D) < len(I):
            return lin_scale(self.express(D), -1)
        return None

    def _expand(self, cong: Congruence) -> LinComb:
        """Substitute pipeline expressions into each factor of ``cong.rhs``."""
        acc: LinComb = {}
        for g, c in cong.rhs.items():
            term: LinComb = {GenExpr(): Fraction(1)}
            for f in g.factors:
                if f.kind != "S":
                    raise ExpressionError(f"unexpected factor {f}")
                term = lin_mul(term, self.express(f.index))
            acc = lin_add(acc, lin_scale(term, c))
        return acc

    def _double(self, I):
        if len(I) != 2:
            return None
        if I.weight % 2 == 0:
            return {}
        return self._expand(reduce_double(*I, via="sum"))

    def _triple(self, I):
        if len(I) == 3 and I.weight % 2 == 1:
            return self._expand(reduce_triple(*I))
        return None

    def _quadruple(self, I):
        if len(I) == 4 and I.weight % 2 == 0:
            return self._expand(reduce_quad_even(*I))
        return None

    def _quintuple(self, I):
        if len(I) == 5 and I.weight % 2 == 1:
            return self._expand(reduce_quint_odd(*I))
        return None

    def _table_dual(self, I):
        D = dual(I)
        row = self._known(D)
        if row is not None:
            return lin_scale(row, -1)
        row = self._known(reverse(D))
        if row is not None:
            return lin_scale(row, -((-1) ** I.weight))
        return None

    def _dual(self, I):
        D = dual(I)
        if D == I:
            return None
        return lin_scale(self.express(D), -1)

    def _symmetric(self, I):
        # sum over distinct rearrangements vanishes; fold I's reversal into I
        n = I.weight
        rev = reverse(I)
        coeff = 1 if rev == I else 1 + (-1) ** n
        if coeff == 0:
            return None
        acc: LinComb = {}
        for perm in multiset_permutations(list(I)):
            J = Composition(perm)
            if J in (I, rev):
                continue
            acc = lin_add(acc, self.express(J))
        return lin_scale(acc, Fraction(-1, coeff))


def substitute(lc: LinComb, relations: Iterable[Congruence]) -> LinComb:
    """Rewrite every factor that is the left side of one of ``relations``.

    Used to apply conjectured relations (which eliminate a generator) to a
    pipeline expression.
    """
    rules = {c.lhs.factors[0]: c.rhs for c in relations if len(c.lhs.factors) == 1}
    acc: LinComb = {}
    for g, c in lc.items():
        term: LinComb = {GenExpr(): Fraction(1)}
        for f in g.factors:
            term = lin_mul(term, rules.get(f, {GenExpr.of(f): Fraction(1)}))
        acc = lin_add(acc, lin_scale(term, c))
    return acc


def generator_count(n: int, conditional: bool = False) -> int:
    """Number of generators needed in weight ``n``.

    With ``conditional`` the generators eliminated by conjectured relations
    are not counted.
    """
    gens = GENERATORS.get(n, ())
    if not conditional:
        return len(gens)
    eliminated = {c.lhs for c in load_conjectures() if c.weight == n and len(c.lhs.factors) == 1}
    return sum(1 for g in gens if g not in eliminated)
