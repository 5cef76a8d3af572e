from fractions import Fraction
from itertools import product
from math import comb

import pytest
from sympy import nextprime, primerange

from qsymhs.compositions import Composition, DomainError, compositions
from qsymhs.congruences import (
    Congruence,
    reduce_any,
    reduce_double,
    reduce_quad_even,
    reduce_quint_odd,
    reduce_triple,
    square_law,
)
from qsymhs.expr import B, GenExpr, S, format_lincomb, parse_lincomb
from qsymhs.mhs import SumTable, eval_mod_p
from qsymhs.modp import bernoulli_mod_p, prime_ctx


def ten_primes_above(bound):
    out, p = [], bound
    while len(out) < 10:
        p = nextprime(p)
        out.append(p)
    return out


def assert_holds(cong, primes):
    for p in primes:
        res = cong.check(SumTable(p))
        assert res.status == "pass", (str(cong), p, res.lhs, res.rhs)


# -- double sums ------------------------------------------------------------------


def test_double_examples():
    assert reduce_double(2, 1).rhs == {B(3): Fraction(1)}
    assert reduce_double(3, 2).rhs == {B(5): Fraction(-2)}
    assert reduce_double(1, 3).rhs == {}


def test_double_via_sum():
    c = reduce_double(3, 2, via="sum")
    assert c.rhs == {S(4, 1): Fraction(-2)}
    assert c.source == "eq23"
    with pytest.raises(DomainError):
        reduce_double(3, 2, via="other")


def test_double_hand_instance():
    # S_(2,1)(10) == 4 == B_8 mod 11
    ctx = prime_ctx(11)
    assert eval_mod_p("S", (2, 1), ctx).value == 4 == bernoulli_mod_p(8, ctx).value
    assert reduce_double(2, 1).check(SumTable(11)).passed


def test_double_bernoulli_oracle():
    # independent right side: the Bernoulli number computed by recurrence
    for i, j in product(range(1, 9), range(1, 9)):
        n = i + j
        if n > 9:
            continue
        for p in primerange(n + 2, 102):
            ctx = prime_ctx(p)
            coeff = Fraction((-1) ** i * comb(n, i), n)
            rhs = ctx(coeff) * bernoulli_mod_p(p - n, ctx)
            assert eval_mod_p("S", (i, j), ctx) == rhs


@pytest.mark.parametrize("i, j", [(i, j) for i in range(1, 7) for j in range(1, 7)])
def test_double_ten_primes(i, j):
    for via in ("bernoulli", "sum"):
        c = reduce_double(i, j, via)
        assert_holds(c, ten_primes_above(c.bound))


# -- triples ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "I, coeff, gen",
    [((2, 2, 1), Fraction(3, 2), S(4, 1)), ((3, 1, 1), Fraction(-1, 2), S(4, 1)), ((5, 1, 1), Fraction(-1), S(6, 1))],
)
def test_triple_examples(I, coeff, gen):
    assert reduce_triple(*I).rhs == {gen: coeff}


def test_triple_even_weight_rejected():
    with pytest.raises(DomainError):
        reduce_triple(1, 1, 2)


def test_triples_ten_primes():
    for n in (3, 5, 7, 9):
        for I in compositions(n):
            if len(I) == 3:
                assert_holds(reduce_triple(*I), ten_primes_above(n + 1))


# -- length four and five -------------------------------------------------------------


def test_quad_parity():
    with pytest.raises(DomainError):
        reduce_quad_even(1, 1, 1, 2)
    with pytest.raises(DomainError):
        reduce_quint_odd(1, 1, 1, 1, 2)


def test_quad_examples_numeric():
    assert_holds(reduce_quad_even(1, 1, 1, 1), [11])
    assert_holds(reduce_quint_odd(1, 1, 1, 1, 1), [11, 13])


def test_quads_ten_primes():
    for n in (4, 6, 8):
        for I in compositions(n):
            if len(I) == 4:
                assert_holds(reduce_quad_even(*I), ten_primes_above(n + 1))


def test_quints_ten_primes():
    for n in (5, 7, 9):
        for I in compositions(n):
            if len(I) == 5:
                assert_holds(reduce_quint_odd(*I), ten_primes_above(n + 1))


def test_quad_specialises_to_square_law():
    # for I = (i,j,i,j) the quadruple reduction and the square law give the same value
    for i, j in product(range(1, 4), range(1, 4)):
        for p in primerange(2 * (i + j) + 2, 60):
            t = SumTable(p)
            a, b = reduce_quad_even(i, j, i, j).residues(t), square_law(i, j).residues(t)
            assert a[0] == b[0] and a[1] == b[1]


def test_square_law_sweep():
    for i, j in product(range(1, 4), range(1, 4)):
        if i + j > 4:
            continue
        for p in primerange(11, 102):
            assert square_law(i, j).check(SumTable(p)).passed
            if (i - j) % 2 == 0:
                assert eval_mod_p("S", (i, j, i, j), p).value == 0


# -- dispatch and records ------------------------------------------------------------------


def test_reduce_any_dispatch():
    assert reduce_any((2, 1)).source == "6.1"
    assert reduce_any((2, 2, 1)).source == "6.2"
    assert reduce_any((1, 1, 1, 1)).source == "6.3"
    assert reduce_any((1, 1, 1, 1, 1)).source == "6.4"
    with pytest.raises(DomainError):
        reduce_any((1, 1, 2))


def test_inhomogeneous_rejected():
    with pytest.raises(DomainError):
        Congruence(S(2, 1), {S(4, 1): 1})


def test_skip_on_small_prime_and_denominator():
    c = reduce_triple(2, 2, 1)
    assert c.check(SumTable(5)).status == "skip"
    d = Congruence(S(2, 1), {S(2, 1): Fraction(13, 13 * 13)}, bound=0)
    res = d.check(SumTable(13))
    assert res.status == "skip" and "divisible" in res.note


def test_failure_carries_residues():
    bogus = Congruence(S(2, 1), {B(3): Fraction(2)}, bound=4, source="demo")
    res = bogus.check(SumTable(11))
    assert res.status == "fail"
    assert (res.lhs, res.rhs) == (4, 8)
    assert res.to_json()["lhs"] == 4


def test_record_roundtrip():
    c = reduce_quint_odd(1, 2, 1, 2, 1)
    weight, lhs, rhs, bound = [f.strip() for f in c.to_record().split(";")]
    assert int(weight) == 7 and int(bound) == 8
    assert GenExpr.parse(lhs) == c.lhs
    assert parse_lincomb(rhs) == c.rhs
    assert format_lincomb(parse_lincomb(rhs)) == rhs
