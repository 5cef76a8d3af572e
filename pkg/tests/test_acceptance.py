"""The ten acceptance criteria, one test each.

Each test prints a ``criterion N: PASS/FAIL`` line; the same lines are
collected into the pytest terminal summary by ``conftest.py``.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest
from sympy import primerange

from qsymhs.compositions import compositions_up_to, dual, reverse
from qsymhs.expr import S
from qsymhs.fitting import fit_coefficients
from qsymhs.mhs import SumTable, eval_exact, eval_mod_p, height_one_exact, height_one_mod_p
from qsymhs.modp import bernoulli_mod_p, prime_ctx
from qsymhs.qsym import E, F, M, QSymElem, antipode, coproduct, counit, expand_phi
from qsymhs.registry import check_theorem, generator_values, verify_weight_table
from qsymhs.relations import GENERATORS, load_conjectures, load_tables, substitute

ZHAO = [648, -1889, 72]  # over (S6111, S81, S21*S411)


def upto(n, nonempty=True):
    return [I for I in compositions_up_to(n) if I or not nonempty]


def announce(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.mark.criterion(1)
def test_criterion_1_algebra_identities(criterion):
    m = M(2) * M(3)
    e = E(2) * E(3)
    ok = m == M(2, 3) + M(3, 2) + M(5) and str(m) == "M(2,3) + M(3,2) + M(5)"
    ok = ok and e == E(2, 3) + E(3, 2) - E(5) and str(e) == "E(2,3) + E(3,2) - E(5)"
    detail = f"M(2)*M(3) = {m}; E(2)*E(3) = {e}"
    criterion(detail)
    announce(1, ok, detail)
    assert ok


@pytest.mark.criterion(2)
def test_criterion_2_oracle_equivalence(criterion):
    start = time.perf_counter()
    comps = upto(6, nonempty=False)
    phi = {I: expand_phi(M(I), 6) for I in comps}
    pairs = bad = 0
    for I, J in product(comps, comps):
        if I.weight + J.weight <= 6:
            pairs += 1
            if expand_phi(M(I) * M(J), 6) != phi[I] * phi[J]:
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and pairs >= 100 and elapsed < 10
    detail = f"{pairs} pairs, {bad} mismatches, {elapsed:.1f}s"
    criterion(detail)
    announce(2, ok, detail)
    assert ok


@pytest.mark.criterion(3)
def test_criterion_3_hopf_suite(criterion):
    start = time.perf_counter()
    comps7 = upto(7)
    parts_agree = all(antipode(M(I), "reverse") == antipode(M(I), "split") for I in comps7)
    involution = all(antipode(antipode(M(I))) == M(I) for I in comps7)
    axiom = True
    for I in upto(6):
        total = QSymElem.zero()
        for (a, b), c in coproduct(M(I)).terms.items():
            total = total + c * (antipode(M(a)) * M(b))
        axiom = axiom and total == counit(M(I)) * QSymElem.one()
    fundamental = all(antipode(F(I)) == (-1) ** I.weight * F(dual(reverse(I))) for I in comps7)
    elapsed = time.perf_counter() - start
    ok = parts_agree and involution and axiom and fundamental and elapsed < 30
    detail = (
        f"antipode forms agree={parts_agree}, S^2=id {involution}, axiom {axiom}, "
        f"S(F_I) rule {fundamental}, {len(comps7)} compositions, {elapsed:.1f}s"
    )
    criterion(detail)
    announce(3, ok, detail)
    assert ok


@pytest.mark.criterion(4)
def test_criterion_4_duality_sweeps(criterion):
    start = time.perf_counter()
    primes = list(primerange(11, 102))
    reports = [check_theorem(t, primes=primes, max_weight=8) for t in ("4.5", "4.6", "4.7")]
    elapsed = time.perf_counter() - start
    ok = all(r.passed and not r.skipped for r in reports) and elapsed < 120
    detail = "; ".join(f"{r.theorem} {r.verdict} ({r.checked} checks)" for r in reports) + f", {elapsed:.1f}s"
    criterion(detail)
    announce(4, ok, detail)
    assert ok


@pytest.mark.criterion(5)
def test_criterion_5_height_one(criterion):
    start = time.perf_counter()
    exact_ok = all(
        height_one_exact(h, k, n) == eval_exact("A", (h,) + (1,) * (k - 1), n)
        for h, k in product(range(1, 5), range(1, 5))
        for n in range(16)
    )
    stirling_ok = sign_ok = sym_ok = True
    checks = 0
    for p in primerange(2, 102):
        for h, k in product(range(1, 7), range(1, 7)):
            I = (h,) + (1,) * (k - 1)
            A_I = eval_mod_p("A", I, p)
            if h < p and k < p:
                stirling_ok &= height_one_mod_p(h, k, p) == A_I
                checks += 1
            if p > k:
                sign_ok &= eval_mod_p("S", I, p) == (-1) ** h * A_I
            if p > max(h, k):
                sym_ok &= A_I == eval_mod_p("A", (k,) + (1,) * (h - 1), p)
    elapsed = time.perf_counter() - start
    ok = exact_ok and stirling_ok and sign_ok and sym_ok and elapsed < 60
    detail = (
        f"exact formula {exact_ok}, mod-p formula {stirling_ok} ({checks} cases), "
        f"sign law {sign_ok}, symmetry {sym_ok}, {elapsed:.1f}s"
    )
    criterion(detail)
    announce(5, ok, detail)
    assert ok


@pytest.mark.criterion(6)
def test_criterion_6_bernoulli(criterion):
    from math import comb

    start = time.perf_counter()
    cases = bad = 0
    for i, j in product(range(1, 9), range(1, 9)):
        n = i + j
        if n > 9:
            continue
        for p in primerange(n + 2, 102):
            ctx = prime_ctx(p)
            rhs = ctx(Fraction((-1) ** i * comb(n, i), n)) * bernoulli_mod_p(p - n, ctx)
            cases += 1
            bad += eval_mod_p("S", (i, j), ctx) != rhs
    report = check_theorem("6.1", primes=list(primerange(11, 102)), max_weight=9)
    ctx11 = prime_ctx(11)
    hand = eval_mod_p("S", (2, 1), ctx11).value == 4 == bernoulli_mod_p(8, ctx11).value
    elapsed = time.perf_counter() - start
    ok = bad == 0 and report.passed and hand and elapsed < 30
    detail = f"{cases} cases against recurrence Bernoulli, registry {report.verdict}, S_(2,1)(10)=4=B_8 mod 11 {hand}, {elapsed:.1f}s"
    criterion(detail)
    announce(6, ok, detail)
    assert ok


@pytest.mark.criterion(7)
def test_criterion_7_weight_tables(criterion):
    start = time.perf_counter()
    reports = [verify_weight_table(n, workers=2) for n in range(3, 10)]
    labels = {r.label for rep in reports for r in rep.results if r.status == "pass"}
    rows75 = [c for c in load_tables() if c.source == "7.5"]
    s411 = "S(4,1,1) == -1/6*B(p-3)*B(p-3)" in labels
    all75 = all(c.label in labels for c in rows75)
    elapsed = time.perf_counter() - start
    ok = all(r.passed for r in reports) and s411 and all75 and elapsed < 300
    detail = (
        "; ".join(f"n={r.theorem[7:]} {r.verdict} ({r.checked})" for r in reports)
        + f"; S(4,1,1) row {s411}; {len(rows75)} weight-9 rows {all75}; {elapsed:.1f}s"
    )
    criterion(detail)
    announce(7, ok, detail)
    assert ok


@pytest.mark.criterion(8)
def test_criterion_8_numeric_table(criterion):
    expected = {67: [7, 0, 4], 877: [253, 0, 354], 16843: [16690, 14820, 0]}
    got, times = {}, {}
    for p in expected:
        t0 = time.perf_counter()
        got[p] = [v for _, v in generator_values(9, p)]
        times[p] = time.perf_counter() - t0
    t37 = SumTable(37)
    remark = t37.raw("S", (6, 1, 1)) == 7 and t37.raw("S", (4, 1)) == 0
    t0 = time.perf_counter()
    irregular = bernoulli_mod_p(16843 - 3, prime_ctx(16843)).value == 0
    times[16843] += time.perf_counter() - t0
    ok = got == expected and remark and irregular and times[16843] < 5
    detail = f"{got}; p=37 remark {remark}; B_(p-3)=0 at 16843 {irregular}; p=16843 in {times[16843]:.2f}s"
    criterion(detail)
    announce(8, ok, detail)
    assert ok


@pytest.mark.criterion(9)
def test_criterion_9_conjecture_consistency(criterion):
    start = time.perf_counter()
    report = check_theorem("zhao", primes=list(primerange(12, 501)))
    elapsed = time.perf_counter() - start
    ok = report.verdict == "conjecture consistent" and not report.skipped and elapsed < 60
    detail = f"{report.verdict} at {len(report.primes)} primes {report.primes[0]}..{report.primes[-1]}, {elapsed:.1f}s"
    criterion(detail)
    announce(9, ok, detail)
    assert ok


@pytest.mark.criterion(10)
def test_criterion_10_fit_coefficients(criterion):
    # weight-9 generators obey a conjectured integer relation, so a 3-generator row is
    # determined only modulo that relation; we require the fitted family to contain the
    # tabulated coefficients and the relation to be exactly the conjectured one, and we
    # also require the 2-generator fit (which is unique) to match the substituted row
    start = time.perf_counter()
    seed = 20240607
    rng = random.Random(seed)
    gens = list(GENERATORS[9])
    pair = [S(8, 1), S(2, 1) * S(4, 1, 1)]
    zhao = load_conjectures()
    rows = [
        c
        for c in load_tables()
        if c.source == "7.5" and len(c.lhs.factors) == 1 and not any(f.kind == "B" for g in c.rhs for f in g.factors)
    ]
    chosen = rng.sample(rows, 10)
    bad = []
    for c in chosen:
        primes = rng.sample(list(primerange(1000, 5001)), 7)
        fit_primes, holdout = primes[:6], primes[6]
        expected = [c.rhs.get(g, Fraction(0)) for g in gens]
        full = fit_coefficients(c.lhs, gens, fit_primes, holdout=holdout)
        cond = fit_coefficients(c.lhs, pair, fit_primes, holdout=holdout)
        substituted = substitute(c.rhs, zhao)
        good = (
            full.ok
            and full.relations == [ZHAO]
            and full.admits(expected)
            and cond.unique
            and cond.coefficients == [substituted.get(g, Fraction(0)) for g in pair]
        )
        if not good:
            bad.append(str(c.lhs))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    detail = f"seed {seed}: {10 - len(bad)}/10 rows recovered, held-out prime confirmed, {elapsed:.1f}s"
    if bad:
        detail += f"; failed {bad}"
    criterion(detail)
    announce(10, ok, detail)
    assert ok
