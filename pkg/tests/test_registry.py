import json
import shutil
from importlib import resources

import pytest
from sympy import primerange

from qsymhs.compositions import DomainError, compositions
from qsymhs.mhs import SumTable
from qsymhs.registry import (
    REGISTRY,
    check_theorem,
    default_primes,
    generator_values,
    theorem_ids,
    verify_weight_table,
)


@pytest.mark.parametrize("theorem", theorem_ids())
def test_every_theorem_passes_at_defaults(theorem):
    report = check_theorem(theorem)
    assert report.passed, report.to_text()
    assert report.checked > 0


def test_registry_covers_required_ids():
    required = {"4.1", "4.3", "4.4", "4.5", "4.6", "4.7", "5.1", "5.2", "eq19", "eq26"}
    required |= {"6.1", "6.2", "6.3", "6.4", "7.1", "7.2", "7.3", "7.4", "7.5", "zhao"}
    assert required <= set(theorem_ids())


def test_unknown_theorem():
    with pytest.raises(DomainError):
        check_theorem("9.9")


def test_non_prime_rejected():
    with pytest.raises(DomainError):
        check_theorem("4.6", primes=[11, 15])


def test_table_72_at_11():
    report = check_theorem("7.2", primes=[11])
    assert report.passed and report.checked >= 5
    labels = {r.label for r in report.results}
    assert any("S(1,4,1) == -2*S(4,1,1)" in l for l in labels)


def test_table_74_remark_values():
    report = check_theorem("7.4", primes=[37])
    assert report.passed
    table = SumTable(37)
    assert table.raw("S", (6, 1, 1)) == 7
    assert table.raw("S", (4, 1)) == 0
    assert any("== 7" in r.label for r in report.results)


def test_duality_at_11():
    report = check_theorem("4.6", primes=[11], max_weight=8)
    assert report.passed
    assert report.checked == sum(2 ** (n - 1) for n in range(1, 9) if n + 1 < 11)


def test_small_primes_are_skipped_not_failed():
    report = check_theorem("6.2", primes=[2, 3, 5, 7])
    assert report.passed
    assert report.skipped


def test_zhao_reported_as_conjecture():
    report = check_theorem("zhao")
    assert report.conjecture
    assert report.verdict == "conjecture consistent"
    assert report.primes[0] == 13 and report.primes[-1] == 499


def test_report_serialisation():
    report = check_theorem("6.1", primes=[11, 13])
    data = json.loads(report.dumps())
    assert data["verdict"] == "pass" and data["primes"] == [11, 13]
    assert report.summary().startswith("6.1: pass")


def test_parallel_matches_serial():
    a = check_theorem("4.5", primes=list(primerange(11, 40)), max_weight=6)
    b = check_theorem("4.5", primes=list(primerange(11, 40)), max_weight=6, workers=2)
    assert a.results == b.results


def test_default_primes():
    assert default_primes("4.7")[-1] == 61
    assert default_primes("4.6") == list(primerange(11, 102))


# -- weight tables ----------------------------------------------------------------


@pytest.mark.parametrize("n", range(3, 10))
def test_weight_tables(n):
    report = verify_weight_table(n)
    assert report.passed, report.to_text()
    assert report.primes[0] > n + 1 and report.primes[-1] == 101


def test_weight_four_vanishes():
    for p in primerange(7, 102):
        table = SumTable(p)
        assert all(table.raw("S", I) == 0 for I in compositions(4))


@pytest.mark.parametrize(
    "p, values",
    [(67, [7, 0, 4]), (877, [253, 0, 354]), (16843, [16690, 14820, 0])],
)
def test_generator_table(p, values):
    assert [v for _, v in generator_values(9, p)] == values


def test_weight_table_range_checked():
    with pytest.raises(DomainError):
        verify_weight_table(10)


def test_tampered_table_fails(tmp_path):
    src = resources.files("qsymhs") / "tables"
    for entry in src.iterdir():
        shutil.copy(str(entry), tmp_path / entry.name)
    path = tmp_path / "weight5.rel"
    path.write_text(path.read_text().replace("S(3,2); -2*S(4,1)", "S(3,2); 2*S(4,1)"))
    report = verify_weight_table(5, primes=[11, 13], tables_dir=tmp_path)
    assert not report.passed
    bad = report.failures[0]
    assert bad.lhs is not None and bad.rhs is not None and bad.lhs != bad.rhs
    assert check_theorem("7.1", primes=[11], tables_dir=tmp_path).verdict == "FAIL"
