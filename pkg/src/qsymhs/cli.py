"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from sympy import isprime, primerange

from .compositions import Composition, DomainError, compositions
from .expr import GenExpr, format_lincomb
from .fitting import fit_coefficients
from .mhs import KINDS, SumTable, eval_exact
from .qsym import BASES, QSymElem, WordPoly, antipode, convert, coproduct, psi, psi_word
from .registry import REGISTRY, check_theorem, generator_values, verify_weight_table
from .relations import GENERATORS, TablePipeline, load_conjectures, load_tables, substitute

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_primes(text: str) -> list[int]:
    """``"11..101"`` (inclusive, filtered to primes), ``"67"`` or ``"67,877"``."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            if lo > hi:
                raise UsageError(f"prime range {text!r} is not ascending")
            out = list(primerange(lo, hi + 1))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
            bad = [p for p in out if not isprime(p)]
            if bad:
                raise UsageError(f"not prime: {', '.join(map(str, bad))}")
    except ValueError:
        raise UsageError(f"bad prime range {text!r}; expected a..b or p1,p2,...") from None
    if not out:
        raise UsageError(f"prime range {text!r} contains no primes")
    return sorted(set(out))


def _composition(text: str) -> Composition:
    try:
        return Composition.parse(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad composition {text!r}: {exc}") from None


def _genexpr(text: str) -> GenExpr:
    try:
        return GenExpr.parse(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad expression {text!r}: {exc}") from None


def _basis(text: str) -> str:
    if text not in BASES:
        raise UsageError(f"unknown basis {text!r}; expected one of {', '.join(BASES)}")
    return text


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsymhs", description="Quasi-symmetric functions and harmonic sums mod p.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("mul", "product of basis elements")
    p.add_argument("basis")
    p.add_argument("compositions", nargs="+")

    p = add("antipode", "antipode of a basis element")
    p.add_argument("basis")
    p.add_argument("composition")
    p.add_argument("--method", choices=("reverse", "split"), default="reverse")

    p = add("psi", "the involution psi on a basis element, or on a word with basis W")
    p.add_argument("basis", help="M, E, F, or W for a word over x, y")
    p.add_argument("composition")

    p = add("convert", "change of basis")
    p.add_argument("basis")
    p.add_argument("composition")
    p.add_argument("target")

    p = add("coproduct", "deconcatenation coproduct")
    p.add_argument("basis")
    p.add_argument("composition")

    p = add("eval", "evaluate A_I or S_I exactly or mod p")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("composition")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=int, help="value of X_I(p-1) mod p")
    group.add_argument("--primes", help="prime range a..b")
    group.add_argument("--n", type=int, help="exact rational value X_I(n)")
    p.add_argument("--csv", action="store_true", help="CSV rows kind,composition,p,value")

    p = add("verify", "check registered theorems over a prime range")
    p.add_argument("--theorem", action="append", help="theorem id (repeatable); default all")
    p.add_argument("--primes", help="prime range a..b; default per theorem")
    p.add_argument("--max-weight", type=int)
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    p.add_argument("--tables", help="directory of relation tables")
    p.add_argument("--skips", action="store_true", help="list skipped instances")

    p = add("table", "weight-n tables: verify, list generator values, or express sums")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--prime", type=int)
    p.add_argument("--primes", help="prime range a..b")
    p.add_argument("--generators", action="store_true", help="print generator residues")
    p.add_argument("--express", action="store_true", help="print every S_I in terms of generators")
    p.add_argument("--conditional", action="store_true", help="also apply conjectured relations")
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    p.add_argument("--tables", help="directory of relation tables")

    p = add("fit", "fit rational coefficients of a target against generators")
    p.add_argument("target")
    p.add_argument("--generators", nargs="+", required=True)
    p.add_argument("--primes", required=True, help="prime range a..b")
    p.add_argument("--holdout", type=int)
    return parser


# -- verbs -----------------------------------------------------------------


def _elem(basis: str, text: str) -> QSymElem:
    return QSymElem.basis_element(_basis(basis), _composition(text))


def cmd_mul(args) -> int:
    elems = [_elem(args.basis, c) for c in args.compositions]
    out = elems[0]
    for e in elems[1:]:
        out = out * e
    _emit(args, str(out), out.to_json())
    return EXIT_OK


def cmd_antipode(args) -> int:
    out = antipode(_elem(args.basis, args.composition), method=args.method)
    _emit(args, str(out), out.to_json())
    return EXIT_OK


def cmd_psi(args) -> int:
    if args.basis == "W":
        word = args.composition.strip()
        try:
            out = psi_word(WordPoly.word(word))
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        _emit(args, str(out), {"words": out.terms})
        return EXIT_OK
    out = psi(_elem(args.basis, args.composition))
    _emit(args, str(out), out.to_json())
    return EXIT_OK


def cmd_convert(args) -> int:
    out = convert(_elem(args.basis, args.composition), _basis(args.target))
    _emit(args, str(out), out.to_json())
    return EXIT_OK


def cmd_coproduct(args) -> int:
    try:
        out = coproduct(_elem(args.basis, args.composition))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    data = [{"left": str(a), "right": str(b), "coeff": str(c)} for (a, b), c in sorted(out.terms.items())]
    _emit(args, str(out), {"basis": out.basis, "terms": data})
    return EXIT_OK


def cmd_eval(args) -> int:
    I = _composition(args.composition)
    if args.n is not None:
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        value = eval_exact(args.kind, I, args.n)
        _emit(args, str(value), {"kind": args.kind, "composition": str(I), "n": args.n, "value": str(value)})
        return EXIT_OK
    if args.prime is not None:
        if not isprime(args.prime):
            raise UsageError(f"{args.prime} is not prime")
        primes = [args.prime]
    else:
        primes = parse_primes(args.primes)
    rows = [(args.kind, str(I), p, SumTable(p).raw(args.kind, I)) for p in primes]
    if args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(("kind", "composition", "p", "value"))
        writer.writerows(rows)
    elif args.json:
        print(json.dumps([dict(zip(("kind", "composition", "p", "value"), r)) for r in rows], indent=2))
    elif len(rows) == 1:
        print(rows[0][3])
    else:
        for _, _, p, v in rows:
            print(f"p={p}: {v}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = args.theorem or list(REGISTRY)
    unknown = [t for t in ids if t not in REGISTRY]
    if unknown:
        raise UsageError(f"unknown theorem id(s): {', '.join(unknown)}; known: {', '.join(REGISTRY)}")
    primes = parse_primes(args.primes) if args.primes else None
    reports = [
        check_theorem(t, primes, args.max_weight, workers=max(1, args.parallel), tables_dir=args.tables) for t in ids
    ]
    if args.theorem is None:
        for n in range(3, 10):
            reports.append(verify_weight_table(n, primes and [p for p in primes if p > n + 1], max(1, args.parallel), args.tables))
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.to_text(show_skips=args.skips))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_table(args) -> int:
    n = args.weight
    if not 2 <= n <= 9:
        raise UsageError("--weight must be between 2 and 9")
    if args.prime is not None and args.primes:
        raise UsageError("give --prime or --primes, not both")
    if args.prime is not None:
        if not isprime(args.prime):
            raise UsageError(f"{args.prime} is not prime")
        primes = [args.prime]
    elif args.primes:
        primes = parse_primes(args.primes)
    else:
        primes = None
    if args.generators:
        if primes is None:
            raise UsageError("--generators needs --prime or --primes")
        if n not in GENERATORS:
            raise UsageError(f"no generators are tabulated for weight {n}")
        data = {p: generator_values(n, p) for p in primes}
        if args.json:
            print(json.dumps({str(p): dict(v) for p, v in data.items()}, indent=2))
        else:
            for p, vals in data.items():
                line = " ".join(f"{g}={v}" for g, v in vals)
                print(line if len(primes) == 1 else f"p={p}: {line}")
        return EXIT_OK
    if args.express:
        try:
            relations = load_tables(args.tables)
            conjectures = load_conjectures(args.tables)
        except OSError as exc:
            raise UsageError(str(exc)) from None
        pipeline = TablePipeline(relations)
        rows = []
        for I in compositions(n):
            lc = pipeline.express(I)
            row = {"composition": str(I), "expression": format_lincomb(lc), "rule": pipeline.trace[I]}
            if args.conditional:
                row["conditional"] = format_lincomb(substitute(lc, conjectures))
            rows.append(row)
        if args.json:
            print(json.dumps(rows, indent=2))
        else:
            for row in rows:
                line = f"S{row['composition']} == {row['expression']}"
                if args.conditional:
                    line += f"   [conditionally: {row['conditional']}]"
                print(line)
        return EXIT_OK
    if primes is not None:
        primes = [p for p in primes if p > n + 1]
        if not primes:
            raise UsageError(f"weight {n} tables need primes above {n + 1}")
    report = verify_weight_table(n, primes, max(1, args.parallel), args.tables)
    _emit(args, report.to_text(), report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_fit(args) -> int:
    target = _genexpr(args.target)
    gens = [_genexpr(g) for g in args.generators]
    primes = parse_primes(args.primes)
    if args.holdout is not None and not isprime(args.holdout):
        raise UsageError(f"{args.holdout} is not prime")
    try:
        result = fit_coefficients(target, gens, primes, holdout=args.holdout)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    lines = [result.relation()]
    lines += [f"generator relation: {r}" for r in result.generator_relations()]
    lines += [f"note: {n}" for n in result.notes]
    _emit(args, "\n".join(lines), result.to_json())
    return EXIT_OK if result.ok else EXIT_FAIL


VERBS = {
    "mul": cmd_mul,
    "antipode": cmd_antipode,
    "psi": cmd_psi,
    "convert": cmd_convert,
    "coproduct": cmd_coproduct,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "table": cmd_table,
    "fit": cmd_fit,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return VERBS[args.verb](args)
    except UsageError as exc:
        print(f"qsymhs {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"qsymhs {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # output piped into e.g. head; nothing left to report
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
