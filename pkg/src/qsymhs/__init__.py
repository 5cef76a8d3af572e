"""Quasi-symmetric functions and multiple harmonic sums modulo primes."""

from .compositions import Composition, DomainError, compositions, dual, reverse
from .congruences import Congruence, reduce_double, reduce_quad_even, reduce_quint_odd, reduce_triple, square_law
from .expr import A, B, GenExpr, S
from .fitting import FitResult, fit_coefficients
from .mhs import SumTable, eval_exact, eval_mod_p, height_one_exact, height_one_mod_p
from .modp import PrimeCtx, Residue, bernoulli_mod_p, prime_ctx
from .qsym import E, F, M, QSymElem, antipode, convert, coproduct, psi
from .registry import VerificationReport, check_theorem, verify_weight_table
from .relations import GENERATORS, TablePipeline, load_tables

__version__ = "0.1.0"

__all__ = [
    "A",
    "B",
    "Composition",
    "Congruence",
    "DomainError",
    "E",
    "F",
    "FitResult",
    "GENERATORS",
    "GenExpr",
    "M",
    "PrimeCtx",
    "QSymElem",
    "Residue",
    "S",
    "SumTable",
    "TablePipeline",
    "VerificationReport",
    "antipode",
    "bernoulli_mod_p",
    "check_theorem",
    "compositions",
    "convert",
    "coproduct",
    "dual",
    "eval_exact",
    "eval_mod_p",
    "fit_coefficients",
    "height_one_exact",
    "height_one_mod_p",
    "load_tables",
    "prime_ctx",
    "psi",
    "reduce_double",
    "reduce_quad_even",
    "reduce_quint_odd",
    "reduce_triple",
    "reverse",
    "square_law",
    "verify_weight_table",
]
