"""The integral Hopf algebra QSym of quasi-symmetric functions.

Elements are sparse integer combinations of compositions tagged with a
basis: monomial ``M``, essential ``E`` (``E_I = sum_{J coarser} M_J``) or
fundamental ``F`` (``F_I = sum_{J finer} M_J``).  Multiplication is the
stuffle product on the ``M`` basis.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .compositions import (
    Composition,
    DomainError,
    as_composition,
    coarsenings,
    composition_of,
    dual,
    refinements,
    reverse,
    set_partitions,
    word_of,
)

BASES = ("M", "E", "F")


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v}


def _signed_join(terms) -> str:
    """``"a - 2*b + c"`` from ``(coeff, body)`` pairs, omitting unit coefficients."""
    out = ""
    for c, body in terms:
        mag = abs(c)
        piece = body if mag == 1 else f"{mag}*{body}"
        if not out:
            out = ("-" if c < 0 else "") + piece
        else:
            out += f" {'-' if c < 0 else '+'} {piece}"
    return out


class QSymElem:
    """Basis-tagged sparse integer combination of compositions."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: str = "M", terms: Mapping | None = None):
        if basis not in BASES:
            raise DomainError(f"unknown basis {basis!r}")
        self.basis = basis
        acc: dict[Composition, int] = defaultdict(int)
        for comp, c in (terms or {}).items():
            acc[as_composition(comp)] += int(c)
        self.terms: dict[Composition, int] = _clean(acc)

    @classmethod
    def basis_element(cls, basis: str, comp, coeff: int = 1) -> "QSymElem":
        return cls(basis, {as_composition(comp): coeff})

    @classmethod
    def one(cls, basis: str = "M") -> "QSymElem":
        return cls(basis, {Composition(): 1})

    @classmethod
    def zero(cls, basis: str = "M") -> "QSymElem":
        return cls(basis)

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "QSymElem") -> None:
        if self.basis != other.basis:
            raise DomainError(f"mixed bases {self.basis} and {other.basis}; convert first")

    def __add__(self, other):
        if not isinstance(other, QSymElem):
            return NotImplemented
        self._same(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return QSymElem(self.basis, acc)

    def __neg__(self):
        return QSymElem(self.basis, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QSymElem):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QSymElem(self.basis, {k: other * v for k, v in self.terms.items()})
        if not isinstance(other, QSymElem):
            return NotImplemented
        self._same(other)
        if self.basis == "M":
            return stuffle_mul(self, other)
        prod_m = stuffle_mul(convert(self, "M"), convert(other, "M"))
        return convert(prod_m, self.basis)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = QSymElem.one(self.basis)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == _clean({Composition(): other})
        if not isinstance(other, QSymElem):
            return NotImplemented
        if self.basis != other.basis:
            return convert(self, "M").terms == convert(other, "M").terms
        return self.terms == other.terms

    def __hash__(self):
        m = convert(self, "M")
        return hash(frozenset(m.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        for comp in sorted(self.terms, key=Composition.sort_key):
            yield comp, self.terms[comp]

    def __len__(self):
        return len(self.terms)

    def coefficient(self, comp) -> int:
        return self.terms.get(as_composition(comp), 0)

    def weights(self) -> set[int]:
        return {c.weight for c in self.terms}

    # -- text / JSON ------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return _signed_join((c, f"{self.basis}{comp}") for comp, c in self)

    def __repr__(self) -> str:
        return f"QSymElem({self.basis!r}, {str(self)!r})"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "terms": [{"composition": list(c), "coeff": str(v)} for c, v in self],
        }

    @classmethod
    def from_json(cls, data) -> "QSymElem":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["basis"],
            {Composition(t["composition"]): int(t["coeff"]) for t in data["terms"]},
        )

    @classmethod
    def parse(cls, text: str, basis: str | None = None) -> "QSymElem":
        """Parse the text form, e.g. ``"2*M(1,1) + M(2)"`` or ``"-E(5)"``."""
        s = text.strip()
        if s == "0":
            return cls(basis or "M")
        pos = 0
        terms: dict[Composition, int] = defaultdict(int)
        found = None
        first = True
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or (not first and not m.group("sign")):
                raise DomainError(f"cannot parse element {text!r} near {s[pos:]!r}")
            first = False
            sign = -1 if m.group("sign") == "-" else 1
            coeff = int(m.group("coeff")) if m.group("coeff") else 1
            b = m.group("basis")
            if found and b != found:
                raise DomainError(f"mixed bases in {text!r}")
            found = b
            terms[Composition.parse("(" + m.group("parts") + ")")] += sign * coeff
            pos = m.end()
        if basis and found and basis != found:
            raise DomainError(f"expected basis {basis}, got {found}")
        return cls(found or basis or "M", terms)


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coeff>\d+)\s*\*\s*)?(?P<basis>[MEF])\s*\((?P<parts>[\d,\s]*)\)\s*"
)


def M(*parts) -> QSymElem:
    return QSymElem.basis_element("M", _parts(parts))


def E(*parts) -> QSymElem:
    return QSymElem.basis_element("E", _parts(parts))


def F(*parts) -> QSymElem:
    return QSymElem.basis_element("F", _parts(parts))


def _parts(parts) -> Composition:
    if len(parts) == 1 and not isinstance(parts[0], int):
        return as_composition(parts[0])
    return Composition(parts)


# -- stuffle product ------------------------------------------------------


@lru_cache(maxsize=None)
def _stuffle_words(u: tuple, v: tuple) -> tuple:
    """Stuffle of two compositions as a tuple of (composition, coeff) pairs."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    p, w1 = u[0], u[1:]
    q, w2 = v[0], v[1:]
    acc: dict[tuple, int] = defaultdict(int)
    for w, c in _stuffle_words(w1, v):
        acc[(p,) + w] += c
    for w, c in _stuffle_words(u, w2):
        acc[(q,) + w] += c
    for w, c in _stuffle_words(w1, w2):
        acc[(p + q,) + w] += c
    return tuple(acc.items())


def stuffle(I, J) -> QSymElem:
    """``M_I * M_J`` as an M-basis element."""
    return QSymElem("M", dict(_stuffle_words(tuple(I), tuple(J))))


def stuffle_mul(u: QSymElem, v: QSymElem) -> QSymElem:
    if u.basis != "M" or v.basis != "M":
        raise DomainError("stuffle_mul needs both factors in the M basis; convert first")
    acc: dict[tuple, int] = defaultdict(int)
    for I, a in u.terms.items():
        for J, b in v.terms.items():
            for K, c in _stuffle_words(tuple(I), tuple(J)):
                acc[K] += a * b * c
    return QSymElem("M", acc)


def product_of(comps: Iterable) -> QSymElem:
    """``M_{I1} * M_{I2} * ...`` in the M basis."""
    out = QSymElem.one("M")
    for c in comps:
        out = stuffle_mul(out, QSymElem.basis_element("M", c))
    return out


# -- change of basis ------------------------------------------------------


def _to_m_single(basis: str, I: Composition) -> dict:
    if basis == "M":
        return {I: 1}
    if basis == "E":
        return {J: 1 for J in coarsenings(I)}
    return {J: 1 for J in refinements(I)}


def _from_m_single(basis: str, I: Composition) -> dict:
    if basis == "M":
        return {I: 1}
    if basis == "E":
        return {J: (-1) ** (len(I) - len(J)) for J in coarsenings(I)}
    return {J: (-1) ** (len(J) - len(I)) for J in refinements(I)}


def convert(e: QSymElem, target: str) -> QSymElem:
    """Change of basis among M, E and F."""
    if target not in BASES:
        raise DomainError(f"unknown basis {target!r}")
    if e.basis == target:
        return e
    acc: dict[Composition, int] = defaultdict(int)
    if e.basis != "M":
        for I, c in e.terms.items():
            for J, d in _to_m_single(e.basis, I).items():
                acc[J] += c * d
        m_terms = acc
    else:
        m_terms = e.terms
    if target == "M":
        return QSymElem("M", m_terms)
    out: dict[Composition, int] = defaultdict(int)
    for I, c in m_terms.items():
        if c:
            for J, d in _from_m_single(target, I).items():
                out[J] += c * d
    return QSymElem(target, out)


# -- coproduct ------------------------------------------------------------


class TensorElem:
    """Sparse integer combination of pairs of compositions in ``B (x) B``."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: str = "M", terms: Mapping | None = None):
        self.basis = basis
        acc: dict[tuple, int] = defaultdict(int)
        for (a, b), c in (terms or {}).items():
            acc[(as_composition(a), as_composition(b))] += int(c)
        self.terms = _clean(acc)

    def __eq__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __add__(self, other):
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return TensorElem(self.basis, acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keyed = sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
        return _signed_join((c, f"{self.basis}{a} # {self.basis}{b}") for (a, b), c in keyed)

    def swap(self) -> "TensorElem":
        return TensorElem(self.basis, {(b, a): c for (a, b), c in self.terms.items()})

    def map(self, f, g=None) -> "TensorElem":
        """Apply ``f (x) g`` where both map a basis element to a QSymElem."""
        g = g or f
        acc: dict[tuple, int] = defaultdict(int)
        basis = None
        for (a, b), c in self.terms.items():
            fa = f(QSymElem.basis_element(self.basis, a))
            gb = g(QSymElem.basis_element(self.basis, b))
            basis = fa.basis
            for x, cx in fa.terms.items():
                for y, cy in gb.terms.items():
                    acc[(x, y)] += c * cx * cy
        return TensorElem(basis or self.basis, acc)


def coproduct(e: QSymElem) -> TensorElem:
    """Deconcatenation coproduct on the M (or, identically, the E) basis."""
    if e.basis == "F":
        raise DomainError("coproduct is implemented on the M and E bases; convert first")
    acc: dict[tuple, int] = defaultdict(int)
    for I, c in e.terms.items():
        for j in range(len(I) + 1):
            acc[(Composition(I[:j]), Composition(I[j:]))] += c
    return TensorElem(e.basis, acc)


def counit(e: QSymElem) -> int:
    return convert(e, "M").coefficient(())


# -- antipode -------------------------------------------------------------


def deconcatenations(I) -> Iterable[tuple[Composition, ...]]:
    """Ways of writing ``I`` as a concatenation of nonempty pieces (2^(k-1))."""
    I = tuple(I)
    k = len(I)
    if k == 0:
        yield ()
        return
    for r in range(k):
        for cuts in combinations(range(1, k), r):
            bounds = (0, *cuts, k)
            yield tuple(Composition(I[a:b]) for a, b in zip(bounds, bounds[1:]))


@lru_cache(maxsize=None)
def _antipode_split(I: Composition) -> QSymElem:
    acc = QSymElem.zero("M")
    for pieces in deconcatenations(I):
        acc = acc + (-1) ** len(pieces) * product_of(pieces)
    return acc


@lru_cache(maxsize=None)
def _antipode_reverse(I: Composition) -> QSymElem:
    return (-1) ** len(I) * convert(QSymElem.basis_element("E", reverse(I)), "M")


def antipode(e: QSymElem, method: str = "reverse") -> QSymElem:
    """Antipode, returned in the basis of ``e``.

    ``method="reverse"`` uses ``S(M_I) = (-1)^l(I) E_{rev I}``; ``"split"``
    sums signed stuffle products over all deconcatenations of ``I``.
    """
    if method not in ("reverse", "split"):
        raise DomainError(f"unknown antipode method {method!r}")
    single = _antipode_reverse if method == "reverse" else _antipode_split
    m = convert(e, "M")
    acc: dict[Composition, int] = defaultdict(int)
    for I, c in m.terms.items():
        for J, d in single(I).terms.items():
            acc[J] += c * d
    return convert(QSymElem("M", acc), e.basis)


def reversal_map(e: QSymElem) -> QSymElem:
    """The automorphism ``T`` sending ``M_I`` to ``M_{rev I}`` (basis kept)."""
    m = convert(e, "M")
    return convert(QSymElem("M", {reverse(I): c for I, c in m.terms.items()}), e.basis)


# -- psi involution -------------------------------------------------------


def psi(e: QSymElem) -> QSymElem:
    """The additive involution induced by ``x -> x + y``, ``y -> -y``.

    On bases: ``psi(M_I) = (-1)^l(I) F_I``, ``psi(F_I) = (-1)^l(I) M_I`` and
    ``psi(E_I) = -E_{I*}``; the unit is fixed.  The result is in the basis
    of ``e``.  Not multiplicative for the stuffle product.
    """
    acc: dict[Composition, int] = defaultdict(int)
    if e.basis == "E":
        for I, c in e.terms.items():
            if I:
                acc[dual(I)] -= c
            else:
                acc[I] += c
        return QSymElem("E", acc)
    image = "F" if e.basis == "M" else "M"
    for I, c in e.terms.items():
        acc[I] += (-1) ** len(I) * c
    return convert(QSymElem(image, acc), e.basis)


class WordPoly:
    """Integer combination of words over ``{x, y}`` (words are strings)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, int] | None = None):
        acc: dict[str, int] = defaultdict(int)
        for w, c in (terms or {}).items():
            if set(w) - {"x", "y"}:
                raise DomainError(f"{w!r} is not a word over x, y")
            acc[w] += int(c)
        self.terms = _clean(acc)

    @classmethod
    def word(cls, w: str, c: int = 1) -> "WordPoly":
        return cls({w: c})

    def __eq__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return WordPoly(acc)

    def __neg__(self):
        return WordPoly({w: -c for w, c in self.terms.items()})

    def in_h1(self) -> bool:
        return all(w == "" or w.endswith("y") for w in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return _signed_join((c, _pretty_word(w)) for w, c in items)

    def to_qsym(self) -> QSymElem:
        """Identify ``z_{i1}...z_{ik}`` with ``M_{(i1,...,ik)}``."""
        if not self.in_h1():
            raise DomainError("element is not in H^1")
        return QSymElem("M", {composition_of(w): c for w, c in self.terms.items()})

    @classmethod
    def from_qsym(cls, e: QSymElem) -> "WordPoly":
        m = convert(e, "M")
        return cls({word_of(I): c for I, c in m.terms.items()})


def _pretty_word(w: str) -> str:
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        out.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return "".join(out)


@lru_cache(maxsize=None)
def _psi_single_word(w: str) -> tuple:
    acc: dict[str, int] = {"": 1}
    for ch in w:
        nxt: dict[str, int] = defaultdict(int)
        for prefix, c in acc.items():
            if ch == "x":
                nxt[prefix + "x"] += c
                nxt[prefix + "y"] += c
            else:
                nxt[prefix + "y"] -= c
        acc = nxt
    return tuple(acc.items())


def psi_word(poly: WordPoly) -> WordPoly:
    """Apply the automorphism ``x -> x + y``, ``y -> -y`` to an element of H^1."""
    if not poly.in_h1():
        raise DomainError("psi_word is defined on H^1 = Z1 + Hy")
    acc: dict[str, int] = defaultdict(int)
    for w, c in poly.terms.items():
        for v, d in _psi_single_word(w):
            acc[v] += c * d
    return WordPoly(acc)


# -- symmetrization -------------------------------------------------------


def symmetrize(I, basis: str = "M") -> QSymElem:
    """``sum_{sigma in S_k} B_{sigma . I}`` converted to the M basis."""
    I = as_composition(I)
    acc: dict[Composition, int] = defaultdict(int)
    for perm in permutations(I):
        acc[Composition(perm)] += 1
    return convert(QSymElem(basis, acc), "M")


def symmetrize_expand(I, basis: str = "M") -> QSymElem:
    """Set-partition expansion of the symmetrization, multiplied out in M.

    For the M basis each partition contributes ``(-1)^(k-l) c(B)`` times
    the product of single-part ``M_(b_s)``; for the E basis the sign is
    dropped.
    """
    I = as_composition(I)
    if not I:
        raise DomainError("symmetrize_expand needs a nonempty composition")
    if basis not in ("M", "E"):
        raise DomainError("symmetrize_expand supports the M and E bases")
    k = len(I)
    acc = QSymElem.zero("M")
    for part in set_partitions(k):
        sign = (-1) ** (k - len(part)) if basis == "M" else 1
        sums = part.block_sums(I)
        acc = acc + (sign * part.coefficient) * product_of((b,) for b in sums)
    return acc


# -- polynomial oracle ----------------------------------------------------


class TruncatedPoly:
    """Polynomial in ``t_1..t_n`` with integer coefficients (sparse)."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[tuple, int] | None = None):
        self.n_vars = n_vars
        acc: dict[tuple, int] = defaultdict(int)
        for exps, c in (terms or {}).items():
            if len(exps) != n_vars:
                raise DomainError("exponent vector length must equal n_vars")
            acc[tuple(exps)] += c
        self.terms = _clean(acc)

    def __add__(self, other):
        if self.n_vars != other.n_vars:
            raise DomainError("variable count mismatch")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return TruncatedPoly(self.n_vars, acc)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedPoly(self.n_vars, {k: other * v for k, v in self.terms.items()})
        if self.n_vars != other.n_vars:
            raise DomainError("variable count mismatch")
        acc: dict[tuple, int] = defaultdict(int)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                acc[tuple(x + y for x, y in zip(a, b))] += ca * cb
        return TruncatedPoly(self.n_vars, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __repr__(self):
        return f"TruncatedPoly({self.n_vars}, {self.terms!r})"


@lru_cache(maxsize=None)
def _phi_monomial(I: Composition, n: int) -> TruncatedPoly:
    terms = {}
    for idx in combinations(range(n), len(I)):
        exps = [0] * n
        for pos, part in zip(idx, I):
            exps[pos] = part
        terms[tuple(exps)] = 1
    return TruncatedPoly(n, terms)


def expand_phi(e: QSymElem, n: int) -> TruncatedPoly:
    """Image in ``Z[t_1..t_n]``: ``M_I -> sum_{n1<...<nk} t_{n1}^{i1} ... t_{nk}^{ik}``."""
    if n < 1:
        raise DomainError("n must be positive")
    out = TruncatedPoly(n)
    for I, c in convert(e, "M").terms.items():
        out = out + _phi_monomial(I, n) * c
    return out
