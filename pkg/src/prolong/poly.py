"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to :class:`fractions.Fraction`
coefficients, tied to a :class:`VarSet` that fixes the variable names and
their order.  Monomials are plain tuples of non-negative ints.

The canonical term order is graded lexicographic (grlex): higher total degree
first, ties broken lexicographically on the exponent tuple.  Printing emits
terms in descending grlex order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Number = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Raised on malformed polynomial text; ``pos`` is the offending offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class VarSet:
    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(names)})

    @classmethod
    def of(cls, *names: str) -> "VarSet":
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        return cls(tuple(names))

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)


# -- monomial helpers --------------------------------------------------------

def grlex_key(m: Monomial) -> tuple:
    return (sum(m), m)


def sort_grlex(monos: Iterable[Monomial], descending: bool = True) -> list[Monomial]:
    return sorted(monos, key=grlex_key, reverse=descending)


def monomials_of_degree(n: int, d: int) -> Iterator[Monomial]:
    """All exponent vectors of length ``n`` and total degree ``d``, grlex descending."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def count_monomials(n: int, d: int) -> int:
    from math import comb

    return comb(n + d - 1, d) if n > 0 else int(d == 0)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_factorial(m: Monomial) -> int:
    return prod(factorial(e) for e in m)


def multinomial(m: Monomial) -> int:
    return factorial(sum(m)) // mono_factorial(m)


def falling(m: Monomial, beta: Monomial) -> int:
    """alpha!/(alpha-beta)!, the scalar produced by d^beta acting on x^alpha."""
    out = 1
    for a, b in zip(m, beta):
        for k in range(b):
            out *= a - k
    return out


def divisors_of_degree(m: Monomial, r: int) -> Iterator[Monomial]:
    """Exponent vectors beta <= m with |beta| = r."""
    n = len(m)

    def rec(i: int, left: int, acc: list[int]):
        if i == n:
            if left == 0:
                yield tuple(acc)
            return
        room = sum(m[i + 1:])
        for b in range(min(m[i], left), max(0, left - room) - 1, -1):
            acc.append(b)
            yield from rec(i + 1, left - b, acc)
            acc.pop()

    yield from rec(0, r, [])


def format_monomial(m: Monomial, varset: VarSet) -> str:
    parts = []
    for name, e in zip(varset.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def parse_monomial(text: str, varset: VarSet) -> Monomial:
    """Parse a coefficient-free monomial such as ``x1^2*x2`` (or ``1``)."""
    p = parse_polynomial(text, varset)
    if len(p.terms) != 1:
        raise ValueError(f"{text!r} is not a single monomial")
    (m, c), = p.terms.items()
    if c != 1:
        raise ValueError(f"{text!r} carries a coefficient")
    return m


# -- polynomials --------------------------------------------------------------

class Polynomial:
    """Sparse polynomial; treat instances as immutable."""

    __slots__ = ("varset", "terms", "_hash")

    def __init__(self, varset: VarSet, terms: Mapping[Monomial, Number] | None = None):
        self.varset = varset
        clean: dict[Monomial, Fraction] = {}
        n = varset.n
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise ValueError(f"monomial {m} has length {len(m)}, expected {n}")
            c = Fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, varset: VarSet) -> "Polynomial":
        return cls(varset)

    @classmethod
    def monomial(cls, varset: VarSet, m: Monomial, coeff: Number = 1) -> "Polynomial":
        return cls(varset, {tuple(m): coeff})

    @classmethod
    def var(cls, varset: VarSet, name: str) -> "Polynomial":
        e = [0] * varset.n
        e[varset.index(name)] = 1
        return cls(varset, {tuple(e): 1})

    @classmethod
    def parse(cls, text: str, varset: VarSet) -> "Polynomial":
        return parse_polynomial(text, varset)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def support(self) -> list[Monomial]:
        return sort_grlex(self.terms)

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    # arithmetic
    def _check(self, other: "Polynomial"):
        if other.varset != self.varset:
            raise ValueError("polynomials live over different variable sets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial(self.varset, {(0,) * self.varset.n: other})
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.varset, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.varset, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.varset, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.varset, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial(self.varset, {(0,) * self.varset.n: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == Polynomial(self.varset, {(0,) * self.varset.n: other})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.varset == other.varset and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.varset.names, frozenset(self.terms.items())))
        return self._hash

    def differentiate(self, beta: Monomial) -> "Polynomial":
        return differentiate(self, beta)

    def evaluate(self, point: Sequence[Number]) -> Fraction:
        return evaluate(self, point)

    def map_monomials(self, fn, varset: VarSet | None = None) -> "Polynomial":
        """Apply ``fn`` to every exponent tuple (coefficients kept, collisions summed)."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            k = fn(m)
            out[k] = out.get(k, 0) + c
        return Polynomial(varset or self.varset, out)

    def normalized(self) -> "Polynomial":
        """Scalar multiple with leading coefficient 1 (zero stays zero)."""
        if not self.terms:
            return self
        _, c = self.leading()
        return self * (1 / c)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for i, m in enumerate(f.support()):
        c = f.terms[m]
        mono = format_monomial(m, f.varset)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo.group(1) is not None:
            toks.append(("int", mo.group(1), mo.start(1)))
        elif mo.group(2) is not None:
            toks.append(("name", mo.group(2), mo.start(2)))
        elif mo.group(3) is not None:
            ch = mo.group(3)
            if ch not in "+-*/^":
                raise ParseError(f"unexpected character {ch!r}", mo.start(3))
            toks.append((ch, ch, mo.start(3)))
        pos = mo.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_polynomial(text: str, varset: VarSet) -> Polynomial:
    """Parse ``term (('+'|'-') term)*`` into a polynomial over ``varset``.

    A term is ``[coeff '*'] factor ('*' factor)*`` with ``coeff`` an integer
    or ``int/int`` and ``factor`` a variable name with optional ``^int``.
    A leading sign and bare-coefficient terms (constants) are also accepted.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind):
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", tok[2])
        i += 1
        return tok

    terms: dict[Monomial, Fraction] = {}
    sign = 1
    if peek()[0] in "+-" and peek()[0] != "end":
        sign = -1 if take(peek()[0])[0] == "-" else 1
    while True:
        coeff = Fraction(1)
        expo = [0] * varset.n
        have_factor = False
        if peek()[0] == "int":
            num = int(take("int")[1])
            den = 1
            if peek()[0] == "/":
                take("/")
                tok = take("int")
                den = int(tok[1])
                if den == 0:
                    raise ParseError("zero denominator", tok[2])
            coeff = Fraction(num, den)
            if peek()[0] == "*":
                take("*")
            else:
                have_factor = None  # bare constant term
        if have_factor is not None:
            while True:
                kind, name, pos = take("name")
                if name not in varset:
                    raise ParseError(f"unknown variable {name!r}", pos)
                e = 1
                if peek()[0] == "^":
                    take("^")
                    e = int(take("int")[1])
                expo[varset.index(name)] += e
                if peek()[0] == "*":
                    take("*")
                    continue
                break
        m = tuple(expo)
        terms[m] = terms.get(m, 0) + sign * coeff
        kind = peek()[0]
        if kind == "end":
            break
        if kind not in "+-":
            raise ParseError(f"unexpected {peek()[1]!r}", peek()[2])
        sign = -1 if take(kind)[0] == "-" else 1
    return Polynomial(varset, terms)


# -- calculus -----------------------------------------------------------------

def differentiate(f: Polynomial, beta: Monomial) -> Polynomial:
    """The iterated partial derivative d^|beta| f / dx^beta."""
    beta = tuple(beta)
    if len(beta) != f.varset.n:
        raise ValueError("derivative multi-index does not match the variable set")
    out = {}
    for m, c in f.terms.items():
        if divides(beta, m):
            out[mono_div(m, beta)] = c * falling(m, beta)
    return Polynomial(f.varset, out)


def evaluate(f: Polynomial, point: Sequence[Number]) -> Fraction:
    if len(point) != f.varset.n:
        raise ValueError(f"point has length {len(point)}, expected {f.varset.n}")
    pt = [Fraction(v) for v in point]
    total = Fraction(0)
    for m, c in f.terms.items():
        term = c
        for v, e in zip(pt, m):
            if e:
                term *= v ** e
        total += term
    return total


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Leibniz expansion; fine for the small minors used here."""
    k = len(matrix)
    vs = matrix[0][0].varset
    total = Polynomial.zero(vs)
    for perm in permutations(range(k)):
        term = Polynomial(vs, {(0,) * vs.n: permutation_sign(perm)})
        for row, col in enumerate(perm):
            term = term * matrix[row][col]
        total = total + term
    return total


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def minors(matrix: Sequence[Sequence[Polynomial]], k: int) -> list[Polynomial]:
    from itertools import combinations

    rows, cols = len(matrix), len(matrix[0])
    out = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            out.append(determinant([[matrix[r][c] for c in cs] for r in rs]))
    return out


# -- polarization ---------------------------------------------------------------

@dataclass(frozen=True)
class MultiPolynomial:
    """A polynomial in ``blocks`` copies of a base variable set.

    Copy ``b`` (1-based) of base variable ``v`` is named ``v_b``; the derived
    exponent vector is block-major, so block ``b`` occupies positions
    ``(b-1)*n .. b*n - 1``.
    """

    base: VarSet
    blocks: int
    poly: Polynomial

    @staticmethod
    def block_varset(base: VarSet, blocks: int) -> VarSet:
        return VarSet(tuple(f"{v}_{b}" for b in range(1, blocks + 1) for v in base.names))

    @classmethod
    def from_block_terms(cls, base: VarSet, blocks: int, terms: Mapping[tuple[Monomial, ...], Number]):
        vs = cls.block_varset(base, blocks)
        flat: dict[Monomial, Fraction] = {}
        for parts, c in terms.items():
            m = tuple(e for part in parts for e in part)
            flat[m] = flat.get(m, 0) + c
        return cls(base, blocks, Polynomial(vs, flat))

    def block_of(self, index: int) -> int:
        return index // self.base.n

    def split(self, m: Monomial) -> tuple[Monomial, ...]:
        n = self.base.n
        return tuple(m[b * n:(b + 1) * n] for b in range(self.blocks))

    def block_degrees(self) -> set[tuple[int, ...]]:
        return {tuple(sum(p) for p in self.split(m)) for m in self.poly.terms}

    def permute_blocks(self, order: Sequence[int]) -> "MultiPolynomial":
        """Block ``i`` of the result is block ``order[i]`` of ``self`` (0-based)."""
        def fn(m):
            parts = self.split(m)
            return tuple(e for b in order for e in parts[b])
        return MultiPolynomial(self.base, self.blocks, self.poly.map_monomials(fn))

    def diagonal(self) -> Polynomial:
        """Substitute the base variables for every block."""
        def fn(m):
            parts = self.split(m)
            return tuple(sum(col) for col in zip(*parts))
        return self.poly.map_monomials(fn, self.base)

    def block_derivative(self, block: int, beta: Monomial) -> "MultiPolynomial":
        """Differentiate by ``beta`` in the variables of ``block`` (0-based)."""
        n = self.base.n
        full = [0] * (n * self.blocks)
        full[block * n:(block + 1) * n] = beta
        return MultiPolynomial(self.base, self.blocks, differentiate(self.poly, tuple(full)))


def _words(content: Monomial) -> Iterator[tuple[int, ...]]:
    """Distinct sequences using variable j exactly content[j] times."""
    total = sum(content)
    counts = list(content)
    word: list[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for j, k in enumerate(counts):
            if k:
                counts[j] -= 1
                word.append(j)
                yield from rec()
                word.pop()
                counts[j] += 1

    yield from rec()


def polarize(f: Polynomial) -> MultiPolynomial:
    """Full polarization of a degree-d form into d blocks.

    For ``x^alpha`` the multilinear form is ``alpha!`` times the sum, over all
    distinct words v of content alpha, of ``prod_i x_{i, v(i)}``.
    """
    if not f.is_homogeneous():
        raise ValueError("polarization needs a homogeneous polynomial")
    d = f.degree()
    if d < 1:
        raise ValueError("polarization needs degree >= 1")
    n = f.varset.n
    terms: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        weight = c * mono_factorial(m)
        for word in _words(m):
            e = [0] * (n * d)
            for block, j in enumerate(word):
                e[block * n + j] = 1
            key = tuple(e)
            terms[key] = terms.get(key, 0) + weight
    return MultiPolynomial(f.varset, d, Polynomial(MultiPolynomial.block_varset(f.varset, d), terms))


def partial_polarize(f: Polynomial, d: int, r: int) -> MultiPolynomial:
    """F(x,...,x, y,...,y) with d copies of x and r copies of y (two blocks).

    Coefficient of ``x^(alpha-beta) y^beta`` for the term ``x^alpha`` is
    ``alpha! * multinomial(d; alpha-beta) * multinomial(r; beta)``.
    """
    if not f.is_homogeneous(d + r):
        raise ValueError(f"expected a form of degree {d + r}")
    terms: dict[tuple[Monomial, Monomial], Fraction] = {}
    for m, c in f.terms.items():
        af = mono_factorial(m)
        for beta in divisors_of_degree(m, r):
            rest = mono_div(m, beta)
            key = (rest, beta)
            terms[key] = terms.get(key, 0) + c * af * multinomial(rest) * multinomial(beta)
    return MultiPolynomial.from_block_terms(f.varset, 2, terms)
