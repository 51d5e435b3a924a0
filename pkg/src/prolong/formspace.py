"""Vector spaces of homogeneous forms held in canonical reduced echelon form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import RowReducer
from .poly import (
    Monomial,
    Polynomial,
    VarSet,
    mono_mul,
    monomials_of_degree,
    parse_polynomial,
    sort_grlex,
)


@dataclass(frozen=True)
class FormSpace:
    """A subspace of S_d.

    ``basis`` is the reduced row-echelon basis with respect to the grlex
    (descending) monomial order: each element has leading coefficient 1 and
    its leading monomial occurs in no other element.  Two spaces are equal
    exactly when their bases are identical.
    """

    varset: VarSet
    degree: int
    basis: tuple[Polynomial, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def pivots(self) -> dict[Monomial, Polynomial]:
        return {b.leading()[0]: b for b in self.basis}

    def reduce(self, f: Polynomial) -> Polynomial:
        """Remainder of ``f`` after cancelling every pivot monomial."""
        out = dict(f.terms)
        for p, b in self.pivots().items():
            c = out.get(p)
            if c:
                for m, v in b.terms.items():
                    nv = out.get(m, 0) - c * v
                    if nv:
                        out[m] = nv
                    else:
                        out.pop(m, None)
        return Polynomial(f.varset, out)

    def __contains__(self, f: Polynomial) -> bool:
        if f.varset != self.varset:
            raise ValueError("variable set mismatch")
        if f.is_zero():
            return True
        if not f.is_homogeneous(self.degree):
            return False
        return self.reduce(f).is_zero()

    def issubset(self, other: "FormSpace") -> bool:
        return all(b in other for b in self.basis)

    def monomials(self) -> list[Monomial]:
        seen = set()
        for b in self.basis:
            seen.update(b.terms)
        return sort_grlex(seen)

    def to_json(self) -> dict:
        return {
            "vars": list(self.varset.names),
            "degree": self.degree,
            "basis": [str(b) for b in self.basis],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "FormSpace":
        vs = VarSet(tuple(obj["vars"]))
        polys = [parse_polynomial(t, vs) for t in obj["basis"]]
        return make_formspace(polys, int(obj["degree"]), vs)

    @classmethod
    def loads(cls, text: str) -> "FormSpace":
        return cls.from_json(json.loads(text))


class ColumnIndex:
    """Bijection between a grlex-sorted monomial list and column indices."""

    def __init__(self, monos: Iterable[Monomial]):
        self.monos = sort_grlex(set(monos))
        self.index = {m: i for i, m in enumerate(self.monos)}

    def __len__(self):
        return len(self.monos)

    def row(self, f: Polynomial) -> dict[int, Fraction]:
        idx = self.index
        return {idx[m]: c for m, c in f.terms.items()}

    def poly(self, row: dict[int, Fraction], varset: VarSet) -> Polynomial:
        monos = self.monos
        return Polynomial(varset, {monos[k]: v for k, v in row.items()})


def _canonical(varset: VarSet, degree: int, polys: Sequence[Polynomial]) -> FormSpace:
    cols = ColumnIndex(m for f in polys for m in f.terms)
    red = RowReducer()
    for f in polys:
        red.add(cols.row(f))
    basis = tuple(cols.poly(r, varset) for r in red.rows())
    return FormSpace(varset, degree, basis)


def make_formspace(polys: Iterable[Polynomial], degree: int, varset: VarSet | None = None) -> FormSpace:
    """Canonical basis of the span of ``polys`` (all forms of degree ``degree``)."""
    polys = list(polys)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if varset is None:
        if not polys:
            raise ValueError("varset is required for an empty list of forms")
        varset = polys[0].varset
    for f in polys:
        if f.varset != varset:
            raise ValueError("variable set mismatch")
        if not f.is_homogeneous():
            raise ValueError(f"inhomogeneous input: {f}")
        if not f.is_zero() and f.degree() != degree:
            raise ValueError(f"expected degree {degree}, got {f.degree()}: {f}")
    return _canonical(varset, degree, [f for f in polys if not f.is_zero()])


def zero_space(varset: VarSet, degree: int) -> FormSpace:
    return FormSpace(varset, degree, ())


def full_space(varset: VarSet, degree: int) -> FormSpace:
    """All of S_d (monomial basis is already canonical)."""
    return FormSpace(varset, degree, tuple(
        Polynomial.monomial(varset, m) for m in monomials_of_degree(varset.n, degree)))


def monomial_space(varset: VarSet, degree: int, monos: Iterable[Monomial]) -> FormSpace:
    return FormSpace(varset, degree, tuple(
        Polynomial.monomial(varset, m) for m in sort_grlex(set(monos))))


def span_sum(a: FormSpace, b: FormSpace) -> FormSpace:
    _same_ambient(a, b)
    return _canonical(a.varset, a.degree, a.basis + b.basis)


def intersect(a: FormSpace, b: FormSpace) -> FormSpace:
    """A n B by the Zassenhaus trick.

    Rows ``(u, u)`` for u in A and ``(w, 0)`` for w in B are reduced with the
    left half more significant; rows whose left half vanished carry a basis of
    the intersection in their right half.
    """
    _same_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return zero_space(a.varset, a.degree)
    cols = ColumnIndex(m for f in a.basis + b.basis for m in f.terms)
    n = len(cols)
    red = RowReducer()
    for u in a.basis:
        row = cols.row(u)
        red.add({**row, **{k + n: v for k, v in row.items()}})
    for w in b.basis:
        red.add(cols.row(w))
    right = [{k - n: v for k, v in r.items()} for p, r in sorted(red.pivots.items()) if p >= n]
    return _canonical(a.varset, a.degree, [cols.poly(r, a.varset) for r in right])


def _same_ambient(a: FormSpace, b: FormSpace):
    if a.varset != b.varset:
        raise ValueError("variable set mismatch")
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")


@lru_cache(maxsize=64)
def ideal_graded_piece(a: FormSpace, k: int) -> FormSpace:
    """Degree d+k piece of the ideal generated by A: span of m*f, |m| = k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0 or a.is_zero():
        return FormSpace(a.varset, a.degree + k, a.basis)
    products = []
    for m in monomials_of_degree(a.varset.n, k):
        for f in a.basis:
            products.append(Polynomial(a.varset, {mono_mul(m, e): c for e, c in f.terms.items()}))
    return _canonical(a.varset, a.degree + k, products)
