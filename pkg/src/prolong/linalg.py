"""Exact sparse Gaussian elimination over the rationals.

Rows are ``dict[int, Fraction]`` keyed by column index.  Column 0 is the most
significant column: the pivot of a row is its smallest column index.  The
reducer keeps its rows in fully reduced row-echelon form at all times, so the
result is canonical for the row space regardless of insertion order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Mapping

Row = dict[int, Fraction]


class RowReducer:
    """Incremental reduced row-echelon form.

    ``add`` reduces a row against the current pivots; a non-zero remainder is
    normalised to a unit pivot and eliminated from every stored row that
    contains its pivot column.  ``_where`` maps a column to the pivots of the
    stored rows that have a non-zero entry there, which keeps back-elimination
    proportional to the column's fill rather than to the rank.
    """

    def __init__(self):
        self.pivots: dict[int, Row] = {}
        self._where: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Fraction]) -> Row:
        """Remainder of ``row`` modulo the stored row space (a fresh dict)."""
        out = {c: Fraction(v) for c, v in row.items() if v}
        # Stored rows contain no foreign pivot column, so a single pass suffices.
        for c in [c for c in out if c in self.pivots]:
            v = out.pop(c, 0)
            if not v:
                continue
            for k, w in self.pivots[c].items():
                if k == c:
                    continue
                nv = out.get(k, 0) - v * w
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert ``row``; return True when it increased the rank."""
        rem = self.reduce(row)
        if not rem:
            return False
        p = min(rem)
        inv = 1 / rem[p]
        if inv != 1:
            rem = {k: v * inv for k, v in rem.items()}
        where = self._where
        for q in list(where.get(p, ())):
            qrow = self.pivots[q]
            v = qrow.pop(p)
            for k, w in rem.items():
                if k == p:
                    continue
                nv = qrow.get(k, 0) - v * w
                if nv:
                    if k not in qrow:
                        where.setdefault(k, set()).add(q)
                    qrow[k] = nv
                else:
                    if k in qrow:
                        del qrow[k]
                        where[k].discard(q)
        where.pop(p, None)
        self.pivots[p] = rem
        for k in rem:
            if k != p:
                where.setdefault(k, set()).add(p)
        return True

    def extend(self, rows: Iterable[Mapping[int, Fraction]]) -> int:
        return sum(self.add(r) for r in rows)

    def rows(self) -> list[Row]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def kernel(self, ncols: int) -> list[Row]:
        """Basis of the null space over columns ``0..ncols-1``.

        One vector per free column f: ``e_f - sum_p R[p][f] e_p``.
        """
        basis = []
        for f in range(ncols):
            if f in self.pivots:
                continue
            vec = {f: Fraction(1)}
            for p in self._where.get(f, ()):
                vec[p] = -self.pivots[p][f]
            basis.append(vec)
        return basis


def rref(rows: Iterable[Mapping[int, Fraction]]) -> list[Row]:
    red = RowReducer()
    red.extend(rows)
    return red.rows()


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[Row]:
    red = RowReducer()
    red.extend(rows)
    return red.kernel(ncols)


def rank(rows: Iterable[Mapping[int, Fraction]]) -> int:
    red = RowReducer()
    red.extend(rows)
    return red.rank


# -- modular elimination with exact certification ---------------------------------------

PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783, 1152921504606846883)


class ModularRowReducer:
    """Incremental RREF over Z/p, same pivot rule as RowReducer."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Mapping[int, int]) -> bool:
        p = self.p
        rem = {c: v % p for c, v in row.items() if v % p}
        for c in [c for c in rem if c in self.pivots]:
            v = rem.pop(c, 0)
            if not v:
                continue
            for k, w in self.pivots[c].items():
                if k != c:
                    nv = (rem.get(k, 0) - v * w) % p
                    if nv:
                        rem[k] = nv
                    else:
                        rem.pop(k, None)
        if not rem:
            return False
        piv = min(rem)
        inv = pow(rem[piv], -1, p)
        rem = {k: v * inv % p for k, v in rem.items()}
        for qrow in self.pivots.values():
            v = qrow.pop(piv, 0)
            if v:
                for k, w in rem.items():
                    if k != piv:
                        nv = (qrow.get(k, 0) - v * w) % p
                        if nv:
                            qrow[k] = nv
                        else:
                            qrow.pop(k, None)
        self.pivots[piv] = rem
        return True

    def kernel(self, ncols: int) -> list[dict[int, int]]:
        p = self.p
        basis = []
        for f in range(ncols):
            if f in self.pivots:
                continue
            vec = {f: 1}
            for q, qrow in self.pivots.items():
                v = qrow.get(f)
                if v:
                    vec[q] = (-v) % p
            basis.append(vec)
        return basis


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """The fraction n/d with |n|, d <= sqrt(m/2) congruent to a mod m, if any."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _crt(a: int, m: int, b: int, n: int) -> int:
    return a + m * ((b - a) * pow(m, -1, n) % n)


def _lift(residues, modulus):
    out = []
    for v in residues:
        vec = {}
        for k, a in v.items():
            x = rational_reconstruct(a, modulus)
            if x is None:
                return None
            if x:
                vec[k] = x
        out.append(vec)
    return out


def certified_kernel(rows: list[Mapping[int, int]], ncols: int) -> list[Row]:
    """Exact null space of an integer matrix, found modulo primes and verified over Q.

    Kernel vectors of the mod-p RREF are lifted (CRT across primes, then
    rational reconstruction) and every lifted vector is checked exactly
    against every row.  The rank mod p never exceeds the rank over Q, so
    ncols - rank_p independent verified vectors are the whole exact kernel.
    Falls back to fraction elimination if the primes run out.
    """
    best = None
    for p in PRIMES:
        red = ModularRowReducer(p)
        for r in rows:
            red.add(r)
        pivots = frozenset(red.pivots)
        ker = red.kernel(ncols)
        if best is None or len(pivots) > len(best):
            best, modulus, residues = pivots, p, ker
        elif pivots != best:
            continue  # unlucky prime
        else:
            residues = [{k: _crt(v.get(k, 0), modulus, w.get(k, 0), p) for k in v.keys() | w.keys()}
                        for v, w in zip(residues, ker)]
            modulus *= p
        lifted = _lift(residues, modulus)
        if lifted is not None and all(sum(r.get(k, 0) * x for k, x in vec.items()) == 0
                                      for vec in lifted for r in rows):
            return lifted
    return nullspace([{k: Fraction(v) for k, v in r.items()} for r in rows], ncols)
