"""Prolongations A^(r) of a space of forms, by three interchangeable routes.

All three routes solve for the coefficient vector of a generic form F of
degree d+r, restricted up front to the monomials of M(A)^(r): no monomial
outside that set can occur in an element of A^(r).

``derivative``
    For each beta with |beta| = r, the space A_beta of forms whose beta-th
    derivative lies in A is cut out by its own reduced equation system; the
    systems are merged in grlex order of beta, stopping early once nothing
    survives.
``catalecticant``
    The coefficient matrix of A is row-reduced together with an identity
    block; its zero rows give left null vectors y, and every pair (y, beta)
    imposes y . C[:, beta] = 0 on the catalecticant columns.  One global solve.
``tensor``
    Unknowns are F together with coefficients lambda[j, beta] of an element
    sum_j,beta lambda[j,beta] a_j (x) x^beta of A (x) S_r; the co-multiplication
    of F is matched against it pair-of-monomials by pair-of-monomials and the
    F part of the solution space is kept.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, prod

from .formspace import ColumnIndex, FormSpace, ideal_graded_piece, make_formspace, zero_space
from .linalg import Row, RowReducer
from .monomial import monomial_prolong, monomial_support
from .poly import (
    Monomial,
    Polynomial,
    count_monomials,
    differentiate,
    divides,
    divisors_of_degree,
    falling,
    mono_div,
    mono_mul,
    monomials_of_degree,
    sort_grlex,
)

STRATEGIES = ("derivative", "catalecticant", "tensor")
DEFAULT_CAP = 200_000


class DimensionCapError(ValueError):
    pass


def prolong(a: FormSpace, r: int, strategy: str = "derivative", *, threads: int = 1,
            cap: int | None = None) -> FormSpace:
    """The r-th prolongation of ``a`` as a canonical FormSpace of degree d+r."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    if a.varset.n == 0:
        raise ValueError("empty variable set")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    ambient = count_monomials(a.varset.n, a.degree + r)
    if cap is not None and ambient > cap:
        raise DimensionCapError(
            f"ambient dimension {ambient} of degree-{a.degree + r} forms exceeds cap {cap}")

    target = monomial_prolong(monomial_support(a), r)
    if not target.monomials:
        return zero_space(a.varset, a.degree + r)
    system = _System(a, r, target.monomials)
    if strategy == "derivative":
        kernel = system.solve_derivative(threads)
    elif strategy == "catalecticant":
        kernel = system.solve_catalecticant()
    else:
        kernel = system.solve_tensor()
    polys = [system.cols.poly({k: v for k, v in row.items() if k < system.N}, a.varset)
             for row in kernel]
    return make_formspace(polys, a.degree + r, a.varset)


class _System:
    def __init__(self, a: FormSpace, r: int, monos: tuple[Monomial, ...]):
        self.a = a
        self.r = r
        self.cols = ColumnIndex(monos)
        self.N = len(self.cols)
        betas = set()
        for m in self.cols.monos:
            betas.update(divisors_of_degree(m, r))
        self.betas = sort_grlex(betas)

    def images(self, beta: Monomial) -> dict[Monomial, tuple[int, int]]:
        """gamma -> (column of gamma+beta, falling factor) for the beta-derivative."""
        out = {}
        for k, m in enumerate(self.cols.monos):
            if divides(beta, m):
                out[mono_div(m, beta)] = (k, falling(m, beta))
        return out

    # -- derivative ----------------------------------------------------------

    def annihilator(self) -> tuple[list[Row], dict[Monomial, list[int]], list[Monomial]]:
        """Equations of A read off its canonical basis.

        Columns: every degree-d monomial that occurs in A or as an image of a
        derivative.  One vector per non-pivot monomial m: e_m - sum_p R_p[m] e_p.
        """
        gammas = set(self.a.monomials())
        for beta in self.betas:
            gammas.update(self.images(beta))
        pivots = self.a.pivots()
        ann: list[dict[Monomial, Fraction]] = []
        for m in sort_grlex(gammas):
            if m in pivots:
                continue
            y = {m: Fraction(1)}
            for p, b in pivots.items():
                v = b.terms.get(m)
                if v:
                    y[p] = -v
            ann.append(y)
        by_mono: dict[Monomial, list[int]] = {}
        for i, y in enumerate(ann):
            for m in y:
                by_mono.setdefault(m, []).append(i)
        return ann, by_mono, sort_grlex(gammas)

    def beta_equations(self, beta: Monomial, ann, by_mono) -> list[Row]:
        img = self.images(beta)
        touched = sorted({i for g in img for i in by_mono.get(g, ())})
        rows = []
        for i in touched:
            row = {}
            for g, v in ann[i].items():
                hit = img.get(g)
                if hit:
                    row[hit[0]] = v * hit[1]
            if row:
                rows.append(row)
        return rows

    def solve_derivative(self, threads: int = 1) -> list[Row]:
        ann, by_mono, _ = self.annihilator()
        merged = RowReducer()
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                per_beta = pool.map(_reduced_beta_system, [(self, b, ann, by_mono) for b in self.betas])
                for rows in per_beta:
                    merged.extend(rows)
                    if merged.rank == self.N:
                        break
        else:
            for beta in self.betas:
                merged.extend(_reduced_beta_system((self, beta, ann, by_mono)))
                if merged.rank == self.N:
                    break
        return merged.kernel(self.N)

    # -- catalecticant ---------------------------------------------------------

    def solve_catalecticant(self) -> list[Row]:
        basis = self.a.basis
        k = len(basis)
        gammas = set(self.a.monomials())
        images = {beta: self.images(beta) for beta in self.betas}
        for img in images.values():
            gammas.update(img)
        gammas = sort_grlex(gammas)
        # rows of [A | I]: one per monomial gamma
        aug = RowReducer()
        for t, g in enumerate(gammas):
            row = {j: b.terms[g] for j, b in enumerate(basis) if g in b.terms}
            row[k + t] = Fraction(1)
            aug.add(row)
        left_null = [{p - k: v for p, v in row.items()} for p, row in sorted(aug.pivots.items()) if p >= k]
        left_null = [{gammas[t]: v for t, v in y.items()} for y in left_null]

        system = RowReducer()
        for y in left_null:
            for beta in self.betas:
                img = images[beta]
                row = {}
                for g, v in y.items():
                    hit = img.get(g)
                    if hit:
                        row[hit[0]] = v * hit[1]
                if row:
                    system.add(row)
        return system.kernel(self.N)

    # -- tensor -------------------------------------------------------------------

    def solve_tensor(self) -> list[Row]:
        """Match Delta_{d,r}(F) = sum_beta (1/beta!) d^beta F (x) x^beta with A (x) S_r.

        Row (gamma, beta) reads: sum_alpha binom(alpha, beta) c_alpha [alpha = gamma+beta]
        - sum_j lambda[j, beta] a_j[gamma] = 0.  The lambda columns come first so
        they are eliminated in favour of the F coefficients.
        """
        basis = self.a.basis
        k = len(basis)
        nb = len(self.betas)
        lam0 = 0
        f0 = k * nb
        gammas = set(self.a.monomials())
        col_of = self.cols.index
        for beta in self.betas:
            for m in self.cols.monos:
                if divides(beta, m):
                    gammas.add(mono_div(m, beta))
        system = RowReducer()
        for bi, beta in enumerate(self.betas):
            for g in sort_grlex(gammas):
                row = {}
                alpha = mono_mul(g, beta)
                c = col_of.get(alpha)
                if c is not None:
                    row[f0 + c] = Fraction(prod(comb(x, y) for x, y in zip(alpha, beta)))
                for j, b in enumerate(basis):
                    v = b.terms.get(g)
                    if v:
                        row[lam0 + j * nb + bi] = -v
                if row:
                    system.add(row)
        total = f0 + self.N
        kernel = system.kernel(total)
        # keep the F part, shifted to columns 0..N-1
        out = []
        for vec in kernel:
            fpart = {c - f0: v for c, v in vec.items() if c >= f0}
            if fpart:
                out.append(fpart)
        return out


def _reduced_beta_system(args) -> list[Row]:
    system, beta, ann, by_mono = args
    red = RowReducer()
    red.extend(system.beta_equations(beta, ann, by_mono))
    return red.rows()


def iterated_prolong(a: FormSpace, r: int, strategy: str = "derivative") -> FormSpace:
    """Prolong one degree at a time, r times."""
    out = a
    for _ in range(r):
        out = prolong(out, 1, strategy)
    return out


def derivatives_in(f: Polynomial, a: FormSpace, r: int) -> bool:
    """True when every order-r partial derivative of f lies in A."""
    return all(differentiate(f, beta) in a for beta in monomials_of_degree(f.varset.n, r))


def differential_power_member(f: Polynomial, a: FormSpace, r: int) -> bool:
    """Whether all partials of f of order k <= r lie in the ideal generated by A.

    Order-k derivatives are tested against the degree d+r-k piece of the ideal.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    if f.varset != a.varset:
        raise ValueError("variable set mismatch")
    if not f.is_zero() and not f.is_homogeneous(a.degree + r):
        raise ValueError(f"expected a form of degree {a.degree + r}")
    for k in range(r, -1, -1):
        piece = ideal_graded_piece(a, r - k)
        seen = set()
        for m in f.terms:
            for beta in divisors_of_degree(m, k):
                if beta in seen:
                    continue
                seen.add(beta)
                if differentiate(f, beta) not in piece:
                    return False
    return True
