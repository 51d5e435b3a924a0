"""Monomial prolongations, the blow-up graph G(A, r), and support blocks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .formspace import FormSpace, make_formspace
from .poly import (
    Monomial,
    Polynomial,
    VarSet,
    format_monomial,
    parse_monomial,
    sort_grlex,
)


@dataclass(frozen=True)
class MonomialSpace:
    varset: VarSet
    degree: int
    monomials: tuple[Monomial, ...]

    def __post_init__(self):
        monos = tuple(sort_grlex(set(self.monomials)))
        for m in monos:
            if len(m) != self.varset.n or sum(m) != self.degree:
                raise ValueError(f"monomial {m} does not have degree {self.degree}")
        object.__setattr__(self, "monomials", monos)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m: Monomial) -> bool:
        return m in self._set()

    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.monomials)
            object.__setattr__(self, "_cached_set", s)
        return s

    def as_formspace(self) -> FormSpace:
        return FormSpace(self.varset, self.degree, tuple(
            Polynomial.monomial(self.varset, m) for m in self.monomials))

    def to_json(self) -> dict:
        return {
            "vars": list(self.varset.names),
            "degree": self.degree,
            "monomials": [format_monomial(m, self.varset) for m in self.monomials],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "MonomialSpace":
        vs = VarSet(tuple(obj["vars"]))
        return cls(vs, int(obj["degree"]), tuple(parse_monomial(t, vs) for t in obj["monomials"]))


def monomial_support(a: FormSpace) -> MonomialSpace:
    """M(A): every monomial with a non-zero coefficient in some element of A."""
    return MonomialSpace(a.varset, a.degree, tuple(a.monomials()))


def _one_step(monos: frozenset, n: int) -> set[Monomial]:
    out = set()
    for m in monos:
        for i in range(n):
            cand = m[:i] + (m[i] + 1,) + m[i + 1:]
            if cand in out:
                continue
            if all(cand[:j] + (cand[j] - 1,) + cand[j + 1:] in monos
                   for j in range(n) if cand[j]):
                out.add(cand)
    return out


def monomial_prolong(space: MonomialSpace, r: int) -> MonomialSpace:
    """Degree d+r monomials all of whose degree-d divisors lie in ``space``.

    Computed one degree at a time: a monomial qualifies for r steps exactly
    when each of its degree-(d+r-1) divisors qualified for r-1 steps.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    current = frozenset(space.monomials)
    for _ in range(r):
        if not current:
            break
        current = frozenset(_one_step(current, space.varset.n))
    return MonomialSpace(space.varset, space.degree + r, tuple(current))


# -- blow-up graph ---------------------------------------------------------------

Vertex = tuple[int, int]


@dataclass(frozen=True)
class BlowupGraph:
    """G(A, r) for a space of quadratic monomials.

    Vertices are ``(i, j)``: variable index ``i`` (0-based) and copy ``j``
    (0-based); a variable whose square lies in A gets r+2 copies, every
    other variable a single one.
    """

    varset: VarSet
    r: int
    sigma: frozenset
    vertices: tuple[Vertex, ...]
    adjacency: dict

    @property
    def edges(self) -> frozenset:
        return frozenset(frozenset((u, v)) for u, nbrs in self.adjacency.items() for v in nbrs)

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self.adjacency[u]

    def to_dot(self) -> str:
        def label(v):
            return f'"{v[0] + 1}.{v[1] + 1}"'

        lines = ["graph G {"]
        for v in self.vertices:
            lines.append(f"  {label(v)};")
        for u, v in sorted(tuple(sorted(e)) for e in self.edges):
            lines.append(f"  {label(u)} -- {label(v)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_blowup_graph(space: MonomialSpace, r: int) -> BlowupGraph:
    if space.degree != 2:
        raise ValueError("the blow-up graph is defined for quadratic monomials only")
    if r < 1:
        raise ValueError("r must be >= 1")
    n = space.varset.n
    present = set(space.monomials)

    def quad(i, k):
        e = [0] * n
        e[i] += 1
        e[k] += 1
        return tuple(e)

    sigma = frozenset(i for i in range(n) if quad(i, i) in present)
    vertices = tuple((i, j) for i in range(n) for j in range(r + 2 if i in sigma else 1))
    adjacency = {v: set() for v in vertices}
    for u, v in combinations(vertices, 2):
        if quad(u[0], v[0]) in present:
            adjacency[u].add(v)
            adjacency[v].add(u)
    adjacency = {v: frozenset(s) for v, s in adjacency.items()}
    return BlowupGraph(space.varset, r, sigma, vertices, adjacency)


def degeneracy_order(adjacency: dict) -> list:
    """Repeatedly remove a minimum-degree vertex; ties go to the smallest vertex."""
    degree = {v: len(nbrs) for v, nbrs in adjacency.items()}
    alive = set(adjacency)
    order = []
    while alive:
        v = min(alive, key=lambda u: (degree[u], u))
        order.append(v)
        alive.remove(v)
        for w in adjacency[v]:
            if w in alive:
                degree[w] -= 1
    return order


def iter_cliques(graph: BlowupGraph, size: int):
    """Cliques of exactly ``size`` vertices, each listed once.

    Vertices are visited in degeneracy order and a clique only grows through
    later neighbours.  Copies of one variable are twins, so only cliques that
    use copies 0..c-1 of each variable are generated.
    """
    order = degeneracy_order(graph.adjacency)
    pos = {v: k for k, v in enumerate(order)}
    later = {v: sorted((w for w in graph.adjacency[v] if pos[w] > pos[v]), key=pos.get)
             for v in order}

    def admissible(v, clique_set):
        return v[1] == 0 or (v[0], v[1] - 1) in clique_set

    def extend(clique, clique_set, cands):
        if len(clique) == size:
            yield tuple(clique)
            return
        for k, w in enumerate(cands):
            if len(clique) + len(cands) - k < size:
                break
            if not admissible(w, clique_set):
                continue
            nxt = [u for u in cands[k + 1:] if u in graph.adjacency[w]]
            clique.append(w)
            clique_set.add(w)
            yield from extend(clique, clique_set, nxt)
            clique.pop()
            clique_set.remove(w)

    for v in order:
        if v[1] != 0:
            continue
        yield from extend([v], {v}, later[v])


def clique_prolong(graph: BlowupGraph, r: int) -> MonomialSpace:
    """Monomials x_{i1}...x_{i(r+2)} whose vertices span a complete subgraph."""
    if r != graph.r:
        raise ValueError(f"graph was built for r={graph.r}, not r={r}")
    n = graph.varset.n
    found = set()
    for clique in iter_cliques(graph, r + 2):
        e = [0] * n
        for i, _ in clique:
            e[i] += 1
        found.add(tuple(e))
    return MonomialSpace(graph.varset, r + 2, tuple(found))


# -- support blocks and circuits ---------------------------------------------------

@dataclass(frozen=True)
class SupportDecomposition:
    blocks: tuple[tuple[Monomial, ...], ...]
    spaces: tuple[FormSpace, ...]
    circuits_only: bool

    @property
    def circuits(self) -> tuple[Polynomial, ...]:
        """The disjoint-support circuits, available when every block is 1-dimensional."""
        if not self.circuits_only:
            raise ValueError("space is not minimally generated by its circuits")
        return tuple(s.basis[0] for s in self.spaces)


def circuits_and_decomposition(a: FormSpace) -> SupportDecomposition:
    """Finest partition of M(A) into blocks with A = direct sum of A n span(block).

    Monomials are merged whenever they share a canonical basis element.  A
    direct-sum decomposition over disjoint blocks has a canonical basis that
    is the union of the blocks' canonical bases, so these components are
    already the finest blocks; the dimension identity is checked anyway.
    """
    parent: dict[Monomial, Monomial] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in a.basis:
        monos = list(b.terms)
        for m in monos:
            parent.setdefault(m, m)
        for m in monos[1:]:
            ra, rb = find(monos[0]), find(m)
            if ra != rb:
                parent[rb] = ra

    groups: dict[Monomial, list[Monomial]] = {}
    for m in parent:
        groups.setdefault(find(m), []).append(m)
    members: dict[Monomial, list[Polynomial]] = {}
    for b in a.basis:
        members.setdefault(find(next(iter(b.terms))), []).append(b)

    blocks = sorted((tuple(sort_grlex(g)) for g in groups.values()), key=lambda blk: blk[0], reverse=True)
    spaces = tuple(make_formspace(members[find(blk[0])], a.degree, a.varset) for blk in blocks)
    if sum(s.dim for s in spaces) != a.dim:
        raise AssertionError("support blocks do not decompose the space")
    return SupportDecomposition(tuple(blocks), spaces, all(s.dim == 1 for s in spaces))


# -- built-in generator sets ---------------------------------------------------------

def no_three_way_space(l: int, m: int, n: int) -> FormSpace:
    """Degree-4 binomials of the no-3-way interaction model on an l x m x n table.

    One binomial per choice of two levels in each factor, obtained from
    x111 x122 x212 x221 - x112 x121 x211 x222 by relabelling indices.
    """
    sep = "" if max(l, m, n) <= 9 else "_"
    names = [f"x{sep}{i}{sep}{j}{sep}{k}" for i in range(1, l + 1)
             for j in range(1, m + 1) for k in range(1, n + 1)]
    vs = VarSet(tuple(names))
    index = {(i, j, k): (i - 1) * m * n + (j - 1) * n + (k - 1)
             for i in range(1, l + 1) for j in range(1, m + 1) for k in range(1, n + 1)}
    pattern_pos = [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)]
    pattern_neg = [(1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 2)]
    polys = []
    for I in combinations(range(1, l + 1), 2):
        for J in combinations(range(1, m + 1), 2):
            for K in combinations(range(1, n + 1), 2):
                terms = {}
                for sign, pattern in ((1, pattern_pos), (-1, pattern_neg)):
                    e = [0] * len(names)
                    for a, b, c in pattern:
                        e[index[I[a - 1], J[b - 1], K[c - 1]]] += 1
                    terms[tuple(e)] = sign
                polys.append(Polynomial(vs, terms))
    return make_formspace(polys, 4, vs)


def generic_matrix(rows: int, cols: int, name: str = "x") -> tuple[VarSet, list[list[Polynomial]]]:
    sep = "" if max(rows, cols) <= 9 else "_"
    names = [f"{name}{sep}{i}{sep}{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)]
    vs = VarSet(tuple(names))
    mat = [[Polynomial.var(vs, f"{name}{sep}{i}{sep}{j}") for j in range(1, cols + 1)]
           for i in range(1, rows + 1)]
    return vs, mat


def segre_minor_space(rows: int, cols: int, k: int = 2) -> FormSpace:
    """Span of the k x k minors of a generic rows x cols matrix."""
    from .poly import minors

    vs, mat = generic_matrix(rows, cols)
    return make_formspace(minors(mat, k), k, vs)
