"""Trivalent trees and the binary symmetric model in Fourier coordinates.

Variables are ``q`` followed by an even-parity bit string over the leaves,
e.g. ``q011000``.  Every such string labels the edges of the tree by the
parity of the bits on one side; the 1-labelled edges form disjoint
leaf-to-leaf paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable

from .formspace import FormSpace, make_formspace
from .poly import Polynomial, VarSet
from .secant import MonomialMap

Edge = tuple[int, int]
Bits = tuple[int, ...]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Tree:
    n: int
    edges: tuple[Edge, ...]
    adjacency: dict = field(compare=False, hash=False, repr=False)
    splits: dict = field(compare=False, hash=False, repr=False)

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.adjacency))

    @property
    def internal_nodes(self) -> tuple[int, ...]:
        return tuple(v for v in self.nodes if not self.is_leaf(v))

    def is_leaf(self, v: int) -> bool:
        return len(self.adjacency[v]) == 1

    @property
    def internal_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not (self.is_leaf(e[0]) or self.is_leaf(e[1])))

    def leaf_edge(self, leaf: int) -> Edge:
        (v,) = self.adjacency[leaf]
        return edge_key(leaf, v)

    def side(self, e: Edge, toward: int) -> set[int]:
        """Nodes reachable from endpoint ``toward`` of ``e`` without crossing e."""
        other = e[0] if toward == e[1] else e[1]
        seen = {toward}
        stack = [toward]
        while stack:
            v = stack.pop()
            for w in self.adjacency[v]:
                if w not in seen and not (v == toward and w == other):
                    seen.add(w)
                    stack.append(w)
        return seen

    def edges_beyond(self, e: Edge, node: int) -> tuple[Edge, ...]:
        """Edges on ``node``'s side of ``e``, not including e."""
        nodes = self.side(e, node)
        return tuple(f for f in self.edges if f != e and f[0] in nodes and f[1] in nodes)

    def split(self, e: Edge) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Leaf bipartition A|B of ``e``: A is the smaller side, ties to the side of the smallest leaf."""
        return self.splits[e]

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)


def load_tree(edges: Iterable[tuple[int, int]]) -> Tree:
    edge_list = [edge_key(int(u), int(v)) for u, v in edges]
    if len(set(edge_list)) != len(edge_list):
        raise ValueError("repeated edge")
    adjacency: dict[int, set[int]] = {}
    for u, v in edge_list:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    if not adjacency:
        raise ValueError("empty tree")
    if len(edge_list) != len(adjacency) - 1:
        raise ValueError("not a tree: edge count must be one less than node count")
    start = next(iter(adjacency))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adjacency[v] - seen:
            seen.add(w)
            stack.append(w)
    if len(seen) != len(adjacency):
        raise ValueError("not a tree: graph is disconnected")
    leaves = sorted(v for v, nb in adjacency.items() if len(nb) == 1)
    for v, nb in adjacency.items():
        if len(nb) not in (1, 3):
            raise ValueError(f"node {v} has degree {len(nb)}; internal nodes must have degree 3")
    n = len(leaves)
    if leaves != list(range(1, n + 1)):
        raise ValueError(f"leaves must be labelled 1..{n}, found {leaves}")
    if n < 3:
        raise ValueError("a trivalent tree needs at least 3 leaves")
    adjacency = {v: frozenset(nb) for v, nb in adjacency.items()}
    tree = Tree(n, tuple(sorted(edge_list)), adjacency, {})
    for e in tree.edges:
        a = sorted(x for x in tree.side(e, e[0]) if x <= n)
        b = sorted(x for x in tree.side(e, e[1]) if x <= n)
        if (len(b), b[0]) < (len(a), a[0]):
            a, b = b, a
        tree.splits[e] = (tuple(a), tuple(b))
    return tree


def parse_tree(text: str) -> Tree:
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    return load_tree(edges)


def four_leaf_tree() -> Tree:
    return load_tree([(1, 5), (2, 5), (5, 6), (3, 6), (4, 6)])


def snowflake_tree() -> Tree:
    """Cherries {1,2}, {3,4}, {5,6} hung off a central node."""
    return load_tree([(1, 7), (2, 7), (3, 8), (4, 8), (5, 9), (6, 9), (7, 10), (8, 10), (9, 10)])


def caterpillar_tree() -> Tree:
    """Cherries {1,2} and {5,6} at the ends of a spine carrying leaves 3 and 4."""
    return load_tree([(1, 7), (2, 7), (7, 8), (3, 8), (8, 9), (4, 9), (9, 10), (5, 10), (6, 10)])


# -- Fourier coordinates ---------------------------------------------------------

def fourier_indices(n: int) -> list[Bits]:
    """All even-parity bit strings of length n, lexicographic."""
    if n < 1:
        raise ValueError("n must be positive")
    return [bits for bits in product((0, 1), repeat=n) if sum(bits) % 2 == 0]


def bits_name(bits: Bits) -> str:
    return "q" + "".join(map(str, bits))


def fourier_varset(n: int) -> VarSet:
    return VarSet(tuple(bits_name(b) for b in fourier_indices(n)))


def edge_labeling(tree: Tree, bits: Bits) -> dict[Edge, int]:
    """Label each edge by the parity of ``bits`` over one side of its split."""
    if len(bits) != tree.n or sum(bits) % 2:
        raise ValueError("expected an even bit string with one bit per leaf")
    return {e: sum(bits[j - 1] for j in tree.split(e)[0]) % 2 for e in tree.edges}


def bits_from_labeling(tree: Tree, labels: dict[Edge, int]) -> Bits:
    return tuple(labels[tree.leaf_edge(j)] for j in tree.leaves)


def split_matrices(tree: Tree, e: Edge) -> tuple[list[list[str]], list[list[str]]]:
    """Variable names of M^e_0 and M^e_1: rows by bits on A, columns by bits on B."""
    e = edge_key(*e)
    if e not in tree.internal_edges:
        raise ValueError(f"{e} is not an internal edge")
    a_side, b_side = tree.split(e)
    out = []
    for parity in (0, 1):
        rows = [r for r in product((0, 1), repeat=len(a_side)) if sum(r) % 2 == parity]
        cols = [c for c in product((0, 1), repeat=len(b_side)) if sum(c) % 2 == parity]
        mat = []
        for r in rows:
            line = []
            for c in cols:
                bits = [0] * tree.n
                for j, b in zip(a_side, r):
                    bits[j - 1] = b
                for j, b in zip(b_side, c):
                    bits[j - 1] = b
                line.append(bits_name(tuple(bits)))
            mat.append(line)
        out.append(mat)
    return out[0], out[1]


def quadric_generators(tree: Tree) -> list[Polynomial]:
    """All 2x2 minors of M^e_0 and M^e_1 over the internal edges."""
    vs = fourier_varset(tree.n)
    gens = []
    for e in tree.internal_edges:
        for mat in split_matrices(tree, e):
            for r1, r2 in combinations(range(len(mat)), 2):
                for c1, c2 in combinations(range(len(mat[0])), 2):
                    a, b = mat[r1][c1], mat[r1][c2]
                    c, d = mat[r2][c1], mat[r2][c2]
                    gens.append(Polynomial.var(vs, a) * Polynomial.var(vs, d)
                                - Polynomial.var(vs, b) * Polynomial.var(vs, c))
    return gens


def phylo_quadrics(tree: Tree) -> FormSpace:
    """The space A_T of quadrics in the toric ideal (zero space without internal edges)."""
    return make_formspace(quadric_generators(tree), 2, fourier_varset(tree.n))


def edge_param_name(e: Edge) -> str:
    return f"t{e[0]}_{e[1]}"


def phylo_parametrization(tree: Tree) -> MonomialMap:
    """q_i -> product of the edge parameters over the 1-labelled edges of i."""
    params = VarSet(tuple(edge_param_name(e) for e in tree.edges))
    pos = {e: k for k, e in enumerate(tree.edges)}
    images = []
    for bits in fourier_indices(tree.n):
        expo = [0] * len(tree.edges)
        for e, lab in edge_labeling(tree, bits).items():
            if lab:
                expo[pos[e]] = 1
        images.append(tuple(expo))
    return MonomialMap(params, fourier_varset(tree.n), tuple(images))


def socket_labelings(tree: Tree) -> list[dict[Edge, int]]:
    """Every 0/1 edge labelling with an even number of 1s at each internal node."""
    internal = [v for v in tree.nodes if not tree.is_leaf(v)]
    out = []
    for labels in product((0, 1), repeat=len(tree.edges)):
        lab = dict(zip(tree.edges, labels))
        if all(sum(lab[edge_key(v, w)] for w in tree.adjacency[v]) % 2 == 0 for v in internal):
            out.append(lab)
    return out
