import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_circuit_space, random_space, varset
from prolong.engine import prolong
from prolong.formspace import make_formspace, zero_space
from prolong.monomial import (
    MonomialSpace,
    build_blowup_graph,
    circuits_and_decomposition,
    clique_prolong,
    iter_cliques,
    monomial_prolong,
    monomial_support,
    no_three_way_space,
    segre_minor_space,
)
from prolong.phylo import four_leaf_tree, phylo_quadrics
from prolong.poly import Polynomial, VarSet, monomials_of_degree, parse_monomial

X4 = varset(4)


def mspace(vs, d, texts):
    return MonomialSpace(vs, d, tuple(parse_monomial(t, vs) for t in texts))


EX37 = ["x1^2", "x1*x2", "x2*x3", "x2*x4", "x3*x4"]


def names(space):
    return [str(Polynomial.monomial(space.varset, m)) for m in space.monomials]


def test_support_examples():
    a = make_formspace([Polynomial.parse("x1*x4 - x2*x3", X4)], 2)
    assert names(monomial_support(a)) == ["x1*x4", "x2*x3"]
    assert len(monomial_support(zero_space(X4, 2))) == 0
    # two binomials: four monomials, which between them use all eight variables
    m = monomial_support(phylo_quadrics(four_leaf_tree()))
    assert len(m) == 4
    assert all(any(mono[i] for mono in m.monomials) for i in range(8))


def test_monomial_prolong_examples():
    assert names(monomial_prolong(mspace(X4, 2, EX37), 1)) == ["x1^3", "x1^2*x2", "x2*x3*x4"]
    full = MonomialSpace(X4, 2, tuple(monomials_of_degree(4, 2)))
    assert set(monomial_prolong(full, 2).monomials) == set(monomials_of_degree(4, 4))
    assert len(monomial_prolong(monomial_support(no_three_way_space(2, 2, 2)), 1)) == 0


def test_blowup_graph_small_monomial():
    g = build_blowup_graph(mspace(X4, 2, EX37), 1)
    assert len(g.vertices) == 6
    assert g.sigma == {0}
    # five triangles, three monomials
    triangles = [c for c in combinations(g.vertices, 3)
                 if all(g.has_edge(u, v) for u, v in combinations(c, 2))]
    assert len(triangles) == 5
    assert names(clique_prolong(g, 1)) == ["x1^3", "x1^2*x2", "x2*x3*x4"]
    dot = g.to_dot()
    assert '"1.3"' in dot and '"2.1" -- "4.1"' in dot


def test_blowup_graph_without_squares_is_simple():
    g = build_blowup_graph(mspace(X4, 2, ["x1*x2", "x3*x4"]), 2)
    assert len(g.vertices) == 4
    assert len(clique_prolong(g, 2)) == 0


def test_full_quadrics_blowup_gives_all_monomials():
    vs = varset(3)
    full = MonomialSpace(vs, 2, tuple(monomials_of_degree(3, 2)))
    g = build_blowup_graph(full, 1)
    assert len(g.vertices) == 9
    assert set(clique_prolong(g, 1).monomials) == set(monomials_of_degree(3, 3))


def test_segre_cliques_are_distinct_rows_and_columns():
    a = segre_minor_space(3, 3)
    g = build_blowup_graph(monomial_support(a), 1)
    got = clique_prolong(g, 1)
    assert len(got) == 6
    for m in got.monomials:
        cells = [a.varset.names[i] for i, e in enumerate(m) for _ in range(e)]
        assert len({c[1] for c in cells}) == 3 and len({c[2] for c in cells}) == 3


def test_cliques_listed_once():
    g = build_blowup_graph(mspace(X4, 2, EX37), 1)
    cliques = list(iter_cliques(g, 3))
    assert len(cliques) == len({frozenset(c) for c in cliques})


def test_blowup_rejects_higher_degree():
    with pytest.raises(ValueError):
        build_blowup_graph(mspace(X4, 3, ["x1^3"]), 1)


def test_decomposition_examples():
    seg = circuits_and_decomposition(segre_minor_space(2, 3))
    assert seg.circuits_only and all(len(b) == 2 for b in seg.blocks)
    assert len(seg.circuits) == 3
    xy = VarSet.of("x", "y")
    a = make_formspace([Polynomial.parse("x^2 + x*y", xy), Polynomial.parse("x*y + y^2", xy)], 2)
    dec = circuits_and_decomposition(a)
    assert not dec.circuits_only
    assert len(dec.blocks) == 1 and len(dec.blocks[0]) == 3 and dec.spaces[0].dim == 2
    with pytest.raises(ValueError):
        dec.circuits


def test_no3way_generator_counts():
    for dims, count in [((2, 2, 2), 1), ((2, 2, 3), 3), ((2, 3, 3), 9)]:
        a = no_three_way_space(*dims)
        assert a.dim == count
        assert len(monomial_prolong(monomial_support(a), 1)) == 0
        assert prolong(a, 1).is_zero()


def test_json_round_trip():
    m = mspace(X4, 2, EX37)
    assert MonomialSpace.from_json(m.to_json()) == m


# -- properties ---------------------------------------------------------------------

seeds = st.integers(0, 2 ** 32)


def random_monomials(rng, n, d):
    monos = list(monomials_of_degree(n, d))
    k = rng.randint(0, len(monos))
    return MonomialSpace(varset(n), d, tuple(rng.sample(monos, k)))


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_prolongation_support_contained(seed):
    rng = random.Random(seed)
    a = random_space(rng, rng.randint(1, 4), rng.randint(1, 3))
    r = rng.randint(1, 2)
    assert set(monomial_support(prolong(a, r)).monomials) <= set(
        monomial_prolong(monomial_support(a), r).monomials)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_clique_and_divisor_routes_agree(seed):
    rng = random.Random(seed)
    m = random_monomials(rng, rng.randint(1, 5), 2)
    r = rng.randint(1, 3)
    assert clique_prolong(build_blowup_graph(m, r), r) == monomial_prolong(m, r)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_monomial_fixed_point(seed):
    rng = random.Random(seed)
    m = random_monomials(rng, rng.randint(1, 4), rng.randint(1, 3))
    r = rng.randint(1, 2)
    assert prolong(m.as_formspace(), r) == monomial_prolong(m, r).as_formspace()


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_iterated_monomial_prolongation(seed):
    rng = random.Random(seed)
    m = random_monomials(rng, rng.randint(1, 5), rng.randint(1, 3))
    assert monomial_prolong(monomial_prolong(m, 1), 2) == monomial_prolong(m, 3)


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_circuit_preservation(seed):
    rng = random.Random(seed)
    a = random_circuit_space(rng, rng.randint(1, 4), rng.randint(1, 3))
    assert circuits_and_decomposition(a).circuits_only
    r = rng.randint(1, 2)
    assert circuits_and_decomposition(prolong(a, r)).circuits_only


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_decomposition_is_direct_sum(seed):
    rng = random.Random(seed)
    a = random_space(rng, rng.randint(1, 4), rng.randint(1, 3))
    dec = circuits_and_decomposition(a)
    assert sum(s.dim for s in dec.spaces) == a.dim
    seen = set()
    for block in dec.blocks:
        assert not seen & set(block)
        seen |= set(block)
    assert seen == set(a.monomials())
