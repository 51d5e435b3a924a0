"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time
from contextlib import contextmanager
from itertools import permutations
from math import comb, factorial

from _gen import random_circuit_space, random_form, random_instance, varset
from prolong.engine import STRATEGIES, derivatives_in, differential_power_member, iterated_prolong, prolong
from prolong.formspace import make_formspace
from prolong.frames import frame_polynomials
from prolong.monomial import (
    build_blowup_graph,
    circuits_and_decomposition,
    clique_prolong,
    monomial_prolong,
    monomial_support,
    no_three_way_space,
    segre_minor_space,
)
from prolong.phylo import (
    caterpillar_tree,
    four_leaf_tree,
    phylo_parametrization,
    phylo_quadrics,
    snowflake_tree,
    split_matrices,
)
from prolong.poly import Polynomial, determinant, differentiate, minors, monomials_of_degree, partial_polarize, polarize
from prolong.secant import SampleConfig, interpolate_vanishing_piece, secant_vanish_check, segre_map


@contextmanager
def criterion(capsys, number, title):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title} ({elapsed:.2f}s)")


def phylo_case(tree):
    a = phylo_quadrics(tree)
    return tree, a, prolong(a, 1), prolong(a, 2)


def test_criterion_1_small_monomial(capsys):
    with criterion(capsys, 1, "small monomial space: prolongation by all strategies and the clique path"):
        start = time.perf_counter()
        vs = varset(4)
        a = make_formspace([Polynomial.parse(t, vs) for t in ("x1^2", "x1*x2", "x2*x3", "x2*x4", "x3*x4")], 2)
        expected = ["x1^3", "x1^2*x2", "x2*x3*x4"]
        for s in STRATEGIES:
            b = prolong(a, 1, s)
            assert b.dim == 3 and [str(p) for p in b.basis] == expected
        cliques = clique_prolong(build_blowup_graph(monomial_support(a), 1), 1)
        assert [str(Polynomial.monomial(vs, m)) for m in cliques.monomials] == expected
        assert time.perf_counter() - start < 1.0


def test_criterion_2_snowflake(capsys):
    with criterion(capsys, 2, "snowflake: 32 eight-term cubic blocks, one 64-term quartic"):
        _, _, b1, b2 = phylo_case(snowflake_tree())
        assert b1.dim == 32
        dec = circuits_and_decomposition(b1)
        assert len(dec.blocks) == 32 and all(len(blk) == 8 for blk in dec.blocks)
        assert all(s.dim == 1 for s in dec.spaces)
        assert b2.dim == 1 and len(b2.monomials()) == 64


def test_criterion_3_caterpillar(capsys):
    with criterion(capsys, 3, "caterpillar: 32 six-term cubics, two 24-term quartics = middle 4x4 determinants"):
        tree, a, b1, b2 = phylo_case(caterpillar_tree())
        assert b1.dim == 32
        dec1 = circuits_and_decomposition(b1)
        assert len(dec1.blocks) == 32 and all(len(blk) == 6 for blk in dec1.blocks)
        assert b2.dim == 2
        dec2 = circuits_and_decomposition(b2)
        assert sorted(len(blk) for blk in dec2.blocks) == [24, 24]
        vs = a.varset
        middle = [e for e in tree.internal_edges
                  if all(len(side) == 3 for side in tree.split(e))]
        assert len(middle) == 1
        dets = [make_formspace([determinant([[Polynomial.var(vs, x) for x in row] for row in mat])], 4, vs)
                for mat in split_matrices(tree, middle[0])]
        assert set(dec2.spaces) == set(dets)


def test_criterion_4_segre(capsys):
    with criterion(capsys, 4, "Segre 3x3 and 3x4: prolongation is the span of the maximal minors"):
        for rows, cols in ((3, 3), (3, 4)):
            a = segre_minor_space(rows, cols)
            b = prolong(a, 1)
            vs = a.varset
            mat = [[Polynomial.var(vs, f"x{i}{j}") for j in range(1, cols + 1)] for i in range(1, rows + 1)]
            big = minors(mat, 3)
            assert len(big) == comb(rows, 3) * comb(cols, 3)
            assert b.dim == len(big)
            assert b == make_formspace(big, 3, vs)


def test_criterion_5_no_three_way(capsys):
    with criterion(capsys, 5, "no-3-way: empty monomial prolongation, zero prolongation"):
        start = time.perf_counter()
        for dims in ((2, 2, 2), (2, 2, 3), (2, 3, 3)):
            a = no_three_way_space(*dims)
            assert len(monomial_prolong(monomial_support(a), 1)) == 0
            assert prolong(a, 1).is_zero()
        assert time.perf_counter() - start < 10.0


def test_criterion_6_frame_membership(capsys):
    with criterion(capsys, 6, "frame polynomials lie in the differential power and the prolongation"):
        for tree in (snowflake_tree(), caterpillar_tree()):
            a = phylo_quadrics(tree)
            for d in (3, 4):
                polys = frame_polynomials(tree, d)
                assert polys
                for p in polys:
                    assert differential_power_member(p, a, d - 2)
                    assert derivatives_in(p, a, d - 2)


def test_criterion_7_secant_vanishing(capsys):
    with criterion(capsys, 7, "secant vanishing of the quartic and cubics; corrupted quartic caught"):
        tree, _, b1, b2 = phylo_case(snowflake_tree())
        mmap = phylo_parametrization(tree)
        quartic = b2.basis[0]
        rep = secant_vanish_check(quartic, mmap, 3, 50, SampleConfig(seed=2024))
        assert rep.passes and rep.zero == 50
        for k, cubic in enumerate(b1.basis):
            assert secant_vanish_check(cubic, mmap, 2, 5, SampleConfig(seed=k)).passes
        m, c = next(iter(quartic.terms.items()))
        corrupted = Polynomial(quartic.varset, {**quartic.terms, m: c + 1})
        bad = secant_vanish_check(corrupted, mmap, 3, 5, SampleConfig(seed=2024))
        assert not bad.passes and bad.witness["trial"] < 5


def test_criterion_8_interpolation(capsys):
    with criterion(capsys, 8, "interpolated secant pieces equal the prolongations, stable across seeds"):
        tree = four_leaf_tree()
        at = phylo_quadrics(tree)
        seg = segre_map(3, 3)
        vs = seg.targets
        det = make_formspace(minors([[Polynomial.var(vs, f"x{i}{j}") for j in range(1, 4)]
                                     for i in range(1, 4)], 3), 3, vs)
        for seed in (11, 12):
            got = interpolate_vanishing_piece(phylo_parametrization(tree), 1, 2, SampleConfig(seed=seed))
            assert got == at and got.dim == 2
            got = interpolate_vanishing_piece(seg, 2, 3, SampleConfig(seed=seed))
            assert got == det and got.dim == 1


def test_criterion_9_property_suites(capsys):
    with criterion(capsys, 9, "property suites over 100+ random instances each (n<=5, d<=3, r<=2)"):
        runs = 120
        rng = random.Random(20240601)
        counts = dict.fromkeys(
            ["agreement", "iterated", "containment", "circuits", "polarization", "derivative"], 0)
        for _ in range(runs):
            a = random_instance(rng, max_n=5, max_d=3)
            r = rng.randint(1, 2)
            results = [prolong(a, r, s) for s in STRATEGIES]
            assert results[0] == results[1] == results[2]
            counts["agreement"] += 1

            assert iterated_prolong(a, r) == results[0]
            counts["iterated"] += 1

            assert set(monomial_support(results[0]).monomials) <= set(
                monomial_prolong(monomial_support(a), r).monomials)
            counts["containment"] += 1

            c = random_circuit_space(rng, rng.randint(1, 5), rng.randint(1, 3))
            assert circuits_and_decomposition(c).circuits_only
            assert circuits_and_decomposition(prolong(c, rng.randint(1, 2))).circuits_only
            counts["circuits"] += 1

            n, d = rng.randint(1, 5), rng.randint(1, 3)
            f = random_form(rng, varset(n), d)
            pf = polarize(f)
            for order in permutations(range(d)):
                assert pf.permute_blocks(order).poly == pf.poly
            assert pf.block_degrees() == {(1,) * d}
            assert pf.diagonal() == factorial(d) * f
            counts["polarization"] += 1

            n, dd, rr = rng.randint(1, 5), rng.randint(1, 3), rng.randint(0, 2)
            g = random_form(rng, varset(n), dd + rr)
            pp = partial_polarize(g, dd, rr)
            for beta in monomials_of_degree(n, rr):
                lhs = factorial(dd) * factorial(rr) * differentiate(g, beta)
                rhs = pp.block_derivative(1, beta).poly.map_monomials(lambda m: m[:n], g.varset)
                assert lhs == rhs
            counts["derivative"] += 1
        assert all(v >= 100 for v in counts.values()), counts
