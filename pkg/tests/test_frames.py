import pytest

from prolong.engine import derivatives_in, prolong
from prolong.formspace import make_formspace
from prolong.frames import (
    FrameSystem,
    IncompatibleFrames,
    all_frames,
    enumerate_frame_systems,
    frame_polynomial,
    frame_polynomials,
    frame_system_from_json,
    hanging_labelings,
    make_frame,
)
from prolong.phylo import caterpillar_tree, four_leaf_tree, fourier_varset, phylo_quadrics, snowflake_tree
from prolong.poly import Polynomial, differentiate

SNOW = snowflake_tree()

# golden 8-term cubic of the snowflake (sign is a convention; spans are what matter)
GOLDEN_CUBIC = (
    "q011000*q100010*q111111 - q101000*q010010*q111111"
    " - q011011*q100010*q111100 + q101011*q010010*q111100"
    " - q011000*q101110*q110011 + q101000*q011110*q110011"
    " + q011011*q101110*q110000 - q101011*q011110*q110000"
)


def claw(a, b, c):
    """Frame on the central node 10 with labels on its edges to 7, 8, 9."""
    return {(7, 10): a, (8, 10): b, (9, 10): c}


def cherry(node, leaves, labels):
    return {(leaves[0], node): labels[0], (leaves[1], node): labels[1]}


def golden_frames():
    f1 = make_frame(SNOW, {**claw(1, 1, 0), **cherry(8, (3, 4), (1, 0))})
    f2 = make_frame(SNOW, {**claw(1, 0, 1), **cherry(9, (5, 6), (1, 0))})
    f3 = make_frame(SNOW, {**claw(0, 0, 0), **cherry(7, (1, 2), (1, 1))})
    return f1, f2, f3


def test_frame_validation():
    with pytest.raises(ValueError, match="odd parity"):
        make_frame(SNOW, claw(1, 0, 0))
    with pytest.raises(ValueError, match="internal node"):
        make_frame(SNOW, {(1, 7): 0})
    with pytest.raises(ValueError, match="not an edge"):
        make_frame(SNOW, {(1, 2): 0, **claw(0, 0, 0)})
    f = make_frame(SNOW, claw(0, 1, 1))
    assert f.active == ((7, 10), (8, 10), (9, 10))


def test_hanging_labelings_base_order():
    f = make_frame(SNOW, claw(1, 1, 0))
    labs = hanging_labelings(SNOW, f, (7, 10))
    assert labs == [(((1, 7), 0), ((2, 7), 1)), (((1, 7), 1), ((2, 7), 0))]


def test_golden_cubic():
    vs = fourier_varset(6)
    target = Polynomial.parse(GOLDEN_CUBIC, vs)
    cubics = frame_polynomials(SNOW, 3)
    assert len(cubics) == 32
    assert all(len(c) == 8 for c in cubics)
    assert target.normalized() in cubics


def test_snowflake_cubics_span_prolongation():
    a = phylo_quadrics(SNOW)
    assert make_formspace(frame_polynomials(SNOW, 3), 3, a.varset) == prolong(a, 1)


def test_snowflake_quartic():
    systems = enumerate_frame_systems(SNOW, 4)
    assert len(systems) == 1
    assert len(systems[0].frames) == 4 and all(len(f.core) == 1 for f in systems[0].frames)
    q = frame_polynomial(SNOW, systems[0])
    assert len(q) == 64
    a = phylo_quadrics(SNOW)
    assert make_formspace([q], 4, a.varset) == prolong(a, 2)


def test_caterpillar_frames_span_prolongations():
    cat = caterpillar_tree()
    a = phylo_quadrics(cat)
    cubics = frame_polynomials(cat, 3)
    assert len(cubics) == 32 and {len(c) for c in cubics} == {6}
    assert make_formspace(cubics, 3, a.varset) == prolong(a, 1)
    quartics = frame_polynomials(cat, 4)
    assert sorted(len(q) for q in quartics) == [24, 24]
    assert make_formspace(quartics, 4, a.varset) == prolong(a, 2)


def test_four_leaf_d2_gives_the_two_minors():
    t = four_leaf_tree()
    polys = frame_polynomials(t, 2)
    assert make_formspace(polys, 2, fourier_varset(4)) == phylo_quadrics(t)
    assert {str(p) for p in polys} == {"q0000*q1111 - q0011*q1100", "q0101*q1010 - q0110*q1001"}


def test_d2_system_is_a_minor_of_its_edge_matrix():
    for system in enumerate_frame_systems(SNOW, 2, limit=40):
        p = frame_polynomial(SNOW, system)
        assert len(p) == 2 and p in phylo_quadrics(SNOW)


def test_too_many_frames_gives_nothing():
    assert enumerate_frame_systems(four_leaf_tree(), 3) == []
    assert enumerate_frame_systems(SNOW, 5) == []


def test_enumeration_limit_and_determinism():
    first = enumerate_frame_systems(SNOW, 3, limit=5)
    assert len(first) == 5
    assert first == enumerate_frame_systems(SNOW, 3)[:5]


def _golden_system(efun=None, completions=None):
    f1, f2, f3 = golden_frames()
    efun = efun or {(0, 1): (7, 10), (0, 2): (9, 10), (1, 2): (8, 10)}
    return FrameSystem((f1, f2, f3), tuple(sorted(efun.items())), completions or ())


def test_golden_system_by_hand():
    sysm = _golden_system()
    from prolong.frames import equivalence_classes
    classes = equivalence_classes(sysm.frames, dict(sysm.efun))
    comps = tuple((c, tuple(hanging_labelings(SNOW, sysm.frames[c[1][0]], c[0])[:2])) for c in classes)
    sysm = _golden_system(completions=comps)
    p = frame_polynomial(SNOW, sysm)
    assert p.normalized() == Polynomial.parse(GOLDEN_CUBIC, fourier_varset(6)).normalized()


def test_condition_one_reported_first():
    f1, f2, f3 = golden_frames()
    with pytest.raises(IncompatibleFrames) as err:
        frame_polynomial(SNOW, _golden_system(efun={(0, 1): (7, 10), (0, 2): (8, 10), (1, 2): (8, 10)}))
    assert err.value.condition == 1


def test_condition_three_reported():
    g = make_frame(SNOW, claw(0, 1, 1))
    h = make_frame(SNOW, {**claw(0, 1, 1), **cherry(9, (5, 6), (1, 0))})
    k = make_frame(SNOW, {**claw(0, 1, 1), **cherry(9, (5, 6), (0, 1))})
    sysm = FrameSystem((g, h, k), (((0, 1), (8, 10)), ((0, 2), (8, 10)), ((1, 2), (8, 10))), ())
    with pytest.raises(IncompatibleFrames) as err:
        frame_polynomial(SNOW, sysm)
    assert err.value.condition == 3


def test_bad_completion_reported():
    sysm = _golden_system()
    from prolong.frames import equivalence_classes
    classes = equivalence_classes(sysm.frames, dict(sysm.efun))
    comps = tuple((c, ()) for c in classes)
    with pytest.raises(IncompatibleFrames) as err:
        frame_polynomial(SNOW, _golden_system(completions=comps))
    assert err.value.condition == "completion"


def test_frame_system_json_round_trip():
    sysm = enumerate_frame_systems(SNOW, 3, limit=1)[0]
    assert frame_system_from_json(SNOW, sysm.to_json()) == sysm


@pytest.mark.parametrize("tree", [SNOW, caterpillar_tree()])
def test_membership_by_derivatives(tree):
    a = phylo_quadrics(tree)
    for d in (3, 4):
        for p in frame_polynomials(tree, d):
            assert derivatives_in(p, a, d - 2)


def test_derivative_recursion():
    """Each first derivative of a frame polynomial is in the span of lower-degree frame polynomials."""
    for tree in (SNOW, caterpillar_tree()):
        vs = fourier_varset(6)
        lower = {d: make_formspace(frame_polynomials(tree, d), d, vs) for d in (2, 3)}
        for d in (3, 4):
            for p in frame_polynomials(tree, d)[:8]:
                for i in {i for m in p.terms for i, e in enumerate(m) if e}:
                    beta = tuple(int(j == i) for j in range(vs.n))
                    assert differentiate(p, beta) in lower[d - 1]


def test_all_frames_counts():
    # one node: 4 labelings of a claw; two adjacent nodes: 8 labelings; and so on
    four = all_frames(four_leaf_tree())
    assert len(four) == 4 + 4 + 8


@pytest.mark.parametrize("tree,d", [(SNOW, 3), (SNOW, 4), (caterpillar_tree(), 3), (caterpillar_tree(), 4)])
def test_enumerated_systems_pass_strict_check(tree, d):
    from prolong.frames import check_frame_system

    for system in enumerate_frame_systems(tree, d):
        check_frame_system(tree, system)
