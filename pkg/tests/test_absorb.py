import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chroma.absorb import (absorb_paths, build_absorbing_cycle, classify_reachability, connect,
                           find_absorbing_family, is_absorbing_for_pair, is_absorbing_for_vertex, reachability_mu,
                           splice)
from chroma.errors import (AbsorberExhausted, AbsorbMismatch, ArgumentError, CertificateError, ContractError,
                           FamilySearchFailed, NoConnector)
from chroma.graph import AnchoredVertex, EdgeColouredGraph
from chroma.oracle import count_pc_paths
from chroma.verify import check_pc_path

from .conftest import absorb_triples, coloured_graphs, rainbow_clique, splice_configs


def _rainbow_quad_plus_x():
    # z = 0 1 2 3, x = 4 joined to z2 = 1 and z3 = 2
    return EdgeColouredGraph(5, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (1, 4, 3), (4, 2, 4)])


def test_vertex_absorber_examples():
    g = _rainbow_quad_plus_x()
    assert is_absorbing_for_vertex(g, [0, 1, 2, 3], 4)
    assert not is_absorbing_for_vertex(g, [0, 1, 2, 3], 1)
    clash = EdgeColouredGraph(5, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (1, 4, 0), (4, 2, 4)])
    assert not is_absorbing_for_vertex(clash, [0, 1, 2, 3], 4)


@settings(max_examples=200)
@given(coloured_graphs(min_n=5, max_n=7, max_colours=3, density=0.8), st.data())
def test_vertex_absorber_matches_path_check(g, data):
    seq = data.draw(st.permutations(range(g.n)))
    z, x = seq[:4], seq[4]
    try:
        check_pc_path(g, z)
        check_pc_path(g, [z[0], z[1], x, z[2], z[3]])
        expected = True
    except CertificateError:
        expected = False
    assert is_absorbing_for_vertex(g, z, x) == expected


def _pair_instance(clash_y: bool):
    # z = 0 1 2 3, (x1, x2) = (4, 5), (y1, y2) = (6, 7); all colours fresh unless clash_y
    edges = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (1, 4, 3), (4, 5, 4), (6, 7, 5), (7, 2, 6),
             (1, 6, 5 if clash_y else 7), (5, 2, 8)]
    return EdgeColouredGraph(8, edges)


def test_pair_absorber_examples():
    g = _pair_instance(False)
    assert is_absorbing_for_pair(g, [0, 1, 2, 3], 4, 5, 6, 7)
    bad = EdgeColouredGraph(8, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (1, 4, 4), (4, 5, 4), (6, 7, 5), (7, 2, 6)])
    assert not is_absorbing_for_pair(bad, [0, 1, 2, 3], 4, 5, 6, 7)
    with pytest.raises(ArgumentError):
        is_absorbing_for_pair(g, [0, 1, 2, 3], 4, 6, 5, 7)


def test_pair_order_matters():
    g = _pair_instance(True)
    assert is_absorbing_for_pair(g, [0, 1, 2, 3], 4, 5, 6, 7)
    assert not is_absorbing_for_pair(g, [0, 1, 2, 3], 6, 7, 4, 5)


def test_splice_random_configurations():
    for g, outer, inner in splice_configs(200, seed=3):
        out = splice(g, outer, inner)
        assert out.order == inner.order + 4
        check_pc_path(g, out.vertices)


def test_splice_rejects_non_absorbing_outer():
    g = rainbow_clique(8)
    outer = check_pc_path(g, [0, 1, 2, 3])
    with pytest.raises(AbsorbMismatch):
        splice(g, outer, check_pc_path(g, [3, 4, 5, 6]))
    with pytest.raises(AbsorbMismatch):
        splice(g, outer, check_pc_path(g, [4, 5, 6]))


def test_family_on_rainbow_k30():
    g = rainbow_clique(30)
    fam = find_absorbing_family(g, Fraction(1, 100), seed=0)
    assert all(len(fam.absorbers_for_vertex(x)) >= 1 for x in range(30))
    assert len(fam) <= 5
    used = set()
    for P in fam.members:
        check_pc_path(g, P.vertices)
        assert not used & set(P.vertices)
        used |= set(P.vertices)
    assert set(fam.audit_json()) == {"size", "min_vertex_coverage", "sampled_pair_coverage", "seed"}


def test_family_is_deterministic():
    g = rainbow_clique(30)
    assert find_absorbing_family(g, Fraction(1, 100), seed=4).members == \
        find_absorbing_family(g, Fraction(1, 100), seed=4).members


def test_family_budget_too_tight():
    with pytest.raises(FamilySearchFailed):
        find_absorbing_family(rainbow_clique(20), Fraction(1, 2), seed=0)


def test_family_needs_colour_degree():
    g = EdgeColouredGraph(6, [(0, 1, 0), (2, 3, 0), (4, 5, 0)])
    with pytest.raises(ContractError):
        find_absorbing_family(g, Fraction(1, 100))


def test_connect_examples():
    g = EdgeColouredGraph(2, [(0, 1, 5)])
    assert connect(g, AnchoredVertex(0, 1), AnchoredVertex(1, 2)).length == 1
    k6 = rainbow_clique(6)
    for x, y in itertools.permutations(range(6), 2):
        for cx, cy in [(k6.colour(x, y), None), (None, k6.colour(x, y))]:
            w = connect(k6, AnchoredVertex(x, cx), AnchoredVertex(y, cy))
            assert w.length <= 2 and w.colours[0] != cx and w.colours[-1] != cy
    two = EdgeColouredGraph(6, [(0, 1, 0), (1, 2, 1), (0, 2, 2), (3, 4, 0), (4, 5, 1), (3, 5, 2)])
    with pytest.raises(NoConnector):
        connect(two, AnchoredVertex(0, None), AnchoredVertex(4, None))


@settings(max_examples=100, deadline=None)
@given(coloured_graphs(min_n=3, max_n=7, max_colours=3), st.data())
def test_connect_respects_anchors(g, data):
    x, y = data.draw(st.permutations(range(g.n)))[:2]
    cx = data.draw(st.one_of(st.none(), st.integers(0, 2)))
    cy = data.draw(st.one_of(st.none(), st.integers(0, 2)))
    try:
        w = connect(g, AnchoredVertex(x, cx), AnchoredVertex(y, cy))
    except NoConnector:
        return
    check_pc_path(g, w.vertices)
    assert w.vertices[0] == x and w.vertices[-1] == y
    assert w.colours[0] != cx and w.colours[-1] != cy


def test_mu_examples():
    g = EdgeColouredGraph(2, [(0, 1, 7)])
    assert reachability_mu(g, 0, 1, 1) == 1
    assert reachability_mu(g, 0, 1, 1, excluded_colour=7) == 0
    assert reachability_mu(rainbow_clique(5), 0, 1, 2) == Fraction(8, 5)


@settings(max_examples=60, deadline=None)
@given(coloured_graphs(min_n=2, max_n=8, max_colours=3, density=0.7), st.integers(1, 4), st.data())
def test_mu_equals_path_count_sum(g, ell, data):
    x, y = data.draw(st.permutations(range(g.n)))[:2]
    expected = sum(Fraction(count_pc_paths(g, x, y, k), g.n ** (k - 1)) for k in range(1, ell + 1))
    assert reachability_mu(g, x, y, ell) == expected


def test_classify_reachability():
    k5 = rainbow_clique(5)
    assert classify_reachability(k5, 0, 1, 2, Fraction(1, 10)).kind == "STRONG"
    star = EdgeColouredGraph(3, [(0, 1, 0), (1, 2, 0)])
    r = classify_reachability(EdgeColouredGraph(2, [(0, 1, 3)]), 0, 1, 1, Fraction(1, 4))
    assert r.kind == "UNIQUE_COLOUR" and r.colour == 3
    assert classify_reachability(star, 0, 2, 2, Fraction(1, 10)).kind == "UNREACHABLE"


def test_absorbing_cycle_on_rainbow_k40():
    g = rainbow_clique(40)
    C, fam = build_absorbing_cycle(g, Fraction(1, 400), Fraction(1, 4), seed=0)
    assert C.vertex_set() >= fam.vertices()
    assert len(fam) <= 2


def test_absorbing_cycle_needs_colour_degree():
    with pytest.raises(ContractError):
        build_absorbing_cycle(EdgeColouredGraph(4, [(0, 1, 0), (2, 3, 0)]), Fraction(1, 100), 0)


def test_absorb_paths_examples():
    g = rainbow_clique(40)
    C, fam = build_absorbing_cycle(g, Fraction(1, 400), Fraction(1, 4), seed=0)
    assert absorb_paths(g, C, fam, []) == C
    left = [v for v in range(40) if v not in C.vertex_set()]
    one = absorb_paths(g, C, fam, [check_pc_path(g, [left[0]])])
    assert one.vertex_set() == C.vertex_set() | {left[0]}
    five = absorb_paths(g, C, fam, [check_pc_path(g, left[1:6])])
    assert five.vertex_set() == C.vertex_set() | set(left[1:6])
    with pytest.raises(AbsorberExhausted):
        absorb_paths(g, C, fam, [check_pc_path(g, left[6:9])])


def test_absorb_paths_constructed_triples():
    for g, C, fam, paths in absorb_triples(40, seed=9):
        out = absorb_paths(g, C, fam, paths)
        assert out.vertex_set() == C.vertex_set() | {v for P in paths for v in P.vertices}
