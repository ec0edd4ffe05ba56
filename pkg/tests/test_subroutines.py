import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from chroma.errors import ArgumentError, DegreeTooLow, NoCycleFound
from chroma.graph import EdgeColouredGraph
from chroma.rng import XorShift64Star
from chroma.subroutines import (Digraph, Matching, bounded_degree_matching, check_directed_cycle,
                                find_hamilton_cycle, gh_hamilton_cycle, max_bipartite_matching, max_matching)


def is_matching_of(g, m: Matching) -> bool:
    return all(g.has_edge(u, v) for u, v in m.edges)


def nx_size(g: EdgeColouredGraph, vertices=None) -> int:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    keep = set(range(g.n)) if vertices is None else set(vertices)
    h.add_edges_from((u, v) for u, v, _ in g.edges() if u in keep and v in keep)
    return len(nx.max_weight_matching(h, maxcardinality=True))


def test_bipartite_examples():
    m = 4
    kmm = EdgeColouredGraph(2 * m, [(i, m + j, 0) for i in range(m) for j in range(m)])
    assert len(max_bipartite_matching(kmm, range(m), range(m, 2 * m))) == m
    star = EdgeColouredGraph(4, [(0, 1, 0), (0, 2, 0), (0, 3, 0)])
    assert len(max_bipartite_matching(star, [0], [1, 2, 3])) == 1
    with pytest.raises(ArgumentError):
        max_bipartite_matching(EdgeColouredGraph(3, [(0, 1, 0), (1, 2, 0)]), [0, 1], [2])


def test_dense_bipartite_has_perfect_matching():
    m = 12
    rng = XorShift64Star(5)
    edges = []
    for i in range(m):
        missing = set(rng.sample(range(m), 1))
        edges.extend((i, m + j, 0) for j in range(m) if j not in missing)
    g = EdgeColouredGraph(2 * m, edges)
    M = max_bipartite_matching(g, range(m), range(m, 2 * m))
    assert len(M) == m and is_matching_of(g, M)


@settings(max_examples=150)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32))
def test_bipartite_matches_networkx(a, b, seed):
    rng = XorShift64Star(seed)
    edges = [(i, a + j, 0) for i in range(a) for j in range(b) if rng.bernoulli(2, 5)]
    g = EdgeColouredGraph(a + b, edges)
    M = max_bipartite_matching(g, range(a), range(a, a + b))
    assert is_matching_of(g, M)
    assert len(M) == nx_size(g)


@settings(max_examples=200)
@given(st.integers(1, 30), st.integers(0, 2**32))
def test_general_matching_matches_networkx_and_vizing_bound(n, seed):
    rng = XorShift64Star(seed)
    g = EdgeColouredGraph(n, [(u, v, 0) for u, v in itertools.combinations(range(n), 2) if rng.bernoulli(1, 4)])
    M = bounded_degree_matching(g)
    assert is_matching_of(g, M)
    assert len(M) == nx_size(g)
    assert len(M) * (g.max_degree() + 1) >= g.m


def test_matching_examples():
    tri = EdgeColouredGraph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])
    assert len(bounded_degree_matching(tri)) == 1
    pm = EdgeColouredGraph(8, [(2 * i, 2 * i + 1, 0) for i in range(4)])
    assert len(bounded_degree_matching(pm)) == 4
    # induced restriction
    assert len(max_matching(pm, [0, 1, 2])) == 1


def test_matching_rejects_overlap():
    with pytest.raises(ArgumentError):
        Matching(((0, 1), (1, 2)))


def test_gh_examples():
    k3 = Digraph(3, {(u, v) for u in range(3) for v in range(3) if u != v})
    cyc = gh_hamilton_cycle(k3)
    assert check_directed_cycle(k3, cyc) and cyc[0] == 0
    c4 = Digraph(4, {(i, (i + 1) % 4) for i in range(4)})
    with pytest.raises(DegreeTooLow):
        gh_hamilton_cycle(c4)
    assert check_directed_cycle(c4, find_hamilton_cycle(c4))
    path = Digraph(3, {(0, 1), (1, 2)})
    with pytest.raises(NoCycleFound):
        find_hamilton_cycle(path)


def semi_degree_digraphs(n: int):
    """All digraphs on n vertices with min semi-degree >= ceil(n/2)."""
    need = (n + 1) // 2
    choices = []
    for v in range(n):
        others = [u for u in range(n) if u != v]
        choices.append([s for k in range(need, n) for s in itertools.combinations(others, k)])
    for outs in itertools.product(*choices):
        indeg = [0] * n
        for s in outs:
            for u in s:
                indeg[u] += 1
        if min(indeg) >= need:
            yield Digraph(n, {(v, u) for v, s in enumerate(outs) for u in s})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gh_exhaustive_small(n):
    count = 0
    for d in semi_degree_digraphs(n):
        assert check_directed_cycle(d, gh_hamilton_cycle(d))
        count += 1
    assert count > 0


def test_digraph_rejects_loops():
    with pytest.raises(ArgumentError):
        Digraph(2, {(0, 0)})
