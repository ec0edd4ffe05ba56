from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chroma.errors import ContractError, NotExtremalInput
from chroma.extremal import (PathSystem, cycle_from_matchings, cycle_from_path_system, eps_prime,
                             extremal_long_cycle, hamilton_in_extremal, partition_YZ, refine_extremal_pair,
                             sqrt_upper)
from chroma.gen import gen_eps_extremal_exact, gen_extremal, gen_sharpness, sharpness_witness
from chroma.graph import EdgeColouredGraph, critical_reduction, star_normalize
from chroma.oracle import longest_pc_cycle
from chroma.subroutines import Matching
from chroma.verify import ExtremalWitness, check_eps_extremal, check_pc_cycle, check_pc_path, recheck

from .conftest import rainbow_clique


def _with_extra(g, n, extra):
    return EdgeColouredGraph(n, list(g.edges()) + list(extra))


def _exact_plus_b(m):
    """Exact instance plus one more B-vertex joined to every a in colour c_a."""
    g, w = gen_eps_extremal_exact(m)
    v = 3 * m
    g1 = _with_extra(g, v + 1, [(a, v, w.colour_map[a]) for a in w.A])
    w1 = ExtremalWitness(w.A, frozenset(w.B | {v}), w.colour_map, Fraction(2 * m, v + 1), Fraction(1, 200))
    return g1, w1


@given(st.fractions(min_value=0, max_value=10, max_denominator=50))
def test_sqrt_upper_bounds_from_above(x):
    r = sqrt_upper(x)
    assert r * r >= x
    assert (r - Fraction(1, 10 ** 9)) ** 2 < x or r == 0


def test_eps_prime_exact_on_squares():
    assert sqrt_upper(Fraction(1, 4)) == Fraction(1, 2)
    assert eps_prime(Fraction(1, 100)) == Fraction(2, 5)
    assert eps_prime(Fraction(1, 50)) > 4 * Fraction(14142, 100000)


@pytest.mark.parametrize("m", range(2, 9))
def test_hamilton_in_exact_instance(m):
    g, w = gen_eps_extremal_exact(m)
    cyc = hamilton_in_extremal(g, w)
    recheck(g, cyc)
    assert cyc.vertex_set() == w.A | w.B and cyc.length == 3 * m


@pytest.mark.parametrize("m", [2, 3, 4])
def test_hamilton_agrees_with_oracle(m):
    g, w = gen_eps_extremal_exact(m)
    assert longest_pc_cycle(g).length == hamilton_in_extremal(g, w).length == g.n


def test_hamilton_rejects_large_eps():
    g, w = gen_eps_extremal_exact(4)
    with pytest.raises(ContractError):
        hamilton_in_extremal(g, w.with_eps(Fraction(1, 36)))


def test_refine_keeps_sharpness_clique():
    g = gen_sharpness(4, 8)
    w = sharpness_witness(4, 8)
    r = refine_extremal_pair(g, w.A, w.B, w.delta, Fraction(1, 100), w.colour_map)
    assert r.A == w.A and r.B == w.B and r.eps == Fraction(2, 5)


def test_refine_prunes_vertex_without_good_edges():
    A, B = list(range(6)), [6, 7, 8]
    edges, fresh = [], 100
    for i in A:
        for j in A:
            if i < j:
                edges.append((i, j, 0 if i == 0 else fresh))
                fresh += 1
        edges += [(i, b, i) for b in B]
    g = EdgeColouredGraph(9, edges)
    r = refine_extremal_pair(g, A, B, Fraction(2, 3), Fraction(1, 100), {a: a for a in A})
    assert sorted(r.A) == [1, 2, 3, 4, 5]


def test_refine_output_is_eps_prime_extremal():
    g, w = gen_extremal(Fraction(55, 100), Fraction(1, 1000), 60, 1)
    r = refine_extremal_pair(g, w.A, w.B, w.delta, w.eps, w.colour_map)
    assert check_eps_extremal(g, r)
    assert len(r.A) >= (r.delta - r.eps) * g.n


def test_refine_rejects_non_extremal():
    g = rainbow_clique(6)
    with pytest.raises(NotExtremalInput):
        refine_extremal_pair(g, [0, 1, 2, 3], [4, 5], Fraction(1, 2), Fraction(1, 100), {a: a for a in range(4)})


def test_empty_path_system_is_hamilton():
    g, w = gen_eps_extremal_exact(4)
    assert cycle_from_path_system(g, w, PathSystem(())).length == 12


def test_path_through_outside_vertex():
    g, w = gen_eps_extremal_exact(4)
    g2 = _with_extra(g, 13, [(8, 12, 900), (9, 12, 901)])
    ps = PathSystem((check_pc_path(g2, [8, 12, 9]),))
    cyc = cycle_from_path_system(g2, w, ps)
    assert cyc.vertex_set() == frozenset(range(13))


def test_path_system_endpoint_count_violation():
    g, w = gen_eps_extremal_exact(4)
    g2 = _with_extra(g, 14, [(8, 12, 900), (9, 12, 901), (9, 13, 902), (10, 13, 903)])
    ps = PathSystem((check_pc_path(g2, [8, 12, 9, 13, 10]),))
    with pytest.raises(ContractError):
        cycle_from_path_system(g2, w, ps)


def test_partition_examples():
    g, w = gen_eps_extremal_exact(4)
    assert partition_YZ(g, w).Y == partition_YZ(g, w).Z == frozenset()
    gy = _with_extra(g, 13, [(b, 12, 500 + b) for b in w.B])
    assert partition_YZ(gy, w).Y == {12}
    gz = _with_extra(g, 13, [(a, 12, w.colour_map[a]) for a in w.A])
    part = partition_YZ(gz, w)
    assert part.Z == {12} and part.violations == ()


def test_cycle_from_empty_matchings():
    g, w = _exact_plus_b(4)
    cyc = cycle_from_matchings(g, w, set(), set(), Matching(()), Matching(()), check_size=False)
    assert cyc.length == 12


@pytest.mark.parametrize("m", [3, 4, 5])
def test_matching_edge_never_shortens(m):
    g, w = _exact_plus_b(m)
    before = cycle_from_matchings(g, w, set(), set(), Matching(()), Matching(()), check_size=False)
    b1, b2 = sorted(w.B)[:2]
    g1 = _with_extra(g, g.n, [(b1, b2, 700)])
    after = cycle_from_matchings(g1, w, set(), set(), Matching(((b1, b2),)), Matching(()), check_size=False)
    assert after.length >= before.length + 1
    check_pc_cycle(g1, after.vertices)


def test_m_prime_edge_in_own_colour_rejected():
    g, w = _exact_plus_b(4)
    with pytest.raises(ContractError):
        cycle_from_matchings(g, w, set(), set(), Matching(()), Matching(((0, 8),)), check_size=False)


@pytest.mark.parametrize("d,n", [(4, 6), (4, 8), (5, 10), (6, 9), (6, 12)])
def test_driver_on_sharpness(d, n):
    g = gen_sharpness(d, n)
    h = star_normalize(critical_reduction(g))
    r = extremal_long_cycle(h, Fraction(d, n), Fraction(1, 100), sharpness_witness(d, n))
    assert r.verdict == "TARGET" and r.achieved == min(3 * d // 2, n)
    recheck(h, r.walk)


def test_driver_on_generated_instance():
    g, w = gen_extremal(Fraction(55, 100), Fraction(1, 1000), 60, 1)
    h = star_normalize(critical_reduction(g))
    r = extremal_long_cycle(h, Fraction(55, 100), Fraction(1, 1000), w)
    recheck(h, r.walk)
    assert r.target == 49 and r.trace()["achieved"] == r.walk.length


def test_driver_rejects_rainbow_clique():
    with pytest.raises(NotExtremalInput):
        extremal_long_cycle(rainbow_clique(8), Fraction(1, 2), Fraction(1, 100))


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 6))
def test_hamilton_covers_exactly_a_and_b(m):
    g, w = gen_eps_extremal_exact(m)
    assert hamilton_in_extremal(g, w).vertex_set() == w.A | w.B
