"""Shared strategies and small graph builders."""
from __future__ import annotations

import itertools

from hypothesis import strategies as st

from chroma.graph import EdgeColouredGraph


def rainbow_clique(n: int) -> EdgeColouredGraph:
    return EdgeColouredGraph(n, [(u, v, k) for k, (u, v) in enumerate(itertools.combinations(range(n), 2))])


def pc_path_graph(n: int) -> EdgeColouredGraph:
    """A path 0-1-...-(n-1) alternating colours 0 and 1."""
    return EdgeColouredGraph(n, [(i, i + 1, i % 2) for i in range(n - 1)])


@st.composite
def coloured_graphs(draw, min_n: int = 1, max_n: int = 7, max_colours: int = 4, density: float = 0.6):
    n = draw(st.integers(min_n, max_n))
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if draw(st.floats(0, 1)) < density:
            edges.append((u, v, draw(st.integers(0, max_colours - 1))))
    return EdgeColouredGraph(n, edges)


def random_complete(n: int, colours: int, rng) -> EdgeColouredGraph:
    return EdgeColouredGraph(n, [(u, v, rng.randbelow(colours)) for u, v in itertools.combinations(range(n), 2)])


def splice_configs(count: int, seed: int = 0):
    """Yield (g, outer, inner) with outer absorbing inner's end edges, by rejection sampling."""
    from chroma.absorb import is_absorbing_for_pair
    from chroma.graph import PcWalk
    from chroma.rng import XorShift64Star
    from chroma.verify import check_pc_path
    from chroma.errors import CertificateError

    rng = XorShift64Star(seed)
    made = 0
    while made < count:
        n = 8 + rng.randbelow(5)
        g = random_complete(n, 3 + rng.randbelow(3), rng)
        for _ in range(200):
            order = rng.sample(range(n), n)
            z, x = order[:4], order[4:4 + 4 + rng.randbelow(n - 7)]
            try:
                outer, inner = check_pc_path(g, z), check_pc_path(g, x)
            except CertificateError:
                continue
            if is_absorbing_for_pair(g, outer, x[0], x[1], x[-2], x[-1]):
                yield g, outer, inner
                made += 1
                if made >= count:
                    return


def absorb_triples(count: int, seed: int = 0):
    """Yield (g, C, family, paths): rainbow K_n, C threads the family members, paths use the rest."""
    from fractions import Fraction
    from chroma.absorb import AbsorbingFamily
    from chroma.rng import XorShift64Star
    from chroma.verify import check_pc_cycle, check_pc_path

    rng = XorShift64Star(seed)
    for _ in range(count):
        k = 2 + rng.randbelow(4)
        n = 4 * k + 4 + rng.randbelow(12)
        g = rainbow_clique(n)
        order = rng.sample(range(n), n)
        members = tuple(check_pc_path(g, order[4 * i:4 * i + 4]) for i in range(k))
        rest = order[4 * k:]
        spare = rng.randbelow(3)
        C = check_pc_cycle(g, order[:4 * k] + rest[:spare])
        rest = rest[spare:]
        paths, units = [], 0
        while rest and units < k:
            size = 1 + rng.randbelow(min(len(rest), 6))
            if size <= 3 and units + size > k:
                size = 1
            paths.append(check_pc_path(g, rest[:size]))
            units += size if size <= 3 else 1
            rest = rest[size:]
        yield g, C, AbsorbingFamily(members, Fraction(1, 100), {}), paths


def switch_preconditions(g, H, w, drop):
    """The switch clauses at the x end, evaluated without calling switch."""
    x = H.x.vertex
    if w not in H:
        return False
    c = g.colour(x, w)
    if c is None or c == H.x.forbidden_colour:
        return False
    if min(H.dist(w, x), H.dist(w, H.y.vertex)) < H.rho * g.n + 1:
        return False
    return c != (H.c_minus(w) if drop == "SUCC" else H.c_plus(w))


def predicted_anchor(H, w, drop):
    """The new x anchor: (w+, c+(w+)) when dropping ww+, (w-, c-(w-)) when dropping ww-."""
    from chroma.graph import AnchoredVertex
    if drop == "SUCC":
        v = H.succ(w)
        return AnchoredVertex(v, H.c_plus(v))
    v = H.pred(w)
    return AnchoredVertex(v, H.c_minus(v))


def switch_pairs(count: int, seed: int = 0):
    """Yield (g, H, end, w, drop) with every precondition met, walking through random switches."""
    from fractions import Fraction
    from chroma.errors import ContractError
    from chroma.rng import XorShift64Star
    from chroma.rotation import maximal_one_path_cycle, reverse_parameters, switch

    rng = XorShift64Star(seed)
    made = 0
    while made < count:
        n = 8 + rng.randbelow(7)
        g = random_complete(n, 3 + rng.randbelow(4), rng)
        try:
            H = maximal_one_path_cycle(g, Fraction(1, n))
        except ContractError:
            continue
        for _ in range(8):
            opts = []
            for end in ("X", "Y"):
                Hs = H if end == "X" else reverse_parameters(H)
                opts += [(end, w, d) for w in sorted(Hs.vertex_set()) for d in ("SUCC", "PRED")
                         if switch_preconditions(g, Hs, w, d)]
            if not opts:
                break
            end, w, d = rng.choice(opts)
            yield g, H, end, w, d
            made += 1
            if made >= count:
                return
            H = switch(g, H, end, w, d)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS.values():
            terminalreporter.write_line(line)
