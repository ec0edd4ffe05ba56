"""Deterministic seeded instance generators.

Every generator checks its own advertised property before returning.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import ArgumentError, GenerationFailed, Infeasible
from .graph import EdgeColouredGraph, colour_degree, min_colour_degree, parse, serialize
from .rng import XorShift64Star
from .verify import ExtremalWitness, as_fraction, check_delta_extremal, check_eps_extremal

Edge = Tuple[int, int, int]


def _roundtrip(g: EdgeColouredGraph) -> EdgeColouredGraph:
    if parse(serialize(g)) != g:
        raise GenerationFailed("serialization round-trip mismatch")
    return g


def gen_sharpness(d: int, n: int) -> EdgeColouredGraph:
    """X = {0..d-1} joined to Y = {d..n-1}; x_i uses colour i towards Y, X is rainbow."""
    if d < 1 or 2 * n < 3 * d:
        raise ArgumentError("need d >= 1 and n >= 3d/2")
    edges: List[Edge] = []
    fresh = d
    for i in range(d):
        for j in range(i + 1, d):
            edges.append((i, j, fresh))
            fresh += 1
        for y in range(d, n):
            edges.append((i, y, i))
    g = EdgeColouredGraph(n, edges)
    if min_colour_degree(g) != d:
        raise GenerationFailed("sharpness instance has the wrong colour degree")
    return _roundtrip(g)


def sharpness_witness(d: int, n: int) -> ExtremalWitness:
    """The natural split A = X, B = Y with delta = d/n and eps = 1/n."""
    return ExtremalWitness(frozenset(range(d)), frozenset(range(d, n)), {i: i for i in range(d)},
                           Fraction(d, n), Fraction(1, n))


def gen_eps_extremal_exact(m: int) -> Tuple[EdgeColouredGraph, ExtremalWitness]:
    """|A| = 2m, |B| = m, every a-b edge has colour c_a = a, A is a rainbow clique."""
    if m < 2:
        raise ArgumentError("m must be at least 2")
    A = list(range(2 * m))
    B = list(range(2 * m, 3 * m))
    edges: List[Edge] = []
    fresh = 2 * m
    for i in A:
        for j in A:
            if i < j:
                edges.append((i, j, fresh))
                fresh += 1
        for b in B:
            edges.append((i, b, i))
    g = EdgeColouredGraph(3 * m, edges)
    w = ExtremalWitness(frozenset(A), frozenset(B), {a: a for a in A}, Fraction(2, 3), Fraction(1, 36 * m + 1))
    if not check_eps_extremal(g, w):
        raise GenerationFailed("exact instance failed its own witness")
    return _roundtrip(g), w


def gen_extremal(delta, eps, n: int, seed: int) -> Tuple[EdgeColouredGraph, ExtremalWitness]:
    """Random (delta, eps)-extremal instance with planted stars from A into B.

    Vertices: A = 0..|A|-1, B next, then the remainder split into Y-like
    vertices (rainbow towards A) and Z-like vertices (colour c_a towards A).
    Noise recolours a few a-b edges with fresh colours, within budgets that
    keep every count at least one vertex above its threshold.
    """
    delta, eps = as_fraction(delta), as_fraction(eps)
    if not (Fraction(1, 2) < delta < 1):
        raise ArgumentError("delta must lie in (1/2, 1)")
    if eps < 0 or eps >= delta / 10:
        raise ArgumentError("eps must lie in [0, delta/10)")
    if n < 20:
        raise ArgumentError("n must be at least 20")
    rng = XorShift64Star(seed)
    nA = math.ceil((delta - eps / 2) * n)
    nB = math.ceil((1 - delta - eps / 2) * n)
    r = n - nA - nB
    if r < 0:
        raise Infeasible(f"|A|+|B| = {nA + nB} exceeds n = {n}")
    target = math.ceil(delta * n)
    deg_cap = math.floor((delta + eps) * n)
    A = list(range(nA))
    B = list(range(nA, nA + nB))
    R = list(range(nA + nB, n))
    n_y = (r + 1) // 2
    Ylike, Zlike = R[:n_y], R[n_y:]
    col: Dict[Tuple[int, int], int] = {}
    fresh = nA

    def add(u: int, v: int, c=None) -> None:
        nonlocal fresh
        if c is None:
            c = fresh
            fresh += 1
        col[(min(u, v), max(u, v))] = c

    for i in A:
        for j in A:
            if i < j:
                add(i, j)
        for b in B:
            add(i, b, i)
        for y in Ylike:
            add(i, y)
        for z in Zlike:
            add(i, z, i)
    # noise: recolour a-b edges, keeping a one-vertex margin on both sides
    budget = math.floor(eps * n - 1) if eps * n >= 1 else 0
    lost_b = {b: 0 for b in B}
    for a in A:
        k = rng.randbelow(budget + 1) if budget else 0
        for b in rng.sample(B, min(k, len(B))):
            if lost_b[b] < budget:
                add(a, b)
                lost_b[b] += 1
    # top up colour degrees below target with fresh edges among B and R
    deg: Dict[int, int] = {v: 0 for v in range(n)}
    for (u, v) in col:
        deg[u] += 1
        deg[v] += 1
    g0 = EdgeColouredGraph(n, [(u, v, c) for (u, v), c in col.items()])
    need = {v: max(0, target - colour_degree(g0, v)) for v in B + R}
    if any(target - colour_degree(g0, a) > 0 for a in A):
        raise Infeasible("A-vertices fall below the colour-degree target")
    pool = B + R
    for v in pool:
        while need[v] > 0:
            cands = [u for u in pool if u != v and (min(u, v), max(u, v)) not in col
                     and (u not in B or deg[u] < deg_cap)]
            if not cands or (v in B and deg[v] >= deg_cap):
                raise Infeasible(f"cannot lift colour degree of vertex {v}")
            # prefer partners that still need colours themselves
            hungry = [u for u in cands if need[u] > 0]
            u = rng.choice(hungry or cands)
            add(v, u)
            deg[u] += 1
            deg[v] += 1
            need[v] -= 1
            if need[u] > 0:
                need[u] -= 1
    g = EdgeColouredGraph(n, [(u, v, c) for (u, v), c in col.items()])
    w = ExtremalWitness(frozenset(A), frozenset(B), {a: a for a in A}, delta, eps)
    if min_colour_degree(g) < target:
        raise Infeasible("colour-degree target not met")
    if not check_delta_extremal(g, w):
        raise Infeasible("witness fails (A1)-(A3) at this n")
    return _roundtrip(g), w


def gen_random_mcd(n: int, delta, colour_budget: int, seed: int, max_tries: int = 1000) -> EdgeColouredGraph:
    """Random dense graph with a random colouring and min colour degree >= ceil(delta n).

    Edges are deleted at random from K_n while both ends keep degree above
    the target; colours mix uniform picks with picks unused at both ends.
    The whole draw is repeated until the colour-degree bound holds.
    """
    delta = as_fraction(delta)
    target = math.ceil(delta * n)
    if colour_budget < target:
        raise ArgumentError("colour_budget must be at least ceil(delta * n)")
    if target > n - 1:
        raise ArgumentError("ceil(delta * n) exceeds n - 1")
    rng = XorShift64Star(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for _ in range(max_tries):
        deg = [n - 1] * n
        order = list(pairs)
        rng.shuffle(order)
        kept = []
        for u, v in order:
            if deg[u] > target and deg[v] > target and rng.bernoulli(1, 2):
                deg[u] -= 1
                deg[v] -= 1
            else:
                kept.append((u, v))
        used = [set() for _ in range(n)]
        edges: List[Edge] = []
        for u, v in kept:
            roll = rng.randbelow(4)
            if roll == 0:
                # repeat a colour at one end only, so the graph stays non-trivial
                pool = sorted(used[u] ^ used[v])
            elif roll == 1:
                pool = list(range(colour_budget))
            else:
                pool = [c for c in range(colour_budget) if c not in used[u] and c not in used[v]]
            c = rng.choice(pool) if pool else rng.randbelow(colour_budget)
            used[u].add(c)
            used[v].add(c)
            edges.append((u, v, c))
        edges = _repair_colour_degrees(n, edges, target, colour_budget, rng)
        g = EdgeColouredGraph(n, edges)
        if min_colour_degree(g) >= target:
            return _roundtrip(g)
    raise GenerationFailed(f"no instance after {max_tries} draws")


def _repair_colour_degrees(n: int, edges: List[Edge], target: int, budget: int,
                           rng: XorShift64Star) -> List[Edge]:
    """Recolour repeated edges at deficient vertices without pushing the other end under target."""
    col = {(u, v): c for u, v, c in edges}
    cnt: List[Dict[int, int]] = [dict() for _ in range(n)]
    for (u, v), c in col.items():
        cnt[u][c] = cnt[u].get(c, 0) + 1
        cnt[v][c] = cnt[v].get(c, 0) + 1
    for _ in range(4 * len(col) + 10):
        low = [v for v in range(n) if len(cnt[v]) < target]
        if not low:
            break
        v = low[0]
        moves = []
        for (a, b), c in sorted(col.items()):
            if v not in (a, b) or cnt[v][c] < 2:
                continue
            w = b if a == v else a
            for c2 in range(budget):
                if c2 in cnt[v]:
                    continue
                after = len(cnt[w]) - (1 if cnt[w][c] == 1 else 0) + (0 if c2 in cnt[w] else 1)
                if after >= target:
                    moves.append(((a, b), c, c2, w))
        if not moves:
            break
        (a, b), c, c2, w = rng.choice(moves)
        col[(a, b)] = c2
        for x in (v, w):
            cnt[x][c] -= 1
            if cnt[x][c] == 0:
                del cnt[x][c]
            cnt[x][c2] = cnt[x].get(c2, 0) + 1
    return [(u, v, c) for (u, v), c in sorted(col.items())]


def gen_locally_bounded(n: int, k: int, seed: int) -> EdgeColouredGraph:
    """K_n where no colour appears more than k times at any vertex."""
    if not (1 <= k <= n - 1):
        raise ArgumentError("need 1 <= k <= n - 1")
    rng = XorShift64Star(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    count: List[Dict[int, int]] = [dict() for _ in range(n)]
    ncol = 0
    edges: List[Edge] = []
    for u, v in pairs:
        options = list(range(ncol))
        rng.shuffle(options)
        chosen = None
        for c in options:
            if count[u].get(c, 0) < k and count[v].get(c, 0) < k:
                chosen = c
                break
        if chosen is None:
            chosen = ncol
            ncol += 1
        count[u][chosen] = count[u].get(chosen, 0) + 1
        count[v][chosen] = count[v].get(chosen, 0) + 1
        edges.append((u, v, chosen))
    g = EdgeColouredGraph(n, edges)
    for v in range(n):
        if max(count[v].values(), default=0) > k:
            raise GenerationFailed("local bound violated")
    return _roundtrip(g)
