"""Exact brute-force ground truth for small instances."""
from __future__ import annotations

import itertools
import sys
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import ArgumentError, RefuseSize
from .graph import CYCLE, PATH, EdgeColouredGraph, PcWalk, min_colour_degree, serialize
from .verify import check_pc_cycle, check_pc_path

SEARCH_LIMIT = 14
ENUM_LIMIT = 5
ENUM_HARD_LIMIT = 6

NEG = -1 << 30


def _guard(n: int, limit: int, override: bool) -> None:
    if n > limit and not override:
        raise RefuseSize(n, limit)


def _with_recursion(depth: int):
    class _Ctx:
        def __enter__(self):
            self.old = sys.getrecursionlimit()
            sys.setrecursionlimit(max(self.old, 4 * depth + 200))

        def __exit__(self, *exc):
            sys.setrecursionlimit(self.old)

    return _Ctx()


def longest_pc_path(g: EdgeColouredGraph, limit: int = SEARCH_LIMIT, override: bool = False) -> PcWalk:
    """A longest properly coloured path (length in edges), exact.

    Memoised DFS over (last vertex, last colour, visited mask); a branch stops
    early once it reaches the trivial upper bound of visiting every vertex.
    """
    _guard(g.n, limit, override)
    n = g.n
    if n == 0:
        raise ArgumentError("empty graph has no path")
    adj = [g.neighbours(v) for v in range(n)]
    memo: Dict[Tuple[int, int, int], Tuple[int, int]] = {}

    def best(v: int, last: int, mask: int, left: int) -> int:
        # left = number of unvisited vertices; returns max extra edges
        key = (v, last, mask)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        top, arg = 0, -1
        if left:
            for w, c in adj[v]:
                if c == last or mask >> w & 1:
                    continue
                val = 1 + best(w, c, mask | (1 << w), left - 1)
                if val > top:
                    top, arg = val, w
                    if top == left:
                        break
        memo[key] = (top, arg)
        return top

    overall, start = -1, 0
    with _with_recursion(n):
        for s in range(n):
            val = best(s, -1, 1 << s, n - 1)
            if val > overall:
                overall, start = val, s
            if overall == n - 1:
                break
    seq = [start]
    v, last, mask = start, -1, 1 << start
    while True:
        _, w = memo[(v, last, mask)]
        if w < 0:
            break
        last = g.colour(v, w)
        mask |= 1 << w
        seq.append(w)
        v = w
    return check_pc_path(g, seq)


def longest_pc_cycle(g: EdgeColouredGraph, limit: int = SEARCH_LIMIT, override: bool = False) -> Optional[PcWalk]:
    """A longest properly coloured cycle, or None if the graph has none.

    Each cycle is searched from its lowest vertex s using only vertices above s.
    """
    _guard(g.n, limit, override)
    n = g.n
    adj = [g.neighbours(v) for v in range(n)]
    memo: Dict[Tuple[int, int, int, int], Tuple[int, int]] = {}

    def best(s: int, first: int, v: int, last: int, mask: int, left: int) -> int:
        # extra vertices that can still be added before closing back to s;
        # NEG when no proper closing is reachable
        key = (v, last, mask, first)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        top, arg = NEG, -1
        cs = g.colour(v, s)
        if cs is not None and cs != last and cs != first and mask.bit_count() >= 3:
            top = 0
        for w, c in adj[v]:
            if w <= s or c == last or mask >> w & 1:
                continue
            val = 1 + best(s, first, w, c, mask | (1 << w), left - 1)
            if val > top:
                top, arg = val, w
                if top == left:
                    break
        memo[key] = (top, arg)
        return top

    bestlen, arg = 0, None
    with _with_recursion(n):
        for s in range(n):
            if n - s <= bestlen:
                break
            for w, c in adj[s]:
                if w <= s:
                    continue
                left = n - s - 2
                val = best(s, c, w, c, (1 << s) | (1 << w), left)
                if val >= 0 and val + 2 > bestlen:
                    bestlen, arg = val + 2, (s, w, c)
                if bestlen == n - s:
                    break
            if bestlen == n:
                break
    if arg is None:
        return None
    s, w, c = arg
    seq = [s, w]
    v, last, mask = w, c, (1 << s) | (1 << w)
    while True:
        _, nxt = memo[(v, last, mask, c)]
        if nxt < 0:
            break
        last = g.colour(v, nxt)
        mask |= 1 << nxt
        seq.append(nxt)
        v = nxt
    return check_pc_cycle(g, seq)


def count_pc_paths(g: EdgeColouredGraph, x: int, y: int, ell: int,
                   allowed_end_colours: Optional[Iterable[int]] = None,
                   limit: int = SEARCH_LIMIT, override: bool = False) -> int:
    """Number of properly coloured x-y paths with exactly `ell` edges.

    Only paths whose edge at y has a colour in `allowed_end_colours` count
    (all colours when None). Plain DFS enumeration.
    """
    if x == y:
        raise ArgumentError("x and y must differ")
    if ell < 1:
        raise ArgumentError("ell must be at least 1")
    _guard(ell, limit, override)
    allowed = None if allowed_end_colours is None else set(allowed_end_colours)
    total = 0
    stack: List[Tuple[int, int, int, int]] = [(x, -1, 1 << x, 0)]
    while stack:
        v, last, mask, depth = stack.pop()
        for w, c in g.neighbours(v):
            if c == last or mask >> w & 1:
                continue
            if w == y:
                if depth + 1 == ell and (allowed is None or c in allowed):
                    total += 1
                continue
            if depth + 1 < ell:
                stack.append((w, c, mask | (1 << w), depth + 1))
    return total


def mu(g: EdgeColouredGraph, x: int, y: int, ell: int, allowed_end_colours=None) -> Fraction:
    """Normalised count |P_ell(x; y, C)| / n^(ell-1) as an exact rational."""
    return Fraction(count_pc_paths(g, x, y, ell, allowed_end_colours), g.n ** (ell - 1))


# canonical enumeration

def _pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _relabel_rg(seq: Sequence[int]) -> Tuple[int, ...]:
    """Relabel colours by first appearance (1, 2, ...); 0 means no edge."""
    mp: Dict[int, int] = {}
    out = []
    for c in seq:
        if c == 0:
            out.append(0)
        else:
            if c not in mp:
                mp[c] = len(mp) + 1
            out.append(mp[c])
    return tuple(out)


def _uncoloured_classes(n: int) -> List[Tuple[int, ...]]:
    """Canonical connected simple graphs on n vertices as 0/1 pair vectors."""
    pairs = _pairs(n)
    pos = {p: i for i, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    perm_maps = []
    for p in perms:
        perm_maps.append([pos[(min(p[i], p[j]), max(p[i], p[j]))] for i, j in pairs])
    seen = set()
    reps = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        if bits in seen:
            continue
        orbit = set()
        for pm in perm_maps:
            img = [0] * len(pairs)
            for k, b in enumerate(bits):
                if b:
                    img[pm[k]] = 1
            orbit.add(tuple(img))
        seen |= orbit
        rep = min(orbit)
        edges = [(i, j, 0) for (i, j), b in zip(pairs, rep) if b]
        if EdgeColouredGraph(n, edges).is_connected():
            reps.append(rep)
    reps.sort()
    return reps


def _automorphisms(n: int, rep: Tuple[int, ...]) -> List[List[int]]:
    pairs = _pairs(n)
    pos = {p: i for i, p in enumerate(pairs)}
    out = []
    for p in itertools.permutations(range(n)):
        pm = [pos[(min(p[i], p[j]), max(p[i], p[j]))] for i, j in pairs]
        if all(rep[pm[k]] == rep[k] for k in range(len(pairs))):
            out.append(pm)
    return out


def _restricted_growth(m: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Strings over 1..k of length m where each new symbol is one above the max so far."""
    if m == 0:
        yield ()
        return
    seq = [0] * m

    def rec(i: int, top: int):
        if i == m:
            yield tuple(seq)
            return
        for c in range(1, min(top + 1, k) + 1):
            seq[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(0, 0)


def enumerate_small(n: int, max_colours: int, limit: int = ENUM_LIMIT,
                    override: bool = False) -> Iterator[EdgeColouredGraph]:
    """Connected edge-coloured graphs on n vertices with at most `max_colours` colours,
    one per class under simultaneous vertex and colour permutation.

    Representatives are found in two stages: a canonical uncoloured graph
    (minimal 0/1 pair vector over all vertex permutations), then a colouring
    minimal over that graph's automorphisms after first-appearance relabelling.
    """
    if n < 1:
        raise ArgumentError("n must be positive")
    if n > ENUM_HARD_LIMIT or (n > limit and not override):
        raise RefuseSize(n, min(limit, ENUM_HARD_LIMIT) if not override else ENUM_HARD_LIMIT)
    if max_colours < 0:
        raise ArgumentError("max_colours must be non-negative")
    pairs = _pairs(n)
    for rep in _uncoloured_classes(n):
        idx = [k for k, b in enumerate(rep) if b]
        if not idx:
            yield EdgeColouredGraph(n, [])
            continue
        if max_colours == 0:
            continue
        auts = _automorphisms(n, rep)
        for rg in _restricted_growth(len(idx), max_colours):
            full = [0] * len(pairs)
            for k, c in zip(idx, rg):
                full[k] = c
            base = tuple(full)
            minimal = True
            for pm in auts:
                img = [0] * len(pairs)
                for k in idx:
                    img[pm[k]] = full[k]
                if _relabel_rg(img) < base:
                    minimal = False
                    break
            if minimal:
                yield EdgeColouredGraph(n, [(pairs[k][0], pairs[k][1], full[k] - 1) for k in idx])


def conjecture_scan(n_max: int, max_colours: int, limit: int = ENUM_LIMIT,
                    override: bool = False) -> dict:
    """Check "PC Hamilton cycle or PC path of length floor(3d/2)" on every small graph."""
    checked = 0
    violators: List[str] = []
    for n in range(1, n_max + 1):
        for g in enumerate_small(n, max_colours, limit=limit, override=override):
            checked += 1
            if not scan_instance_ok(g):
                violators.append(serialize(g))
    return {"n": n_max, "colour_budget": max_colours, "instances_checked": checked, "violators": violators}


def scan_instance_ok(g: EdgeColouredGraph) -> bool:
    d = min_colour_degree(g)
    if g.n == 0:
        return True
    if longest_pc_path(g, override=True).length >= (3 * d) // 2:
        return True
    cyc = longest_pc_cycle(g, override=True) if g.n >= 3 else None
    return cyc is not None and cyc.order == g.n
