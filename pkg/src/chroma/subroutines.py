"""Matchings and directed Hamilton cycles used by the extremal pipeline."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import ArgumentError, DegreeTooLow, NoCycleFound
from .graph import EdgeColouredGraph


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u == v:
                raise ArgumentError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ArgumentError(f"arc ({u},{v}) out of range")
        object.__setattr__(self, "arcs", arcs)
        out: List[List[int]] = [[] for _ in range(self.n)]
        inn: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(arcs):
            out[u].append(v)
            inn[v].append(u)
        object.__setattr__(self, "out", tuple(tuple(a) for a in out))
        object.__setattr__(self, "inn", tuple(tuple(a) for a in inn))

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def min_semi_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(min(len(self.out[v]), len(self.inn[v])) for v in range(self.n))


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint edges, each stored as an ordered pair (u, v)."""

    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        used = set()
        for u, v in self.edges:
            if u in used or v in used or u == v:
                raise ArgumentError("matching edges are not vertex-disjoint")
            used.update((u, v))

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self) -> set:
        return {v for e in self.edges for v in e}

    def partner(self) -> Dict[int, int]:
        p = {}
        for u, v in self.edges:
            p[u] = v
            p[v] = u
        return p


def max_bipartite_matching(g: EdgeColouredGraph, left: Iterable[int], right: Iterable[int]) -> Matching:
    """Maximum matching by augmenting paths (Kuhn), lowest index first.

    Every edge of g must join `left` to `right`. Returned pairs are (left, right).
    """
    L = sorted(set(left))
    R = set(right)
    if set(L) & R:
        raise ArgumentError("left and right sides overlap")
    Lset = set(L)
    for u, v, _ in g.edges():
        if not ((u in Lset and v in R) or (v in Lset and u in R)):
            raise ArgumentError(f"edge ({u},{v}) does not cross the bipartition")
    adj = {u: [w for w, _ in g.neighbours(u)] for u in L}
    return Matching(tuple(sorted(_kuhn(L, adj).items())))


def bipartite_matching_adj(left: Sequence[int], adj: Dict[int, Sequence[int]]) -> Matching:
    """Same algorithm on an explicit adjacency map from left vertices."""
    return Matching(tuple(sorted(_kuhn(list(left), adj).items())))


def _kuhn(L: List[int], adj: Dict[int, Sequence[int]]) -> Dict[int, int]:
    match_r: Dict[int, int] = {}

    def augment(u: int, seen: set) -> bool:
        # iterative DFS to stay clear of the recursion limit on larger inputs
        stack = [(u, iter(adj.get(u, ())))]
        trail: List[Tuple[int, int]] = []
        while stack:
            node, it = stack[-1]
            advanced = False
            for w in it:
                if w in seen:
                    continue
                seen.add(w)
                if w not in match_r:
                    trail.append((node, w))
                    for a, b in trail:
                        match_r[b] = a
                    return True
                trail.append((node, w))
                stack.append((match_r[w], iter(adj.get(match_r[w], ()))))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if trail:
                    trail.pop()
        return False

    for u in L:
        augment(u, set())
    return {u: w for w, u in match_r.items()}



def max_matching(g: EdgeColouredGraph, vertices: Optional[Iterable[int]] = None) -> Matching:
    """Maximum matching of a general graph (Edmonds' blossom algorithm).

    If `vertices` is given the matching lives in the induced subgraph.
    """
    n = g.n
    allowed = set(range(n)) if vertices is None else set(vertices)
    adj = [[w for w, _ in g.neighbours(v) if w in allowed] if v in allowed else [] for v in range(n)]
    match = [-1] * n

    def find_path(root: int):
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark(v: int, b: int, child: int, blossom: List[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to, parent
                    used[match[to]] = True
                    q.append(match[to])
        return -1, parent

    # greedy start keeps the search short; both phases are deterministic
    for v in sorted(allowed):
        if match[v] == -1:
            for w in adj[v]:
                if match[w] == -1:
                    match[v], match[w] = w, v
                    break
    for v in sorted(allowed):
        if match[v] != -1:
            continue
        end, parent = find_path(v)
        while end != -1:
            pv = parent[end]
            nxt = match[pv]
            match[end], match[pv] = pv, end
            end = nxt
    return Matching(tuple(sorted((v, match[v]) for v in range(n) if match[v] > v)))


def bounded_degree_matching(g: EdgeColouredGraph, vertices: Optional[Iterable[int]] = None) -> Matching:
    """A matching with |M| * (Delta + 1) >= e, realised as a maximum matching."""
    return max_matching(g, vertices)


# directed Hamilton cycles

def check_directed_cycle(d: Digraph, seq: Sequence[int]) -> bool:
    if len(seq) != d.n or set(seq) != set(range(d.n)):
        return False
    if d.n == 1:
        return True
    return all(d.has_arc(seq[i], seq[(i + 1) % d.n]) for i in range(d.n))


def gh_hamilton_cycle(d: Digraph) -> List[int]:
    """Directed Hamilton cycle in a digraph of minimum semi-degree >= n/2.

    Grows a cycle by insertion first and falls back to exact search. The
    output is certificate-checked before return.
    """
    n = d.n
    for v in range(n):
        if 2 * min(len(d.out[v]), len(d.inn[v])) < n:
            raise DegreeTooLow(v)
    return find_hamilton_cycle(d)


def find_hamilton_cycle(d: Digraph) -> List[int]:
    """Hamilton cycle without the degree precondition; NoCycleFound if none exists."""
    n = d.n
    if n == 0:
        raise NoCycleFound("empty digraph")
    if n == 1:
        return [0]
    for start in range(n):
        cyc = _insertion_heuristic(d, start)
        if cyc is not None and check_directed_cycle(d, cyc):
            return cyc
    cyc = _exact_cycle(d)
    if cyc is None or not check_directed_cycle(d, cyc):
        raise NoCycleFound("no directed Hamilton cycle")
    return cyc


def _seed_cycle(d: Digraph, start: int) -> Optional[List[int]]:
    for v in d.out[start]:
        if d.has_arc(v, start):
            return [start, v]
    for v in d.out[start]:
        for w in d.out[v]:
            if w != start and d.has_arc(w, start):
                return [start, v, w]
    return None


def _insertion_heuristic(d: Digraph, start: int) -> Optional[List[int]]:
    cyc = _seed_cycle(d, start)
    if cyc is None:
        return None
    outside = [v for v in range(d.n) if v not in cyc]
    while outside:
        if not (_insert_one(d, cyc, outside) or _insert_two(d, cyc, outside)):
            return None
    return cyc


def _insert_one(d: Digraph, cyc: List[int], outside: List[int]) -> bool:
    # tail positions first, so insertion degenerates to path extension when it can
    k = len(cyc)
    for u in outside:
        for i in range(k - 1, -1, -1):
            if d.has_arc(cyc[i], u) and d.has_arc(u, cyc[(i + 1) % k]):
                cyc.insert(i + 1, u)
                outside.remove(u)
                return True
    return False


def _insert_two(d: Digraph, cyc: List[int], outside: List[int]) -> bool:
    # detour a -> u -> w -> b through two outside vertices
    k = len(cyc)
    rest = set(outside)
    for u in outside:
        for i in range(k):
            if not d.has_arc(cyc[i], u):
                continue
            b = cyc[(i + 1) % k]
            for w in d.out[u]:
                if w in rest and d.has_arc(w, b):
                    cyc[i + 1:i + 1] = [u, w]
                    outside.remove(u)
                    outside.remove(w)
                    return True
    return False


def _exact_cycle(d: Digraph) -> Optional[List[int]]:
    """Iterative bitmask DFS from vertex 0 with memoised dead states."""
    n = d.n
    full = (1 << n) - 1
    dead = set()
    path = [0]
    stack = [(0, 1, iter(d.out[0]))]
    while stack:
        v, mask, it = stack[-1]
        if mask == full:
            if d.has_arc(v, 0):
                return list(path)
            dead.add((v, mask))
            stack.pop()
            path.pop()
            continue
        pushed = False
        for w in it:
            nm = mask | (1 << w)
            if mask >> w & 1 or (w, nm) in dead:
                continue
            stack.append((w, nm, iter(d.out[w])))
            path.append(w)
            pushed = True
            break
        if not pushed:
            dead.add((v, mask))
            stack.pop()
            path.pop()
    return None
