"""Absorbing paths, connectors and the absorbing cycle.

A length-3 PC path z1 z2 z3 z4 absorbs a vertex x when z1 z2 x z3 z4 is PC,
and absorbs an ordered edge pair (x1, x2; y1, y2) when z1 z2 x1 x2 and
y1 y2 z3 z4 are both PC; then any PC path x1 ... xl with those end edges can
be spliced in between z2 and z3.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import (AbsorberExhausted, AbsorbMismatch, ArgumentError, AssemblyFailed, ContractError,
                     FamilySearchFailed, NoConnector)
from .graph import PATH, AnchoredVertex, EdgeColouredGraph, PcWalk, min_colour_degree
from .rng import XorShift64Star
from .subroutines import bipartite_matching_adj
from .verify import as_fraction, check_pc_cycle, check_pc_path

PAIR_SAMPLES = 10_000
DEFAULT_LEN_MAX = 8


# absorbing predicates

def _is_pc(g: EdgeColouredGraph, seq: Sequence[int]) -> bool:
    if len(set(seq)) != len(seq):
        return False
    last = None
    for u, v in zip(seq, seq[1:]):
        c = g.colour(u, v)
        if c is None or c == last:
            return False
        last = c
    return True


def _quad(P) -> Tuple[int, ...]:
    vs = tuple(P.vertices) if isinstance(P, PcWalk) else tuple(P)
    return vs


def is_absorbing_for_vertex(g: EdgeColouredGraph, P, x: int) -> bool:
    """P = z1 z2 z3 z4 is PC, x is off P and z1 z2 x z3 z4 is PC."""
    z = _quad(P)
    if len(z) != 4 or x in z or not _is_pc(g, z):
        return False
    return _is_pc(g, (z[0], z[1], x, z[2], z[3]))


def is_absorbing_for_pair(g: EdgeColouredGraph, P, x1: int, x2: int, y1: int, y2: int) -> bool:
    """P is PC of length 3, avoids x1, x2, y1, y2, and z1 z2 x1 x2, y1 y2 z3 z4 are PC."""
    if len({x1, x2, y1, y2}) != 4:
        raise ArgumentError("x1, x2, y1, y2 must be distinct")
    if not g.has_edge(x1, x2) or not g.has_edge(y1, y2):
        raise ArgumentError("x1x2 and y1y2 must be edges")
    z = _quad(P)
    if len(z) != 4 or set(z) & {x1, x2, y1, y2} or not _is_pc(g, z):
        return False
    return _is_pc(g, (z[0], z[1], x1, x2)) and _is_pc(g, (y1, y2, z[2], z[3]))


def splice(g: EdgeColouredGraph, outer: PcWalk, inner: PcWalk) -> PcWalk:
    """z1 z2 x1 ... xl z3 z4 for an outer path absorbing (x1, x2; x_{l-1}, x_l)."""
    z, x = _quad(outer), tuple(inner.vertices)
    if len(x) < 4:
        raise AbsorbMismatch("inner path needs at least 4 vertices")
    if set(z) & set(x):
        raise AbsorbMismatch("outer and inner paths intersect")
    if not _is_pc(g, x):
        raise AbsorbMismatch("inner path is not properly coloured")
    if not is_absorbing_for_pair(g, z, x[0], x[1], x[-2], x[-1]):
        raise AbsorbMismatch("outer path does not absorb the inner end edges")
    return check_pc_path(g, (z[0], z[1]) + x + (z[2], z[3]))


# family

@dataclass(frozen=True)
class AbsorbingFamily:
    """Vertex-disjoint length-3 PC paths with per-vertex absorber lists."""

    members: Tuple[PcWalk, ...]
    gamma: Fraction
    audit: dict
    vertex_index: Dict[int, Tuple[int, ...]] = field(default_factory=dict, compare=False)
    _pair_cache: Dict[tuple, Tuple[int, ...]] = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def vertices(self) -> Set[int]:
        return {v for P in self.members for v in P.vertices}

    def absorbers_for_vertex(self, x: int) -> Tuple[int, ...]:
        return self.vertex_index.get(x, ())

    def absorbers_for_pair(self, g: EdgeColouredGraph, x1: int, x2: int, y1: int, y2: int) -> Tuple[int, ...]:
        key = (x1, x2, y1, y2)
        hit = self._pair_cache.get(key)
        if hit is None:
            hit = tuple(i for i, P in enumerate(self.members) if is_absorbing_for_pair(g, P, x1, x2, y1, y2))
            self._pair_cache[key] = hit
        return hit

    def audit_json(self) -> dict:
        return dict(self.audit)


def _vertex_index(g: EdgeColouredGraph, members: Sequence[PcWalk]) -> Dict[int, Tuple[int, ...]]:
    return {x: tuple(i for i, P in enumerate(members) if is_absorbing_for_vertex(g, P, x)) for x in range(g.n)}


def _sample_member(g: EdgeColouredGraph, rng: XorShift64Star, used: Set[int], tries: int = 50) -> Optional[PcWalk]:
    free = [v for v in range(g.n) if v not in used]
    if len(free) < 4:
        return None
    for _ in range(tries):
        seq = [rng.choice(free)]
        last = None
        while len(seq) < 4:
            opts = [(u, c) for u, c in g.neighbours(seq[-1]) if u not in used and u not in seq and c != last]
            if not opts:
                break
            u, last = rng.choice(opts)
            seq.append(u)
        if len(seq) == 4:
            return check_pc_path(g, seq)
    return None


def _pair_coverage(g: EdgeColouredGraph, members: Sequence[PcWalk], need: int, rng: XorShift64Star,
                   samples: int) -> Fraction:
    """Fraction of sampled ordered disjoint edge pairs with at least `need` absorbers."""
    edges = g.edges()
    if len(edges) < 2 or samples <= 0:
        return Fraction(1)
    hits = total = 0
    for _ in range(samples):
        u1, v1, _ = rng.choice(edges)
        u2, v2, _ = rng.choice(edges)
        if rng.randbelow(2):
            u1, v1 = v1, u1
        if rng.randbelow(2):
            u2, v2 = v2, u2
        if len({u1, v1, u2, v2}) < 4:
            continue
        total += 1
        cnt = sum(1 for P in members if is_absorbing_for_pair(g, P, u1, v1, u2, v2))
        hits += cnt >= need
    return Fraction(hits, total) if total else Fraction(1)


def find_absorbing_family(g: EdgeColouredGraph, gamma, eps=0, seed: int = 0, retry_cap: int = 2000,
                          pair_samples: int = PAIR_SAMPLES, pair_target=Fraction(3, 4)) -> AbsorbingFamily:
    """Seeded randomized greedy family with |F| <= floor(sqrt(gamma) n).

    Members are sampled until every vertex has at least ceil(gamma n)
    absorbers and the sampled fraction of edge pairs with ceil(gamma n)
    absorbers reaches `pair_target`.
    """
    gamma, eps = as_fraction(gamma), as_fraction(eps)
    n = g.n
    if min_colour_degree(g) < (Fraction(1, 2) + eps) * n:
        raise ContractError("colour degree below (1/2 + eps) n")
    budget = math.isqrt(math.floor(gamma * n * n))
    need = math.ceil(gamma * n)
    rng = XorShift64Star(seed)
    members: List[PcWalk] = []
    used: Set[int] = set()
    cover = [0] * n
    attempts = 0
    pair_cov = Fraction(0)

    def audit() -> dict:
        return {"size": len(members), "min_vertex_coverage": min(cover) if n else 0,
                "sampled_pair_coverage": str(pair_cov), "seed": seed}

    while attempts < retry_cap:
        if min(cover) >= need:
            pair_cov = _pair_coverage(g, members, need, rng.fork(len(members)), pair_samples)
            if pair_cov >= pair_target:
                fam = AbsorbingFamily(tuple(members), gamma, audit(), _vertex_index(g, members))
                return fam
        if len(members) >= budget:
            break
        attempts += 1
        P = _sample_member(g, rng, used)
        if P is None:
            continue
        members.append(P)
        used |= set(P.vertices)
        for x in range(n):
            if is_absorbing_for_vertex(g, P, x):
                cover[x] += 1
    raise FamilySearchFailed(audit())


# connectors

def connect(g: EdgeColouredGraph, x: AnchoredVertex, y: AnchoredVertex, len_max: Optional[int] = None,
            eps=None, avoid: Iterable[int] = (), node_budget: int = 2_000_000) -> PcWalk:
    """Shortest-first PC path x -> y whose first colour avoids x's and last colour avoids y's forbidden colour.

    Iterative deepening over (vertex, last colour, visited); a colour-aware
    walk BFS first rules out hopeless depths.
    """
    s, t = x.vertex, y.vertex
    if s == t:
        raise ArgumentError("anchors must be distinct vertices")
    if len_max is None:
        len_max = DEFAULT_LEN_MAX
        if eps is not None and as_fraction(eps) > 0:
            len_max = min(math.ceil(1 / as_fraction(eps) ** 2), DEFAULT_LEN_MAX)
    blocked = set(avoid) - {s, t}
    fx, fy = x.forbidden_colour, y.forbidden_colour
    # shortest PC walk length as a lower bound for paths
    dist = {(s, None): 0}
    dq = deque([(s, None)])
    lower = None
    while dq:
        v, last = dq.popleft()
        d = dist[(v, last)]
        if d >= len_max:
            continue
        for u, c in g.neighbours(v):
            if u in blocked or c == last or (v == s and c == fx):
                continue
            if u == t:
                if c != fy:
                    lower = d + 1 if lower is None else min(lower, d + 1)
                continue
            if u == s or (u, c) in dist:
                continue
            dist[(u, c)] = d + 1
            dq.append((u, c))
    if lower is None:
        raise NoConnector(f"no anchored walk from {s} to {t} within {len_max}")
    nodes = 0
    for depth in range(lower, len_max + 1):
        path = [s]
        on = {s}

        def dfs(v: int, last, left: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > node_budget:
                return False
            for u, c in g.neighbours(v):
                if c == last or (v == s and c == fx) or u in on or u in blocked:
                    continue
                if u == t:
                    if left == 1 and c != fy:
                        path.append(u)
                        return True
                    continue
                if left > 1:
                    path.append(u)
                    on.add(u)
                    if dfs(u, c, left - 1):
                        return True
                    on.discard(u)
                    path.pop()
            return False

        if dfs(s, None, depth):
            walk = check_pc_path(g, path)
            assert walk.colours[0] != fx and walk.colours[-1] != fy
            return walk
        if nodes > node_budget:
            break
    raise NoConnector(f"no PC path from {s} to {t} within {len_max}")


# reachability

def _end_colour_counts(g: EdgeColouredGraph, x: int, y: int, ell: int) -> Dict[Tuple[int, int], int]:
    """Counts of PC x-y paths keyed by (length, colour of the edge at y), lengths 1..ell."""
    out: Dict[Tuple[int, int], int] = {}
    on = [False] * g.n
    on[x] = True

    def rec(v: int, last, depth: int) -> None:
        for u, c in g.neighbours(v):
            if c == last or on[u]:
                continue
            if u == y:
                out[(depth + 1, c)] = out.get((depth + 1, c), 0) + 1
            elif depth + 1 < ell:
                on[u] = True
                rec(u, c, depth + 1)
                on[u] = False

    rec(x, None, 0)
    return out


def reachability_mu(g: EdgeColouredGraph, x: int, y: int, ell: int, excluded_colour: Optional[int] = None,
                    limit: int = 14) -> Fraction:
    """mu_{<= ell}(x; y, C(G) minus excluded_colour) as an exact rational."""
    if x == y:
        raise ArgumentError("x and y must differ")
    if ell < 1:
        raise ArgumentError("ell must be at least 1")
    if ell > limit:
        raise ArgumentError(f"ell above the search limit {limit}")
    total = Fraction(0)
    for (length, c), k in _end_colour_counts(g, x, y, ell).items():
        if c != excluded_colour:
            total += Fraction(k, g.n ** (length - 1))
    return total


@dataclass(frozen=True)
class Reachability:
    kind: str  # STRONG, UNIQUE_COLOUR, WEAK or UNREACHABLE
    colour: Optional[int]
    mu: Fraction


def classify_reachability(g: EdgeColouredGraph, x: int, y: int, ell: int, eta) -> Reachability:
    """Strongly reachable / one dominant end colour / neither, at threshold eta.

    WEAK covers the gap the trichotomy leaves open: reachable at eta but not
    at 2 eta and not strongly.
    """
    eta = as_fraction(eta)
    per: Dict[int, Fraction] = {}
    for (length, c), k in _end_colour_counts(g, x, y, ell).items():
        per[c] = per.get(c, Fraction(0)) + Fraction(k, g.n ** (length - 1))
    total = sum(per.values(), Fraction(0))
    worst = max(per.values(), default=Fraction(0))
    if total - worst >= eta:
        return Reachability("STRONG", None, total)
    if total >= 2 * eta:
        heavy = [c for c, v in per.items() if v >= eta]
        if len(heavy) == 1:
            return Reachability("UNIQUE_COLOUR", heavy[0], total)
    if total >= eta:
        return Reachability("WEAK", None, total)
    return Reachability("UNREACHABLE", None, total)


# absorbing cycle

def build_absorbing_cycle(g: EdgeColouredGraph, gamma, eps, seed: int = 0,
                          len_max: Optional[int] = None, **family_kw) -> Tuple[PcWalk, AbsorbingFamily]:
    """Chain the family P1 Q1 P2 Q2 ... with anchored connectors avoiding used vertices."""
    eps = as_fraction(eps)
    if min_colour_degree(g) < (Fraction(1, 2) + eps) * g.n:
        raise ContractError("colour degree below (1/2 + eps) n")
    fam = find_absorbing_family(g, gamma, eps, seed, **family_kw)
    Ps = fam.members
    k = len(Ps)
    fam_vertices = fam.vertices()
    q_vertices: Set[int] = set()
    seq: List[int] = []
    for j in range(k):
        P, Pn = Ps[j], Ps[(j + 1) % k]
        yj, xn = P.vertices[-1], Pn.vertices[0]
        W = (fam_vertices | q_vertices) - {yj, xn}
        try:
            Q = connect(g, AnchoredVertex(yj, P.colours[-1]), AnchoredVertex(xn, Pn.colours[0]),
                        len_max=len_max, eps=eps, avoid=W)
        except NoConnector as exc:
            raise AssemblyFailed(j) from exc
        q_vertices |= set(Q.vertices[1:-1])
        seq.extend(P.vertices)
        seq.extend(Q.vertices[1:-1])
    return check_pc_cycle(g, seq), fam


def _oriented_cycle_with(seq: List[int], z: Sequence[int]) -> Optional[List[int]]:
    """Rotate/reflect the cycle so that it starts z1 z2 z3 z4; None if z is not a subpath."""
    k = len(seq)
    for cand in (seq, [seq[0]] + seq[:0:-1]):
        i = cand.index(z[0])
        rot = cand[i:] + cand[:i]
        if k >= 4 and rot[:4] == list(z):
            return rot
    return None


def absorb_paths(g: EdgeColouredGraph, C: PcWalk, fam: AbsorbingFamily, paths: Iterable[PcWalk],
                 used: Optional[Set[int]] = None) -> PcWalk:
    """Absorb every path into C via unused family members; `used` is the caller-owned member ledger."""
    used = set() if used is None else used
    paths = list(paths)
    cyc = list(C.vertices)
    on_C = set(cyc)
    extra: Set[int] = set()
    for P in paths:
        vs = set(P.vertices)
        if vs & on_C or vs & extra:
            raise ContractError("paths must be disjoint from C and from each other")
        extra |= vs
    units: List[Tuple[int, ...]] = []
    for P in paths:
        if P.order <= 3:
            units.extend((v,) for v in P.vertices)
        else:
            units.append(tuple(P.vertices))
    # members are disjoint, so absorptions are independent: assign units to members by matching
    k = len(units)
    fits: Dict[Tuple[int, int], Tuple[Tuple[int, ...], Tuple[int, ...]]] = {}
    adj: Dict[int, List[int]] = {}
    for j, unit in enumerate(units):
        adj[j] = []
        for i, M in enumerate(fam.members):
            if i in used:
                continue
            for z in (tuple(M.vertices), tuple(reversed(M.vertices))):
                if len(unit) == 1:
                    ok = [unit] if is_absorbing_for_vertex(g, z, unit[0]) else []
                else:
                    ok = [u for u in (unit, unit[::-1]) if is_absorbing_for_pair(g, z, u[0], u[1], u[-2], u[-1])]
                if ok:
                    fits[(j, i)] = (z, ok[0])
                    adj[j].append(k + i)
                    break
    assignment = {u: w - k for u, w in bipartite_matching_adj(range(k), adj).edges}
    for j, unit in enumerate(units):
        if j not in assignment:
            raise AbsorberExhausted(unit)
        i = assignment[j]
        z, body = fits[(j, i)]
        rot = _oriented_cycle_with(cyc, z)
        if rot is None:
            raise ContractError(f"family member {i} is not a subpath of the cycle")
        cyc = rot[:2] + list(body) + rot[2:]
        used.add(i)
    out = check_pc_cycle(g, cyc)
    if out.vertex_set() != frozenset(on_C | extra):
        raise ContractError("absorbed cycle has the wrong vertex set")
    return out
