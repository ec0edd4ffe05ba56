"""Long properly coloured cycles in graphs close to the extremal example.

Pipeline: prune the witness to an eps'-extremal pair, split the leftover
vertices into Y and Z, choose matchings M and M' by the degree case analysis,
grow them into a path system covering Y, contract the paths and close
everything with a Hamilton cycle of the contracted host.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .errors import (ArgumentError, BestEffort, ChromaError, ContractError, ContractionFailure,
                     ExtensionFailure, HallFailure, NotExtremalInput)
from .graph import CYCLE, PATH, EdgeColouredGraph, PcWalk, colour_components, is_critical, is_star, min_colour_degree
from .subroutines import Digraph, Matching, bipartite_matching_adj, bounded_degree_matching, gh_hamilton_cycle
from .verify import (ExtremalWitness, as_fraction, check_delta_extremal, check_eps_extremal, check_pc_cycle,
                     check_pc_path, good_degree)


# helpers

def sqrt_upper(x: Fraction, denom: int = 10 ** 9) -> Fraction:
    """Exact square root when x is a square of a rational, else the least k/denom above it."""
    x = Fraction(x)
    if x < 0:
        raise ArgumentError("negative argument")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    k = math.isqrt(p * denom * denom // q)
    while k * k * q < p * denom * denom:
        k += 1
    return Fraction(k, denom)


def eps_prime(eps) -> Fraction:
    """4 * sqrt(eps), exact for square rationals and rounded up otherwise."""
    return 4 * sqrt_upper(as_fraction(eps))


def _ceil(x) -> int:
    return math.ceil(Fraction(x))


@dataclass(frozen=True)
class PathSystem:
    """Vertex-disjoint properly coloured paths."""

    paths: Tuple[PcWalk, ...]

    def vertices(self) -> Set[int]:
        return {v for p in self.paths for v in p.vertices}

    def endpoints(self) -> List[int]:
        out = []
        for p in self.paths:
            out.append(p.vertices[0])
            if p.order > 1:
                out.append(p.vertices[-1])
        return out

    def __len__(self) -> int:
        return len(self.paths)


# witness refinement

def refine_extremal_pair(g: EdgeColouredGraph, A_star, B_star, delta, eps,
                         colour_map: Optional[Dict[int, int]] = None) -> ExtremalWitness:
    """Drop the vertices of A* with too few good edges; B is kept.

    The first round removes every a with at most |A*| - 1 - eps' n good
    edges inside A*, eps' = 4 sqrt(eps); the good count ranges over A* minus
    a itself, matching the convention of check_eps_extremal. Further rounds repeat the rule inside the
    shrunken A until the pair is eps'-extremal, which the single round does not
    guarantee at small n.
    """
    A_star, B_star = frozenset(A_star), frozenset(B_star)
    if colour_map is None:
        colour_map = dominant_colours(g, A_star, B_star)
    w0 = ExtremalWitness(A_star, B_star, dict(colour_map), delta, eps)
    if not w0.well_formed() or not check_delta_extremal(g, w0):
        raise NotExtremalInput("witness does not satisfy (A1)-(A3)")
    ep = eps_prime(w0.eps)
    n = g.n
    A = set(A_star)
    while True:
        size = len(A)
        drop = {a for a in A if good_degree(g, a, A, colour_map) <= size - 1 - ep * n}
        if not drop:
            break
        A -= drop
        w = ExtremalWitness(frozenset(A), B_star, {a: colour_map[a] for a in A}, w0.delta, ep)
        if check_eps_extremal(g, w):
            break
    return ExtremalWitness(frozenset(A), B_star, {a: colour_map[a] for a in A}, w0.delta, ep)


def dominant_colours(g: EdgeColouredGraph, A, B) -> Dict[int, int]:
    """For each a, its most frequent colour towards B (lowest colour on ties)."""
    out = {}
    for a in sorted(A):
        cnt: Dict[int, int] = {}
        for b, c in g.neighbours(a):
            if b in B:
                cnt[c] = cnt.get(c, 0) + 1
        out[a] = min(cnt, key=lambda c: (-cnt[c], c)) if cnt else -1 - a
    return out


def guess_extremal_witness(g: EdgeColouredGraph, delta, eps) -> Optional[ExtremalWitness]:
    """Cheap structural guess: B = low-degree vertices, A = vertices with a dominant colour into B."""
    delta, eps = as_fraction(delta), as_fraction(eps)
    n = g.n
    B = frozenset(v for v in range(n) if g.degree(v) <= (delta + eps) * n)
    cmap = dominant_colours(g, set(range(n)) - B, B)
    A = {a for a, c in cmap.items()
         if sum(1 for b, cc in g.neighbours(a) if b in B and cc == c) >= len(B) - eps * n}
    seen: Dict[int, int] = {}
    for a in sorted(A):
        seen.setdefault(cmap[a], a)
    A = {a for a in A if seen[cmap[a]] == a}
    w = ExtremalWitness(frozenset(A), B, {a: cmap[a] for a in A}, delta, eps)
    return w if check_delta_extremal(g, w) else None


# Hamilton cycle in an eps-extremal pair with |A| = 2|B|

def hamilton_in_extremal(g: EdgeColouredGraph, w: ExtremalWitness, check: bool = True) -> PcWalk:
    """PC Hamilton cycle x1 b1 y1 x2 b2 y2 ... from two perfect matchings and a directed cycle.

    With check=False the structural preconditions are skipped (used on
    contracted hosts); the output is verified either way.
    """
    A, B, cmap = sorted(w.A), sorted(w.B), w.colour_map
    m = len(B)
    if check:
        if set(A) | set(B) != set(range(g.n)) or len(A) != 2 * m:
            raise ContractError("need V = A u B with |A| = 2|B|")
        if w.eps >= Fraction(1, 36):
            raise ContractError("need eps < 1/36")
        if not check_eps_extremal(g, w):
            raise NotExtremalInput("pair is not eps-extremal")
    if m == 0 or len(A) != 2 * m:
        raise ContractError("need |A| = 2|B| > 0")
    X, Yv = A[:m], A[m:]
    Bset = set(B)

    def own_colour_adj(side):
        return {a: [b for b, c in g.neighbours(a) if b in Bset and c == cmap[a]] for a in side}

    MX = bipartite_matching_adj(X, own_colour_adj(X))
    MY = bipartite_matching_adj(Yv, own_colour_adj(Yv))
    if len(MX) < m or len(MY) < m:
        raise HallFailure(f"perfect matching missing: |M_X|={len(MX)}, |M_Y|={len(MY)}, m={m}")
    bx = {b: x for x, b in MX.edges}
    by = {b: y for y, b in MY.edges}
    triples = [(bx[b], b, by[b]) for b in B]
    arcs = set()
    for i, (_, _, yi) in enumerate(triples):
        for j, (xj, _, _) in enumerate(triples):
            if i == j:
                continue
            c = g.colour(yi, xj)
            if c is not None and c != cmap[yi] and c != cmap[xj]:
                arcs.add((i, j))
    if m == 1:
        order = [0]
        c = g.colour(triples[0][2], triples[0][0])
        if c is None or c in (cmap[triples[0][2]], cmap[triples[0][0]]):
            raise HallFailure("single triple cannot close")
    else:
        order = gh_hamilton_cycle(Digraph(m, frozenset(arcs)))
    seq = [v for i in order for v in triples[i]]
    cyc = check_pc_cycle(g, seq)
    if cyc.vertex_set() != frozenset(A) | frozenset(B):
        raise ContractError("cycle does not span A u B")
    return cyc


# path systems

def _padding_path(g: EdgeColouredGraph, A: Sequence[int], free_B: Sequence[int], p: int,
                  budget: int = 200000, close: bool = False) -> Optional[List[int]]:
    """PC path b a_1 ... a_p b' with a_i in A and b, b' in free_B (DFS, lowest index first).

    With close=True the walk must return to b instead, forming a PC cycle
    b a_1 ... a_p (returned without repeating b).
    """
    Aset, Bset = set(A), set(free_B)
    steps = [0]
    path: List[int] = []

    def dfs(v: int, last: int) -> bool:
        steps[0] += 1
        if steps[0] > budget:
            return False
        inner = len(path) - 1
        for u, c in g.neighbours(v):
            if close and inner == p and u == path[0] and c != last and c != g.colour(path[0], path[1]):
                return True
            if c == last or u in path:
                continue
            if inner == p and u in Bset and not close:
                path.append(u)
                return True
            if inner < p and u in Aset:
                path.append(u)
                if dfs(u, c):
                    return True
                path.pop()
        return False

    for b in sorted(free_B):
        path[:] = [b]
        if dfs(b, -1):
            return list(path)
        if steps[0] > budget:
            break
    return None


def cycle_from_path_system(g: EdgeColouredGraph, w: ExtremalWitness, ps: PathSystem,
                           alpha=0) -> PcWalk:
    """PC cycle on exactly A u B u V(P), by padding, contraction and a Hamilton cycle."""
    A, B, cmap = set(w.A), set(w.B), w.colour_map
    paths = list(ps.paths)
    ell = len(paths)
    used: Set[int] = set()
    for i, P in enumerate(paths):
        check_pc_path(g, P.vertices)
        if used & set(P.vertices):
            raise ContractError("paths are not vertex-disjoint")
        used |= set(P.vertices)
        if P.vertices[0] not in B or P.vertices[-1] not in B:
            raise ContractError(f"path {i} does not end in B")
    if len(used & (A | B)) != 2 * ell:
        raise ContractError("paths must meet A u B exactly in their 2*ell endpoints")
    if 2 * len(B) > len(A) + 2 * ell:
        raise ContractError("need |B| <= |A|/2 + ell")
    if len(B) < as_fraction(alpha) * g.n + ell + 1:
        raise ContractError("need |B| >= alpha n + ell + 1")
    target = frozenset(A | B | used)
    A_work = sorted(A)
    if ell == 0 and len(B) == 1:
        # no second B-vertex: the padding path closes on itself
        loop = _padding_path(g, A_work, sorted(B), len(A_work), close=True)
        if loop is None:
            raise ExtensionFailure(0, "no PC cycle through A and the single B-vertex")
        return check_pc_cycle(g, loop)
    if 2 * len(B) < len(A) + 2 * ell:
        p = len(A) - 2 * (len(B) - ell - 1)
        pad = _padding_path(g, A_work, sorted(B - used), p)
        if pad is None:
            raise ExtensionFailure(0, f"no padding path through {p} vertices of A")
        padw = check_pc_path(g, pad)
        paths.append(padw)
        used |= set(pad)
        A_work = [a for a in A_work if a not in set(pad)]
        ell += 1
    m = len(A_work) // 2
    free_B = sorted(B - used)
    if len(A_work) != 2 * m or len(free_B) + ell != m:
        raise ContractError("size bookkeeping failed after padding")
    # contract each path to a new vertex joined to its common c_a-neighbours
    Aset = set(A_work)
    h_vertices = A_work + free_B
    index = {v: i for i, v in enumerate(h_vertices)}
    k0 = len(h_vertices)
    edges = []
    for u in h_vertices:
        for v, c in g.neighbours(u):
            if v in index and index[u] < index[v]:
                edges.append((index[u], index[v], c))
    for i, P in enumerate(paths):
        bi, bj = P.vertices[0], P.vertices[-1]
        ends = {P.end_colour(0), P.end_colour(-1)}
        Ni = [a for a in A_work
              if g.colour(a, bi) == cmap[a] and g.colour(a, bj) == cmap[a] and cmap[a] not in ends]
        if len(Ni) < 2:
            raise ContractionFailure(i, f"|N_i| = {len(Ni)}")
        for a in Ni:
            edges.append((index[a], k0 + i, cmap[a]))
    H = EdgeColouredGraph(k0 + ell, edges)
    wH = ExtremalWitness(frozenset(index[a] for a in A_work),
                         frozenset([index[b] for b in free_B] + [k0 + i for i in range(ell)]),
                         {index[a]: cmap[a] for a in A_work}, w.delta, w.eps)
    cycH = hamilton_in_extremal(H, wH, check=False)
    # expand
    seq: List[int] = []
    hv = list(cycH.vertices)
    for pos, v in enumerate(hv):
        if v < k0:
            seq.append(h_vertices[v])
            continue
        P = paths[v - k0]
        prev_a = h_vertices[hv[pos - 1]]
        pv = list(P.vertices)
        # orient so that the previous cycle vertex meets the first end
        if g.colour(prev_a, pv[0]) != cmap[prev_a]:
            pv.reverse()
        seq.extend(pv)
    cyc = check_pc_cycle(g, seq)
    if cyc.vertex_set() != target:
        raise ContractError("expanded cycle has the wrong vertex set")
    return cyc


# Y / Z split

@dataclass(frozen=True)
class YZPartition:
    Y: FrozenSet[int]
    Z: FrozenSet[int]
    violations: Tuple[int, ...] = ()


def partition_YZ(g: EdgeColouredGraph, w: ExtremalWitness) -> YZPartition:
    """Y: leftover vertices with many colours into B or many off-c_a colours into A."""
    A, B, cmap = w.A, w.B, w.colour_map
    n, e = g.n, w.eps
    Y, Z = set(), set()
    for v in range(n):
        if v in A or v in B:
            continue
        into_B = len({c for u, c in g.neighbours(v) if u in B})
        off_A = len({c for u, c in g.neighbours(v) if u in A and c != cmap[u]})
        (Y if into_B >= 10 * e * n or off_A >= 10 * e * n else Z).add(v)
    bad = []
    for z in sorted(Z):
        good = sum(1 for a, c in g.neighbours(z) if a in A and c == cmap[a])
        if good < len(A) - 24 * e * n:
            bad.append(z)
    return YZPartition(frozenset(Y), frozenset(Z), tuple(bad))


# matchings to cycle

@dataclass
class ClaimBook:
    """Counts checked after the path system is grown."""

    ell_star: int = 0
    q: int = 0
    a_used: int = 0


def _grow_paths(g: EdgeColouredGraph, w: ExtremalWitness, Y, Z, M: Matching, Mp: Matching):
    """Turn M and M' into a path system covering Y with all ends in B u Z."""
    A, B, cmap = set(w.A), set(w.B), w.colour_map
    BZ = B | set(Z)
    used: Set[int] = set()
    paths: List[List[int]] = []
    for u, v in M.edges:
        paths.append([u, v])
        used |= {u, v}
    for u, v in Mp.edges:
        a, x = (u, v) if u in A else (v, u)
        used |= {a, x}
        b = next((b for b, c in g.neighbours(a) if b in B and b not in used
                  and c == cmap[a] and c != g.colour(a, x)), None)
        if b is None:
            raise ExtensionFailure(0, f"no B-partner for M' edge at {a}")
        used.add(b)
        paths.append([x, a, b])

    def extend_end(path: List[int], at_front: bool, step: int) -> None:
        end = path[0] if at_front else path[-1]
        if len(path) > 1:
            nb = path[1] if at_front else path[-2]
            cprev = g.colour(end, nb)
        else:
            cprev = None
        for b, c in g.neighbours(end):
            if b in B and b not in used and c != cprev:
                used.add(b)
                path.insert(0, b) if at_front else path.append(b)
                return
        for a, c in g.neighbours(end):
            if a not in A or a in used or c == cprev or c == cmap[a]:
                continue
            b = next((b for b, cb in g.neighbours(a) if b in B and b not in used and cb == cmap[a]), None)
            if b is None:
                continue
            used.update((a, b))
            if at_front:
                path[:0] = [b, a]
            else:
                path.extend([a, b])
            return
        raise ExtensionFailure(step, f"cannot extend through {end}")

    Yq = sorted(y for y in Y if y in used)
    rest = sorted(y for y in Y if y not in used)
    step = 0
    for y in Yq:
        step += 1
        path = next(p for p in paths if y in p)
        extend_end(path, path[0] == y, step)
    for y in rest:
        step += 1
        used.add(y)
        path = [y]
        extend_end(path, False, step)
        extend_end(path, True, step)
        paths.append(path)
    walks = tuple(check_pc_path(g, p) for p in paths)
    for p in walks:
        if p.vertices[0] not in BZ or p.vertices[-1] not in BZ:
            raise ExtensionFailure(step, "path end outside B u Z")
    return PathSystem(walks), len(Yq)


def cycle_from_matchings(g: EdgeColouredGraph, w: ExtremalWitness, Y, Z, M: Matching,
                         M_prime: Matching, check_size: bool = True) -> PcWalk:
    """PC cycle of length >= min{n, floor(3|A|/2 + |M| + |M'|/2 + |Y| - q/2)}."""
    A, B, cmap = set(w.A), set(w.B), w.colour_map
    Y, Z = set(Y), set(Z)
    n, e = g.n, w.eps
    if check_size and len(M) + len(M_prime) > 2 * e * n:
        raise ContractError("(i): more than 2 eps n matching edges")
    if M.vertices() & M_prime.vertices():
        raise ContractError("M and M' share a vertex")
    for u, v in M.edges:
        if u in A or v in A or g.colour(u, v) is None:
            raise ContractError("(ii): M must be a matching of G minus A")
    for u, v in M_prime.edges:
        a, x = (u, v) if u in A else (v, u)
        c = g.colour(a, x)
        if a not in A or (x not in B and x not in Z) or c is None or c == cmap[a]:
            raise ContractError("(iii): M' edges join A to B u Z avoiding c_a")
    ps, q = _grow_paths(g, w, Y, Z, M, M_prime)
    ell_star = len(ps)
    V_P = ps.vertices()
    BZ = B | Z
    # bookkeeping from the path-system claim
    if ell_star != len(M) + len(M_prime) + len(Y) - q:
        raise ExtensionFailure(ell_star, "path count mismatch")
    if not Y <= V_P:
        raise ExtensionFailure(ell_star, "Y not covered")
    ends = set(ps.endpoints())
    if len(V_P & BZ) != 2 * ell_star or not (V_P & BZ) <= ends:
        raise ExtensionFailure(ell_star, "B u Z vertices are not exactly the endpoints")
    if len(V_P & A) > len(M_prime) + 2 * len(Y) - q:
        raise ExtensionFailure(ell_star, "too many A vertices used")
    A_star = A - V_P
    size = min(len(B) + len(Z), len(A_star) // 2 + ell_star)
    B_star = set(V_P & BZ)
    for v in sorted(BZ - V_P):
        if len(B_star) >= size:
            break
        B_star.add(v)
    w_star = ExtremalWitness(frozenset(A_star), frozenset(B_star), {a: cmap[a] for a in A_star}, w.delta, 24 * e)
    cyc = cycle_from_path_system(g, w_star, ps)
    bound = min(n, math.floor(Fraction(3 * len(A), 2) + len(M) + Fraction(len(M_prime), 2) + len(Y) - Fraction(q, 2)))
    if cyc.length < bound:
        raise ExtensionFailure(ell_star, f"cycle length {cyc.length} below {bound}")
    return cyc


# driver

@dataclass
class ExtremalResult:
    walk: Optional[PcWalk]
    achieved: int
    target: int
    verdict: str
    steps: List[dict] = field(default_factory=list)

    def trace(self) -> dict:
        return {"steps": self.steps, "achieved": self.achieved, "target": self.target, "verdict": self.verdict}


def _is_star_normalised(g: EdgeColouredGraph) -> bool:
    return all(len(comps) == 1 and is_star(comps[0]) for comps in colour_components(g).values())


def _extend_matching(F_adj: Dict[int, List[int]], M: List[Tuple[int, int]], sources: Sequence[int], size: int,
                     forbidden: Set[int], allowed_partner=None) -> List[Tuple[int, int]]:
    M = list(M)
    used = {v for e in M for v in e} | set(forbidden)
    for s in sources:
        if len(M) >= size:
            break
        if s in used:
            continue
        for u in F_adj.get(s, ()):
            if u in used or (allowed_partner is not None and not allowed_partner(u)):
                continue
            M.append((min(s, u), max(s, u)))
            used |= {s, u}
            break
    return M


def extremal_long_cycle(g: EdgeColouredGraph, delta, eps, witness: Optional[ExtremalWitness] = None,
                        trim: Optional[bool] = None) -> ExtremalResult:
    """Run the extremal pipeline and return the longest verified cycle it builds.

    Both the trimmed variant (|A| cut down to (delta - eps')n, as the proof
    does) and the untrimmed one are tried unless `trim` fixes the choice,
    together with the plain M = M' = {} baseline. The verdict is "TARGET" when
    the cycle reaches min{floor(3 delta n / 2), n} and "BEST_EFFORT" otherwise.
    """
    delta, eps = as_fraction(delta), as_fraction(eps)
    n = g.n
    steps: List[dict] = []
    if not is_critical(g) or not _is_star_normalised(g):
        raise ContractError("graph must be critical and star-normalised")
    if min_colour_degree(g) < delta * n:
        raise ContractError("minimum colour degree below delta n")
    if witness is None:
        witness = guess_extremal_witness(g, delta, eps)
        if witness is None:
            raise NotExtremalInput("no witness supplied and none found")
    w0 = ExtremalWitness(witness.A, witness.B, dict(witness.colour_map), delta, eps)
    if not check_delta_extremal(g, w0):
        raise NotExtremalInput("witness fails (A1)-(A3)")
    target = min(math.floor(3 * delta * n / 2), n)
    w = refine_extremal_pair(g, w0.A, w0.B, delta, eps, w0.colour_map)
    ep = w.eps
    steps.append({"stage": "refine", "A": len(w.A), "B": len(w.B), "eps_prime": str(ep)})
    best: Optional[PcWalk] = None
    variants = [False, True] if trim is None else [trim]
    for trimmed in variants:
        wv = w
        if trimmed:
            keep = max(_ceil((delta - ep) * n), 0)
            if keep < len(w.A):
                A = sorted(w.A)[:keep]
                wv = ExtremalWitness(frozenset(A), w.B, {a: w.colour_map[a] for a in A}, delta, ep)
        for attempt in _case_analysis(g, wv, ep, steps, trimmed):
            wa, Y, Z, M, Mp, label = attempt
            try:
                cyc = cycle_from_matchings(g, wa, Y, Z, M, Mp, check_size=False)
            except ChromaError as exc:
                steps.append({"stage": label, "trimmed": trimmed, "error": type(exc).__name__, "detail": str(exc)})
                continue
            steps.append({"stage": label, "trimmed": trimmed, "length": cyc.length,
                          "M": len(M), "M_prime": len(Mp), "Y": len(Y)})
            if best is None or cyc.length > best.length:
                best = cyc
            if best.length >= target:
                break
        if best is not None and best.length >= target:
            break
    if best is None:
        raise BestEffort(0, None, "no cycle from any case")
    verdict = "TARGET" if best.length >= target else "BEST_EFFORT"
    return ExtremalResult(best, best.length, target, verdict, steps)


def _case_analysis(g: EdgeColouredGraph, w: ExtremalWitness, ep: Fraction, steps: List[dict], trimmed: bool):
    """Yield (witness, Y, Z, M, M', label) candidates, the proof's choice first."""
    n = g.n
    A, B, cmap = set(w.A), set(w.B), w.colour_map
    part = partition_YZ(g, w)
    Y, Z = set(part.Y), set(part.Z)
    steps.append({"stage": "partition", "trimmed": trimmed, "Y": len(Y), "Z": len(Z),
                  "prop_violations": list(part.violations)})
    rest = [v for v in range(n) if v not in A]
    F_adj = {v: [u for u, _ in g.neighbours(v) if u not in A] for v in rest}
    R = [v for v in rest if len(F_adj[v]) <= 10 * ep * n]
    S = [v for v in rest if len(F_adj[v]) > 10 * ep * n]
    MR = list(bounded_degree_matching(g, R).edges)
    p = max(ep * n - len(Y), Fraction(0))
    info = {"stage": "cases", "trimmed": trimmed, "R": len(R), "S": len(S), "M_R": len(MR), "p": str(p)}
    empty = Matching(())
    if len(MR) + len(S) >= ep * n + p / 2:
        info["case"] = "1"
        size = _ceil(ep * n + p / 2)
        M = _extend_matching(F_adj, MR[:size], S, size, set())
        steps.append(info)
        yield w, Y, Z, Matching(tuple(M)), empty, "case1"
    elif len([v for v in S if v in Y]) <= ep * n - Fraction(10, 3) * p:
        info["case"] = "2a"
        size = _ceil(ep * n)
        M = _extend_matching(F_adj, MR, S, size, set(), allowed_partner=lambda u: u not in Y)
        steps.append(info)
        yield w, Y, Z, Matching(tuple(M)), empty, "case2a"
    else:
        info["case"] = "2b"
        BZ = B | Z
        blocked = {v for e in MR for v in e} | set(S)
        colours_A = set(cmap.values())
        Fp_adj = {a: [v for v, c in g.neighbours(a) if v in BZ and c not in colours_A and v not in blocked]
                  for a in sorted(A)}
        e_Fp = sum(len(x) for x in Fp_adj.values())
        deg: Dict[int, int] = {}
        for a, vs in Fp_adj.items():
            deg[a] = deg.get(a, 0) + len(vs)
            for v in vs:
                deg[v] = deg.get(v, 0) + 1
        Delta = max(deg.values(), default=0)
        Mp_full = bipartite_matching_adj(sorted(A), Fp_adj)
        want = _ceil(p)
        info.update({"e_Fprime": e_Fp, "Delta_Fprime": Delta, "M_prime_max": len(Mp_full),
                     "bound_11p_over_2": bool(Delta and Fraction(e_Fp, Delta) >= Fraction(11, 2) * p)})
        Mp = list(Mp_full.edges)[:want]
        size = _ceil(ep * n)
        M = _extend_matching(F_adj, MR, S, size, {v for e in Mp for v in e})
        steps.append(info)
        w2 = ExtremalWitness(w.A, w.B, dict(cmap), w.delta, 2 * ep)
        yield w2, Y, Z, Matching(tuple(M)), Matching(tuple(Mp)), "case2b"
    # fallbacks: shrink the matchings towards the empty baseline
    yield w, Y, Z, Matching(tuple(MR)), empty, "fallback_MR"
    yield w, Y, Z, empty, empty, "fallback_empty"
