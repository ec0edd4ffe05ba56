"""Properly coloured 1-path-cycles: growth, switching and witness extraction.

A 1-path-cycle H is kept oriented: the path runs from anchor x to anchor y
and each cycle follows its listed order. A switch adds an edge at x and
drops an edge at its other end, which moves the x-anchor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .errors import (ArgumentError, ClauseViolation, ContractError, DriverExhausted, NoIndex)
from .graph import AnchoredVertex, EdgeColouredGraph, is_critical, min_colour_degree
from .verify import (INF, ExtremalWitness, ParamOnePathCycle, as_fraction, check_delta_extremal,
                     check_one_path_cycle)

X, Y = "X", "Y"
SUCC, PRED = "SUCC", "PRED"
X1_TIER, X2_TIER = "X1", "X2"


# exact comparisons with roots of alpha

def root_at_least(alpha: Fraction, k: int, t) -> bool:
    """alpha^(1/k) >= t, decided exactly."""
    t = Fraction(t)
    return t <= 0 or alpha >= t ** k


def root_upper(alpha: Fraction, k: int, denom: int = 10 ** 9) -> Fraction:
    """Least m/denom with (m/denom)^k >= alpha."""
    lo, hi = 0, denom
    while lo < hi:
        mid = (lo + hi) // 2
        if Fraction(mid, denom) ** k >= alpha:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, denom)


# structure helpers

def _comps(H: ParamOnePathCycle) -> List[Tuple[int, ...]]:
    return [tuple(H.path)] + [tuple(c) for c in H.cycles]


def _param(g: EdgeColouredGraph, path: Sequence[int], cycles: Sequence[Sequence[int]], rho,
           y: Optional[AnchoredVertex] = None) -> ParamOnePathCycle:
    path = list(path)
    if len(path) < 2:
        raise ClauseViolation("d", "path has no edge at its anchors")
    x = AnchoredVertex(path[0], g.colour(path[0], path[1]))
    if y is None:
        y = AnchoredVertex(path[-1], g.colour(path[-1], path[-2]))
    return check_one_path_cycle(g, [path] + [list(c) for c in cycles], rho, x, y)


def reverse_parameters(H: ParamOnePathCycle) -> ParamOnePathCycle:
    """Reverse every orientation and swap the anchors."""
    path = tuple(reversed(H.path))
    cycles = tuple((c[0],) + tuple(reversed(c[1:])) for c in H.cycles)
    return check_one_path_cycle(H.host, [path] + [list(c) for c in cycles], H.rho, H.y, H.x)


def _anchored_outside(g: EdgeColouredGraph, v: int, colour, inH) -> List[int]:
    return [u for u, c in g.neighbours(v) if c != colour and u not in inH]


# growth

def _grow(g: EdgeColouredGraph, path: List[int], cycles: List[List[int]], rho: Fraction):
    """Greedy extension, closing and cycle-merging until nothing applies."""
    n = g.n
    path = list(path)
    cycles = [list(c) for c in cycles]
    inH = set(path).union(*map(set, cycles)) if cycles else set(path)

    def end_colour(p: List[int]):
        return g.colour(p[-1], p[-2]) if len(p) >= 2 else None

    def extend_tail(p: List[int]) -> bool:
        grew = False
        while True:
            c_end = end_colour(p)
            u = next((u for u, c in g.neighbours(p[-1]) if u not in inH and c != c_end), None)
            if u is None:
                return grew
            p.append(u)
            inH.add(u)
            grew = True

    def merge_cycle(p: List[int]) -> bool:
        # join the cycle through an anchored neighbour of the head into the path
        head = p[0]
        c_head = g.colour(p[0], p[1]) if len(p) >= 2 else None
        on_path = set(p)
        for w, c in g.neighbours(head):
            if c == c_head or w in on_path or w not in inH:
                continue
            ci = next(i for i, cyc in enumerate(cycles) if w in cyc)
            cyc = cycles[ci]
            k = cyc.index(w)
            rot = cyc[k:] + cyc[:k]  # w, w+, ..., w-
            c_minus = g.colour(w, rot[-1])
            c_plus = g.colour(w, rot[1])
            if c != c_minus:
                seg = rot[1:] + [w]  # w+ C+ w
            elif c != c_plus:
                seg = list(reversed(rot[1:])) + [w]  # w- C- w
            else:
                continue
            p[:0] = seg
            del cycles[ci]
            return True
        return False

    while True:
        extend_tail(path)
        path.reverse()
        extend_tail(path)
        path.reverse()
        short = len(path) < 2 or len(path) - 1 < rho * n
        if short:
            if merge_cycle(path):
                continue
            path.reverse()
            if merge_cycle(path):
                path.reverse()
                continue
            path.reverse()
            break
        unused = [v for v in range(n) if v not in inH]
        if unused and len(path) >= 3 and len(path) >= rho * n:
            c_close = g.colour(path[0], path[-1])
            if (c_close is not None and c_close != g.colour(path[0], path[1])
                    and c_close != g.colour(path[-1], path[-2])):
                cycles.append(path)
                path = [unused[0]]
                inH.add(unused[0])
                continue
        break
    return path, cycles


def maximal_one_path_cycle(g: EdgeColouredGraph, rho) -> ParamOnePathCycle:
    """Greedy maximal PC 1-path-cycle with cycles of length >= rho n, parameterised."""
    rho = as_fraction(rho)
    if g.n < 2:
        raise ArgumentError("need at least two vertices")
    path, cycles = _grow(g, [0], [], rho)
    if len(path) < 2 and cycles:
        # the leftover vertex has no usable neighbour: open the last cycle instead
        path = cycles.pop()
    try:
        return _param(g, path, cycles, rho)
    except ClauseViolation as exc:
        raise ContractError(f"no parameterised 1-path-cycle: {exc}") from None


# switching

def switch(g: EdgeColouredGraph, H: ParamOnePathCycle, end: str, w: int, drop: str) -> ParamOnePathCycle:
    """H + xw - ww+ (drop=SUCC) or H + xw - ww- (drop=PRED) at the x end; end=Y acts on the reversal."""
    if end == Y:
        return reverse_parameters(switch(g, reverse_parameters(H), X, w, drop))
    if end != X or drop not in (SUCC, PRED):
        raise ArgumentError("end must be X or Y and drop SUCC or PRED")
    x, y = H.x.vertex, H.y.vertex
    n = g.n
    if w not in H:
        raise ClauseViolation("membership", f"{w} is not in H")
    cxw = g.colour(x, w)
    if cxw is None or cxw == H.x.forbidden_colour:
        raise ClauseViolation("neighbour", f"{w} is not an anchored neighbour of x")
    if H.dist(w, x) < H.rho * n + 1 or H.dist(w, y) < H.rho * n + 1:
        raise ClauseViolation("distance", f"{w} is within rho n + 1 of an anchor")
    if drop == SUCC and cxw == H.c_minus(w):
        raise ClauseViolation("colour", "c(xw) equals c-(w)")
    if drop == PRED and cxw == H.c_plus(w):
        raise ClauseViolation("colour", "c(xw) equals c+(w)")
    path = list(H.path)
    cycles = [list(c) for c in H.cycles]
    if H.on_path(w):
        i = path.index(w)
        if drop == SUCC:
            new_cycles = cycles + [path[:i + 1]]
            new_path = path[i + 1:]
        else:
            new_cycles = cycles
            new_path = path[i - 1::-1] + path[i:]
    else:
        ci = next(k for k, c in enumerate(cycles) if w in c)
        cyc = cycles.pop(ci)
        k = cyc.index(w)
        rot = cyc[k:] + cyc[:k]
        seg = rot[1:] + [w] if drop == SUCC else list(reversed(rot[1:])) + [w]
        new_path = seg + path
        new_cycles = cycles
    return _param(g, new_path, new_cycles, H.rho, H.y)


def _rewire(g: EdgeColouredGraph, H: ParamOnePathCycle, add: Sequence[Tuple[int, int]],
            remove: Sequence[Tuple[int, int]], new_x: int) -> Optional[ParamOnePathCycle]:
    """Apply edge additions/removals and re-parameterise with the path from new_x to y, or None."""
    edges: Set[FrozenSet[int]] = set()
    succ: Dict[int, int] = {}
    for comp, closed in [(H.path, False)] + [(c, True) for c in H.cycles]:
        k = len(comp)
        for i in range(k if closed else k - 1):
            u, v = comp[i], comp[(i + 1) % k]
            edges.add(frozenset((u, v)))
            succ[u] = v
    for u, v in remove:
        e = frozenset((u, v))
        if e not in edges:
            return None
        edges.discard(e)
    for u, v in add:
        e = frozenset((u, v))
        if u == v or e in edges or not g.has_edge(u, v):
            return None
        edges.add(e)
    adj: Dict[int, List[int]] = {v: [] for v in H.vertex_set()}
    for e in edges:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    if any(len(a) > 2 for a in adj.values()) or len(adj[new_x]) != 1:
        return None
    path = [new_x]
    prev = None
    while True:
        nxt = [u for u in adj[path[-1]] if u != prev]
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
    if path[-1] != H.y.vertex:
        return None
    seen = set(path)
    original = {frozenset(zip(c, c[1:] + c[:1])): c for c in H.cycles}
    cycles = []
    for s in sorted(adj):
        if s in seen:
            continue
        if len(adj[s]) != 2:
            return None
        cyc = [s]
        prev = None
        seen.add(s)
        while True:
            nxt = [u for u in adj[cyc[-1]] if u != prev and (u not in seen or u == s)]
            u = nxt[0]
            if u == s:
                break
            prev = cyc[-1]
            cyc.append(u)
            seen.add(u)
        kept = next((c for c in H.cycles if set(c) == set(cyc) and
                     {frozenset(p) for p in zip(c, c[1:] + c[:1])} == {frozenset(p) for p in zip(cyc, cyc[1:] + cyc[:1])}),
                    None)
        if kept is not None:
            cycles.append(tuple(kept))
            continue
        fwd = sum(1 for a, b in zip(cyc, cyc[1:] + cyc[:1]) if succ.get(a) == b)
        bwd = sum(1 for a, b in zip(cyc, cyc[1:] + cyc[:1]) if succ.get(b) == a)
        if bwd > fwd:
            cyc = [cyc[0]] + list(reversed(cyc[1:]))
        cycles.append(tuple(cyc))
    try:
        return _param(g, path, cycles, H.rho, H.y)
    except ClauseViolation:
        return None


def w_of(H: ParamOnePathCycle, z: int, c_z) -> Optional[int]:
    """z- when c_z = c+(z), z+ when c_z = c-(z)."""
    if c_z == H.c_plus(z):
        return H.pred(z)
    if c_z == H.c_minus(z):
        return H.succ(z)
    return None


@dataclass(frozen=True)
class SwitchEntry:
    z: int
    c_z: int
    w_z: int
    tier: str
    witnesses: Tuple[Tuple[int, int], ...] = ()
    result: Optional[ParamOnePathCycle] = field(default=None, compare=False, repr=False)

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.z, self.c_z)


def compute_X1(g: EdgeColouredGraph, H: ParamOnePathCycle) -> List[SwitchEntry]:
    """Pairs (z, c_z) reachable by one switch at x, each confirmed by executing it."""
    x, y = H.x.vertex, H.y.vertex
    lim = 2 * H.rho * g.n
    out = []
    for comp in _comps(H):
        for z in comp:
            if z in (x, y):
                continue
            for c_z in sorted(H.colours_at(z)):
                w = w_of(H, z, c_z)
                if w is None or w == x or not g.has_edge(x, w):
                    continue
                if H.dist(w, x) < lim or H.dist(w, y) < lim:
                    continue
                R = _rewire(g, H, [(x, w)], [(w, z)], z)
                if R is not None and R.x.forbidden_colour == c_z:
                    out.append(SwitchEntry(z, c_z, w, X1_TIER, (), R))
    return out


def compute_X2(g: EdgeColouredGraph, H: ParamOnePathCycle, X1: Sequence[SwitchEntry],
               full_witnesses: bool = False) -> List[SwitchEntry]:
    """Pairs (z, c_z) with at least 10 rho n X1-witnesses z' making the double switch valid.

    Witness lists stop at the threshold unless `full_witnesses` is set.
    """
    x, y = H.x.vertex, H.y.vertex
    n = g.n
    lim = 2 * H.rho * n
    need = max(1, math.ceil(10 * H.rho * n))
    out = []
    for comp in _comps(H):
        for z in comp:
            if z in (x, y) or H.dist(z, x) < lim or H.dist(z, y) < lim:
                continue
            for c_z in sorted(H.colours_at(z)):
                wz = w_of(H, z, c_z)
                if wz is None:
                    continue
                wits = []
                last = None
                for e in X1:
                    zp, wzp = e.z, e.w_z
                    if zp == z or H.dist(zp, z) < lim or not g.has_edge(zp, wz):
                        continue
                    R = _rewire(g, H, [(x, wzp), (zp, wz)], [(z, wz), (zp, wzp)], z)
                    if R is not None and R.x.forbidden_colour == c_z:
                        wits.append(e.pair)
                        last = R
                        if len(wits) >= need and not full_witnesses:
                            break
                if wits and len(wits) >= 10 * H.rho * n:
                    out.append(SwitchEntry(z, c_z, wz, X2_TIER, tuple(wits), last))
    return out


def compute_Y1(g: EdgeColouredGraph, H: ParamOnePathCycle) -> List[SwitchEntry]:
    return compute_X1(g, reverse_parameters(H))


# witness extraction

@dataclass
class Extraction:
    W_star: FrozenSet[int]
    Z_star: FrozenSet[int]
    colours: Dict[int, int]
    audit: dict
    ok: bool

    def witness(self, delta, eps) -> ExtremalWitness:
        return ExtremalWitness(self.W_star, self.Z_star, {w: self.colours[w] for w in self.W_star}, delta, eps)


def extract_extremal_witness(g: EdgeColouredGraph, H: ParamOnePathCycle, alpha, delta=None,
                             X1: Optional[Sequence[SwitchEntry]] = None) -> Extraction:
    """Build W*, Z* from the X1 structure and audit the three output clauses."""
    alpha = as_fraction(alpha)
    n = g.n
    if delta is None:
        delta = Fraction(min_colour_degree(g) - 1, n)
    delta = as_fraction(delta)
    rho = H.rho
    lim = 2 * rho * n
    x, y = H.x.vertex, H.y.vertex
    if X1 is None:
        X1 = compute_X1(g, H)
    star_ok: Dict[int, List[int]] = {}
    for e in X1:
        if H.dist(e.z, x) >= lim and H.dist(e.z, y) >= lim and g.colour(e.z, e.w_z) == g.colour(x, e.w_z):
            star_ok.setdefault(e.z, []).append(e.c_z)
    Z = set(star_ok)
    Zp = {z for z, cs in star_ok.items() if len(set(cs)) == 2}
    x1_colours: Dict[int, Set[int]] = {}
    for e in X1:
        x1_colours.setdefault(e.z, set()).add(e.c_z)
    indeg: Dict[int, int] = {v: 0 for v in H.vertex_set()}
    for z in Z:
        for w, c in g.neighbours(z):
            if w not in H or w == z:
                continue
            if not any(c != cz for cz in x1_colours.get(z, ())):
                continue
            if H.dist(w, x) < lim or H.dist(w, y) < lim or H.dist(w, z) < lim:
                continue
            indeg[w] += 1
    W = {w for w, d in indeg.items() if d >= 20 * rho * n}
    # in-degree >= (1 - 2 sqrt(alpha)) |Z|  <=>  sqrt(alpha) >= (|Z| - d) / (2|Z|)
    Wp = {w for w, d in indeg.items() if Z and root_at_least(alpha, 2, Fraction(len(Z) - d, 2 * len(Z)))}
    colours: Dict[int, int] = {}
    W_star = set()
    for w in sorted(Wp):
        # off-colour edges are counted towards Z only; the rest of N(w) may be rainbow
        cnt: Dict[int, int] = {}
        for z, c in g.neighbours(w):
            if z in Z:
                cnt[c] = cnt.get(c, 0) + 1
        if not cnt:
            continue
        c_star = min(cnt, key=lambda c: (-cnt[c], c))
        if sum(cnt.values()) - cnt[c_star] <= 10 * rho * n:
            W_star.add(w)
            colours[w] = c_star
    Z_star = set()
    for z in sorted(Z):
        if z in W_star:
            continue
        # d(z) <= (delta + 4 alpha^(1/4)) n
        if not root_at_least(alpha, 4, Fraction(g.degree(z), n * 4) - delta / 4):
            continue
        good = sum(1 for w, c in g.neighbours(z) if w in W_star and c == colours[w])
        if root_at_least(alpha, 4, (delta - Fraction(good, n)) / 6):
            Z_star.add(z)
    audit = {"X1": len(X1), "Z": len(Z), "Z_prime": len(Zp), "W": len(W), "W_prime": len(Wp),
             "W_star": len(W_star), "Z_star": len(Z_star), "alpha": str(alpha), "delta": str(delta)}
    # clause (i)
    c1 = (root_at_least(alpha, 2, (delta - Fraction(len(W_star), n)) / 7)
          and root_at_least(alpha, 4, (2 * delta - 1 - Fraction(len(Z_star), n)) / 3))
    # clause (ii)
    distinct = len(set(colours[w] for w in W_star)) == len(W_star)
    c2 = distinct
    for w in W_star:
        hits = sum(1 for z, c in g.neighbours(w) if z in Z_star and c == colours[w])
        if not root_at_least(alpha, 2, Fraction(len(Z_star) - hits, 3 * n)):
            c2 = False
            break
    c3 = True
    for z in Z_star:
        good = sum(1 for w, c in g.neighbours(z) if w in W_star and c == colours[w])
        if not (root_at_least(alpha, 4, Fraction(g.degree(z), 4 * n) - delta / 4)
                and root_at_least(alpha, 4, (delta - Fraction(good, n)) / 6)):
            c3 = False
            break
    disjoint = not (W_star & Z_star)
    nonempty = bool(W_star) and bool(Z_star)
    audit.update({"clause_i": c1, "clause_ii": c2, "clause_iii": c3, "disjoint": disjoint,
                  "distinct_colours": distinct, "nonempty": nonempty})
    ok = c1 and c2 and c3 and disjoint and nonempty
    return Extraction(frozenset(W_star), frozenset(Z_star), {w: colours[w] for w in W_star}, audit, ok)


# interval index

def s_phi(delta, phi, cap: int = 64) -> int:
    """Index s with delta in I_s(phi): the number of steps p -> (p - phi)/(3/2 - p) needed to reach I_0."""
    delta, phi = as_fraction(delta), as_fraction(phi)
    if not (0 < phi < Fraction(1, 6)):
        raise ArgumentError("need 0 < phi < 1/6")
    if not (Fraction(1, 2) < delta < 1):
        raise ArgumentError("need 1/2 < delta < 1")
    low = Fraction(2, 3) - phi
    p = delta
    for s in range(cap + 1):
        if not (0 <= p < 1):
            break
        if p >= low:
            return s
        p = (p - phi) / (Fraction(3, 2) - p)
    raise NoIndex(f"delta = {delta} does not reach I_0 within {cap} steps at phi = {phi}")


# driver

@dataclass
class DriverResult:
    kind: str  # STRUCTURE or WITNESS
    structure: Optional[ParamOnePathCycle]
    witness: Optional[ExtremalWitness]
    achieved: int
    target: int
    verdict: str
    steps: List[dict] = field(default_factory=list)

    def trace(self) -> dict:
        return {"steps": self.steps, "achieved": self.achieved, "target": self.target, "verdict": self.verdict}


def _try_gain(g: EdgeColouredGraph, H: ParamOnePathCycle, base: int) -> Optional[ParamOnePathCycle]:
    """Extend or close-and-restart H; return the grown structure if it beats `base` vertices."""
    inH = H.vertex_set()
    x, y = H.x, H.y
    opening = _anchored_outside(g, x.vertex, x.forbidden_colour, inH) or \
        _anchored_outside(g, y.vertex, y.forbidden_colour, inH)
    c_close = g.colour(x.vertex, y.vertex)
    closable = (len(inH) < g.n and len(H.path) >= 3 and c_close is not None
                and c_close not in (x.forbidden_colour, y.forbidden_colour))
    if not opening and not closable:
        return None
    path, cycles = list(H.path), [list(c) for c in H.cycles]
    if not opening:
        cycles.append(path)
        path = [min(v for v in range(g.n) if v not in inH)]
    path, cycles = _grow(g, path, cycles, H.rho)
    try:
        R = _param(g, path, cycles, H.rho)
    except ClauseViolation:
        return None
    return R if R.order > base else None


def _improve(g: EdgeColouredGraph, H: ParamOnePathCycle, use_x2: bool = True) -> Optional[Tuple[ParamOnePathCycle, str]]:
    """One lookahead level over X1 and X2 at both ends."""
    base = H.order
    R = _try_gain(g, H, base)
    if R is not None:
        return R, "direct"
    for side in (X, Y):
        Hs = H if side == X else reverse_parameters(H)
        X1 = compute_X1(g, Hs)
        for e in X1:
            R = _try_gain(g, e.result, base)
            if R is not None:
                return R, f"{side}1"
        if use_x2:
            for e in compute_X2(g, Hs, X1):
                R = _try_gain(g, e.result, base)
                if R is not None:
                    return R, f"{side}2"
    return None


def long_one_path_cycle(g: EdgeColouredGraph, delta, beta, eps, alpha0=Fraction(1, 1000), phi=Fraction(1, 100),
                        use_x2: bool = True, _depth: int = 0, _max_depth: Optional[int] = None) -> DriverResult:
    """Grow a 1-path-cycle to ceil((3 delta + beta) n / 2) vertices or return an extremal witness.

    Stalls trigger witness extraction with alpha_s = alpha0 / 4^s; an audited
    pair is accepted when it is (delta, 4^s eps)-extremal, s = s_phi(delta).
    Otherwise the peel-and-recurse step removes Z1 and the high F-degree
    vertices, recurses on the rest and lifts the result.
    """
    delta, beta, eps = as_fraction(delta), as_fraction(beta), as_fraction(eps)
    alpha0, phi = as_fraction(alpha0), as_fraction(phi)
    n = g.n
    if not is_critical(g):
        raise ContractError("graph must be critical")
    if min_colour_degree(g) < delta * n + 1:
        raise ContractError("minimum colour degree below delta n + 1")
    rho = beta / 100
    target = min(n, math.ceil((3 * delta + beta) * n / 2))
    steps: List[dict] = []
    H = maximal_one_path_cycle(g, rho)
    steps.append({"op": "grow", "order": H.order, "depth": _depth})
    while H.order < target:
        got = _improve(g, H, use_x2)
        if got is None:
            break
        H, how = got
        steps.append({"op": "switch", "via": how, "order": H.order, "depth": _depth})
    if H.order >= target:
        return DriverResult("STRUCTURE", H, None, H.order, target, "TARGET", steps)
    alpha = alpha0 / 4 ** _depth
    ext = extract_extremal_witness(g, H, alpha, delta)
    steps.append({"op": "extract", "depth": _depth, **ext.audit, "ok": ext.ok})
    try:
        s_star = s_phi(delta, phi)
    except (NoIndex, ArgumentError) as exc:
        steps.append({"op": "s_phi", "error": str(exc)})
        raise DriverExhausted(H, f"stalled at {H.order}/{target}; no interval index") from None
    if _max_depth is None:
        _max_depth = s_star
    if ext.ok:
        w = ext.witness(delta, 4 ** s_star * eps)
        if check_delta_extremal(g, w):
            steps.append({"op": "witness", "A": len(w.A), "B": len(w.B), "eps": str(w.eps)})
            return DriverResult("WITNESS", H, w, H.order, target, "WITNESS", steps)
        if s_star >= 1 and _depth < _max_depth:
            res = _peel_and_recurse(g, H, ext, delta, beta, eps, alpha, alpha0, phi, s_star, use_x2,
                                    _depth, _max_depth, target, steps)
            if res is not None:
                return res
    raise DriverExhausted(H, f"stalled at {H.order}/{target} without a witness")


def _peel_and_recurse(g, H, ext: Extraction, delta, beta, eps, alpha, alpha0, phi, s_star, use_x2,
                      depth, max_depth, target, steps) -> Optional[DriverResult]:
    n = g.n
    a8 = root_upper(alpha, 8)
    W_star, Z_star, col = ext.W_star, ext.Z_star, ext.colours
    dF: Dict[int, int] = {}
    for z in Z_star:
        for v, c in g.neighbours(z):
            if v not in W_star or c != col[v]:
                dF[z] = dF.get(z, 0) + 1
                dF[v] = dF.get(v, 0) + 1
    V_F = {v for v, d in dF.items() if d >= 5 * a8 * n}
    case1 = delta < Fraction(3) * (1 - 15 * a8) / (5 * (1 - 10 * a8)) if a8 < Fraction(1, 10) else False
    if case1:
        size = (delta - Fraction(1, 2)) * n - len(V_F)
    else:
        size = (1 - (3 * delta + alpha / 2) / 2) * n - len(V_F)
    pool = sorted(Z_star - V_F)
    k = max(0, min(len(pool), math.ceil(size)))
    Z1 = set(pool[:k])
    keep = [v for v in range(n) if v not in Z1 and v not in V_F]
    sub, order = g.induced(keep)
    n2 = sub.n
    delta2 = (delta - 10 * a8) / (Fraction(3, 2) - delta)
    info = {"op": "peel", "case": 1 if case1 else 2, "Z1": len(Z1), "V_F": len(V_F), "n_sub": n2,
            "delta_sub": str(delta2), "depth": depth}
    steps.append(info)
    if n2 < 2 or not (Fraction(1, 2) < delta2 < 1) or min_colour_degree(sub) < delta2 * n2 + 1:
        info["skipped"] = "subgraph fails the colour-degree hypothesis"
        return None
    try:
        r = long_one_path_cycle(sub, delta2, beta, eps, alpha0, phi, use_x2, depth + 1, max_depth)
    except (DriverExhausted, ContractError) as exc:
        info["sub_error"] = type(exc).__name__
        return None
    steps.extend(r.steps)
    if r.kind == "WITNESS":
        A = frozenset(order[a] for a in r.witness.A) & W_star
        B = frozenset(order[b] for b in r.witness.B) | Z1
        cmap = {order[a]: c for a, c in r.witness.colour_map.items() if order[a] in A}
        w = ExtremalWitness(A, B, cmap, delta, 4 ** s_star * eps)
        if check_delta_extremal(g, w):
            steps.append({"op": "lift", "A": len(A), "B": len(B)})
            return DriverResult("WITNESS", H, w, H.order, target, "WITNESS", steps)
        steps.append({"op": "lift", "failed": True})
        return None
    S = r.structure
    comps = [[order[v] for v in S.path]] + [[order[v] for v in c] for c in S.cycles]
    try:
        lifted = _param(g, comps[0], comps[1:], S.rho * n2 / n)
    except ClauseViolation:
        return None
    if lifted.order >= target:
        return DriverResult("STRUCTURE", lifted, None, lifted.order, target, "TARGET", steps)
    return None
