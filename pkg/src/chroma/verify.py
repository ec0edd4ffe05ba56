"""Certificate checkers for walks, 1-path-cycles and extremal witnesses.

All thresholds of the form `eps * n` are compared as exact rationals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import ArgumentError, ClauseViolation, FormatError, NotAPath, NotProper, NotSimple
from .graph import CYCLE, PATH, AnchoredVertex, EdgeColouredGraph, PcWalk, host_hash

INF = float("inf")


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


# walks

def _walk_colours(g: EdgeColouredGraph, vertices: Sequence[int], closed: bool) -> Tuple[int, ...]:
    seen = set()
    for v in vertices:
        if not (isinstance(v, int) and 0 <= v < g.n):
            raise ArgumentError(f"vertex {v} out of range")
        if v in seen:
            raise NotSimple(v)
        seen.add(v)
    k = len(vertices)
    colours = []
    for i in range(k - 1):
        c = g.colour(vertices[i], vertices[i + 1])
        if c is None:
            raise NotAPath(i)
        colours.append(c)
    if closed:
        c = g.colour(vertices[-1], vertices[0])
        if c is None:
            raise NotAPath(k - 1)
        colours.append(c)
    for i in range(1, len(colours)):
        if colours[i - 1] == colours[i]:
            raise NotProper(i)
    if closed and colours[-1] == colours[0]:
        raise NotProper(0)
    return tuple(colours)


def check_pc_path(g: EdgeColouredGraph, vertices: Sequence[int]) -> PcWalk:
    """Return the PATH walk if `vertices` is a properly coloured path of g.

    NotProper(i) names the inner vertex position i whose two edges share a colour.
    """
    vertices = tuple(vertices)
    if not vertices:
        raise ArgumentError("a path needs at least one vertex")
    return PcWalk(PATH, vertices, _walk_colours(g, vertices, closed=False))


def check_pc_cycle(g: EdgeColouredGraph, vertices: Sequence[int]) -> PcWalk:
    """Return the CYCLE walk if `vertices` is a properly coloured cycle (wrap pair included)."""
    vertices = tuple(vertices)
    if len(vertices) < 3:
        raise ArgumentError("a cycle needs at least three vertices")
    return PcWalk(CYCLE, vertices, _walk_colours(g, vertices, closed=True))


def recheck(g: EdgeColouredGraph, walk: PcWalk) -> PcWalk:
    """Re-verify a walk from its vertices and confirm the recorded colours.

    The recorded colour sequence is checked for properness first, so an
    edited colour that clashes with a neighbour reports NotProper.
    """
    cols = tuple(walk.colours)
    for i in range(1, len(cols)):
        if cols[i - 1] == cols[i]:
            raise NotProper(i)
    if walk.kind == CYCLE and len(cols) > 2 and cols[-1] == cols[0]:
        raise NotProper(0)
    fresh = check_pc_path(g, walk.vertices) if walk.kind == PATH else check_pc_cycle(g, walk.vertices)
    if fresh.colours != cols:
        bad = next((i for i, (a, b) in enumerate(zip(fresh.colours, cols)) if a != b), min(len(cols), len(fresh.colours)))
        raise NotAPath(bad)
    return fresh


def certificate_json(g: EdgeColouredGraph, walk: PcWalk) -> dict:
    return {
        "kind": walk.kind,
        "vertices": list(walk.vertices),
        "colours": list(walk.colours),
        "host_hash": host_hash(g),
    }


def check_certificate(g: EdgeColouredGraph, cert: dict) -> PcWalk:
    """Verify a certificate dict against its host; mismatched hash is a FormatError."""
    try:
        kind = cert["kind"]
        vertices = [int(v) for v in cert["vertices"]]
        colours = [int(c) for c in cert["colours"]]
        hh = cert["host_hash"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from None
    if hh != host_hash(g):
        raise FormatError("certificate host_hash does not match the graph")
    if kind not in (PATH, CYCLE):
        raise FormatError(f"unknown certificate kind {kind!r}")
    return recheck(g, PcWalk(kind, tuple(vertices), tuple(colours)))


# 1-path-cycles

@dataclass(frozen=True)
class ParamOnePathCycle:
    """An oriented 1-path-cycle with parameters rho-(x; y).

    `path` runs from x.vertex to y.vertex; each cycle is oriented in the order
    its vertices are listed.
    """

    path: Tuple[int, ...]
    cycles: Tuple[Tuple[int, ...], ...]
    x: AnchoredVertex
    y: AnchoredVertex
    rho: Fraction
    host: EdgeColouredGraph = field(compare=False, repr=False)
    spanning: bool = field(default=False, compare=False)

    # orientation helpers
    def _index(self) -> Dict[int, Tuple[int, int]]:
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {}
            for i, v in enumerate(self.path):
                cache[v] = (-1, i)
            for ci, cyc in enumerate(self.cycles):
                for i, v in enumerate(cyc):
                    cache[v] = (ci, i)
            object.__setattr__(self, "_idx", cache)
        return cache

    def components(self) -> List[Tuple[int, ...]]:
        return [self.path] + list(self.cycles)

    def vertex_set(self) -> FrozenSet[int]:
        return frozenset(self._index())

    @property
    def order(self) -> int:
        return len(self._index())

    def __contains__(self, v: int) -> bool:
        return v in self._index()

    def succ(self, v: int) -> Optional[int]:
        ci, i = self._index()[v]
        if ci < 0:
            return self.path[i + 1] if i + 1 < len(self.path) else None
        cyc = self.cycles[ci]
        return cyc[(i + 1) % len(cyc)]

    def pred(self, v: int) -> Optional[int]:
        ci, i = self._index()[v]
        if ci < 0:
            return self.path[i - 1] if i > 0 else None
        cyc = self.cycles[ci]
        return cyc[(i - 1) % len(cyc)]

    def c_plus(self, v: int) -> Optional[int]:
        s = self.succ(v)
        return None if s is None else self.host.colour(v, s)

    def c_minus(self, v: int) -> Optional[int]:
        p = self.pred(v)
        return None if p is None else self.host.colour(v, p)

    def colours_at(self, v: int) -> set:
        return {c for c in (self.c_plus(v), self.c_minus(v)) if c is not None}

    def dist(self, u: int, v: int) -> float:
        """Distance inside H; infinite across components."""
        idx = self._index()
        cu, iu = idx[u]
        cv, iv = idx[v]
        if cu != cv:
            return INF
        d = abs(iu - iv)
        if cu < 0:
            return d
        return min(d, len(self.cycles[cu]) - d)

    def same_component(self, u: int, v: int) -> bool:
        idx = self._index()
        return idx[u][0] == idx[v][0]

    def on_path(self, v: int) -> bool:
        return self._index()[v][0] < 0


def check_one_path_cycle(g: EdgeColouredGraph, components: Sequence[Sequence[int]], rho,
                         x: AnchoredVertex, y: AnchoredVertex) -> ParamOnePathCycle:
    """Validate clauses (a)-(d); components[0] is the path, the rest are cycles."""
    rho = as_fraction(rho)
    if not components:
        raise ClauseViolation("c", "no path component")
    comps = [tuple(c) for c in components]
    path, cycles = comps[0], comps[1:]
    seen = set()
    for comp in comps:
        for v in comp:
            if v in seen:
                raise ClauseViolation("a", f"vertex {v} used twice")
            seen.add(v)
    try:
        check_pc_path(g, path)
        for cyc in cycles:
            check_pc_cycle(g, cyc)
    except (NotAPath, NotProper, NotSimple, ArgumentError) as exc:
        raise ClauseViolation("a", str(exc)) from None
    n = g.n
    for cyc in cycles:
        if len(cyc) < rho * n:
            raise ClauseViolation("b", f"cycle of length {len(cyc)} < rho*n")
    if len(path) - 1 < rho * n:
        raise ClauseViolation("c", f"path length {len(path) - 1} < rho*n")
    if path[0] != x.vertex or path[-1] != y.vertex:
        raise ClauseViolation("c", "path endpoints differ from the anchors")
    if len(path) < 2:
        raise ClauseViolation("d", "path has no edge at its anchors")
    if g.colour(path[0], path[1]) != x.forbidden_colour:
        raise ClauseViolation("d", "colour at x differs from c_x")
    if g.colour(path[-1], path[-2]) != y.forbidden_colour:
        raise ClauseViolation("d", "colour at y differs from c_y")
    return ParamOnePathCycle(path, tuple(cycles), x, y, rho, g, spanning=len(seen) == n)


# extremal witnesses

@dataclass(frozen=True)
class ExtremalWitness:
    A: FrozenSet[int]
    B: FrozenSet[int]
    colour_map: Dict[int, int] = field(hash=False)
    delta: Fraction = Fraction(0)
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        object.__setattr__(self, "B", frozenset(self.B))
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "eps", as_fraction(self.eps))

    def well_formed(self) -> bool:
        if self.A & self.B:
            return False
        if set(self.colour_map) != set(self.A):
            return False
        return len(set(self.colour_map.values())) == len(self.colour_map)

    def with_eps(self, eps) -> "ExtremalWitness":
        return ExtremalWitness(self.A, self.B, dict(self.colour_map), self.delta, eps)

    def to_json(self) -> dict:
        return {
            "A": sorted(self.A),
            "B": sorted(self.B),
            "colour_map": {str(a): c for a, c in sorted(self.colour_map.items())},
            "delta": str(self.delta),
            "eps": str(self.eps),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExtremalWitness":
        return cls(frozenset(d["A"]), frozenset(d["B"]),
                   {int(a): int(c) for a, c in d["colour_map"].items()},
                   Fraction(d["delta"]), Fraction(d["eps"]))


def _count_ca_into(g: EdgeColouredGraph, a: int, targets, ca: int) -> int:
    return sum(1 for w, c in g.neighbours(a) if c == ca and w in targets)


def _count_b_matches(g: EdgeColouredGraph, b: int, A, cmap: Dict[int, int]) -> int:
    return sum(1 for a, c in g.neighbours(b) if a in A and cmap[a] == c)


def extremal_report(g: EdgeColouredGraph, w: ExtremalWitness) -> Dict[str, bool]:
    """Per-clause truth values of (A1)-(A3) for the witness."""
    n, d, e = g.n, w.delta, w.eps
    A, B, cmap = w.A, w.B, w.colour_map
    if not w.well_formed():
        return {"A1": False, "A2": False, "A3": False}
    a1 = len(A) >= (d - e) * n and len(B) >= (1 - d - e) * n
    a2 = all(_count_ca_into(g, a, B, cmap[a]) >= len(B) - e * n for a in A)
    a3 = all(g.degree(b) <= (d + e) * n and _count_b_matches(g, b, A, cmap) >= len(A) - e * n for b in B)
    return {"A1": a1, "A2": a2, "A3": a3}


def check_delta_extremal(g: EdgeColouredGraph, w: ExtremalWitness) -> bool:
    return all(extremal_report(g, w).values())


def good_degree(g: EdgeColouredGraph, a: int, A, cmap: Dict[int, int]) -> int:
    """Number of a' in A with c_a != c(aa') != c_{a'}."""
    ca = cmap[a]
    return sum(1 for b, c in g.neighbours(a) if b in A and c != ca and c != cmap[b])


def eps_extremal_report(g: EdgeColouredGraph, w: ExtremalWitness) -> Dict[str, bool]:
    n, e = g.n, w.eps
    A, B, cmap = w.A, w.B, w.colour_map
    if not w.well_formed():
        return {"E1": False, "E2": False, "E3": False}
    # the good-neighbour count ranges over A minus a itself, hence |A| - 1
    e2 = all(_count_ca_into(g, a, B, cmap[a]) >= len(B) - e * n
             and good_degree(g, a, A, cmap) >= len(A) - 1 - e * n for a in A)
    e3 = all(_count_b_matches(g, b, A, cmap) >= len(A) - e * n for b in B)
    return {"E1": True, "E2": e2, "E3": e3}


def check_eps_extremal(g: EdgeColouredGraph, w: ExtremalWitness) -> bool:
    return all(eps_extremal_report(g, w).values())


def load_certificate(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"certificate is not JSON: {exc}") from None

