"""Edge-coloured graphs, colour degrees, critical reduction and the `.ecg` format."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .errors import ArgumentError, ContractError, FormatError

Edge = Tuple[int, int, int]

PATH = "PATH"
CYCLE = "CYCLE"


def _key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


class ColourTable:
    """Interns external colour labels as dense ids 0, 1, 2, ... in first-seen order."""

    def __init__(self):
        self._ids: Dict[Hashable, int] = {}
        self.labels: List[Hashable] = []

    def intern(self, label: Hashable) -> int:
        cid = self._ids.get(label)
        if cid is None:
            cid = len(self.labels)
            self._ids[label] = cid
            self.labels.append(label)
        return cid

    def __len__(self) -> int:
        return len(self.labels)


class EdgeColouredGraph:
    """Simple undirected graph with one non-negative integer colour per edge.

    Immutable after construction. Vertices are 0..n-1. The adjacency index
    lists (neighbour, colour) pairs sorted by neighbour.
    """

    __slots__ = ("n", "_colour", "_adj", "_nbrset")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ArgumentError("vertex count must be non-negative")
        self.n = n
        colour: Dict[Tuple[int, int], int] = {}
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ArgumentError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ArgumentError(f"self-loop at {u}")
            if c < 0 or int(c) != c:
                raise ArgumentError(f"colour {c} is not a non-negative integer")
            k = _key(u, v)
            if k in colour:
                raise ArgumentError(f"duplicate edge {k}")
            colour[k] = int(c)
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), c in colour.items():
            adj[u].append((v, c))
            adj[v].append((u, c))
        self._colour = colour
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._nbrset = tuple(frozenset(w for w, _ in a) for a in self._adj)

    @classmethod
    def from_labelled(cls, n: int, edges: Iterable[Tuple[int, int, Hashable]], table: Optional[ColourTable] = None):
        """Build from arbitrary hashable colour labels, interning them."""
        table = table if table is not None else ColourTable()
        return cls(n, [(u, v, table.intern(lab)) for u, v, lab in edges]), table

    # basic queries
    @property
    def m(self) -> int:
        return len(self._colour)

    def colour(self, u: int, v: int) -> Optional[int]:
        return self._colour.get(_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self._colour

    def neighbours(self, v: int) -> Tuple[Tuple[int, int], ...]:
        return self._adj[v]

    def neighbour_set(self, v: int) -> frozenset:
        return self._nbrset[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> List[Edge]:
        return [(u, v, c) for (u, v), c in sorted(self._colour.items())]

    def colours(self) -> List[int]:
        return sorted(set(self._colour.values()))

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def induced(self, keep: Iterable[int]) -> Tuple["EdgeColouredGraph", List[int]]:
        """Induced subgraph relabelled 0..k-1; returns it with the old ids in order."""
        order = sorted(set(keep))
        pos = {v: i for i, v in enumerate(order)}
        sub = [(pos[u], pos[v], c) for (u, v), c in self._colour.items() if u in pos and v in pos]
        return EdgeColouredGraph(len(order), sub), order

    def spanning(self, edges: Iterable[Edge]) -> "EdgeColouredGraph":
        return EdgeColouredGraph(self.n, edges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w, _ in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeColouredGraph) and self.n == other.n and self._colour == other._colour

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self._colour.items()))))

    def __repr__(self) -> str:
        return f"EdgeColouredGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class AnchoredVertex:
    """A vertex paired with the colour its next edge must avoid."""

    vertex: int
    forbidden_colour: Optional[int]


@dataclass(frozen=True)
class PcWalk:
    """A verified properly coloured path or cycle.

    For a PATH, `colours[i]` is the colour of vertices[i]vertices[i+1]; a CYCLE
    additionally has the closing colour last.
    """

    kind: str
    vertices: Tuple[int, ...]
    colours: Tuple[int, ...]

    @property
    def length(self) -> int:
        """Number of edges (equals the vertex count for a cycle)."""
        return len(self.colours)

    @property
    def order(self) -> int:
        return len(self.vertices)

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def end_colour(self, which: int) -> Optional[int]:
        """Colour at the first (which=0) or last (which=-1) vertex of a path."""
        if not self.colours:
            return None
        return self.colours[0] if which == 0 else self.colours[-1]

    def reversed(self) -> "PcWalk":
        if self.kind == PATH:
            return PcWalk(PATH, tuple(reversed(self.vertices)), tuple(reversed(self.colours)))
        vs = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
        cs = tuple(reversed(self.colours))
        return PcWalk(CYCLE, vs, cs)


# colour degree arithmetic

def _check_vertex(g: EdgeColouredGraph, v: int) -> None:
    if not (isinstance(v, int) and 0 <= v < g.n):
        raise ArgumentError(f"vertex {v} out of range for n={g.n}")


def colour_degree(g: EdgeColouredGraph, v: int) -> int:
    _check_vertex(g, v)
    return len({c for _, c in g.neighbours(v)})


def colour_degree_within(g: EdgeColouredGraph, v: int, S: Iterable[int]) -> int:
    """Distinct colours on edges from v into S (v itself is ignored)."""
    _check_vertex(g, v)
    S = set(S)
    for s in S:
        _check_vertex(g, s)
    return len({c for w, c in g.neighbours(v) if w in S})


def min_colour_degree(g: EdgeColouredGraph) -> int:
    if g.n == 0:
        return 0
    return min(colour_degree(g, v) for v in range(g.n))


def colours_at(g: EdgeColouredGraph, v: int) -> set:
    return {c for _, c in g.neighbours(v)}


def anchored_neighbourhood(g: EdgeColouredGraph, x: AnchoredVertex) -> set:
    _check_vertex(g, x.vertex)
    return {w for w, c in g.neighbours(x.vertex) if c != x.forbidden_colour}


# critical reduction and star normalisation

def is_critical(g: EdgeColouredGraph) -> bool:
    """Every edge is the unique edge of its colour at one of its endpoints."""
    count = _colour_counts(g)
    return all(count[(u, c)] == 1 or count[(v, c)] == 1 for u, v, c in g.edges())


def _colour_counts(g: EdgeColouredGraph) -> Dict[Tuple[int, int], int]:
    count: Dict[Tuple[int, int], int] = {}
    for u, v, c in g.edges():
        count[(u, c)] = count.get((u, c), 0) + 1
        count[(v, c)] = count.get((v, c), 0) + 1
    return count


def critical_reduction(g: EdgeColouredGraph) -> EdgeColouredGraph:
    """Delete redundant edges in lexicographic order until the graph is critical."""
    count = _colour_counts(g)
    kept = g.edges()
    changed = True
    while changed:
        changed = False
        nxt = []
        for u, v, c in kept:
            if count[(u, c)] > 1 and count[(v, c)] > 1:
                count[(u, c)] -= 1
                count[(v, c)] -= 1
                changed = True
            else:
                nxt.append((u, v, c))
        kept = nxt
    return EdgeColouredGraph(g.n, kept)


def colour_components(g: EdgeColouredGraph) -> Dict[int, List[List[Edge]]]:
    """Connected components of each colour class, as edge lists ordered by min vertex."""
    by_colour: Dict[int, List[Edge]] = {}
    for e in g.edges():
        by_colour.setdefault(e[2], []).append(e)
    out: Dict[int, List[List[Edge]]] = {}
    for c, es in by_colour.items():
        parent: Dict[int, int] = {}

        def find(a):
            while parent.setdefault(a, a) != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v, _ in es:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: Dict[int, List[Edge]] = {}
        for e in es:
            groups.setdefault(find(e[0]), []).append(e)
        out[c] = [groups[r] for r in sorted(groups)]
    return out


def is_star(edges: Sequence[Edge]) -> bool:
    if len(edges) <= 1:
        return True
    common = {edges[0][0], edges[0][1]}
    for u, v, _ in edges[1:]:
        common &= {u, v}
    return len(common) == 1


def star_normalize(g: EdgeColouredGraph) -> EdgeColouredGraph:
    """Give every monochromatic component its own colour; the first keeps the original."""
    if not is_critical(g):
        raise ContractError("star_normalize requires a critical graph")
    fresh = (max(g.colours()) + 1) if g.m else 0
    new_edges: List[Edge] = []
    comps = colour_components(g)
    for c in sorted(comps):
        for i, comp in enumerate(comps[c]):
            if i == 0:
                new_edges.extend(comp)
            else:
                new_edges.extend((u, v, fresh) for u, v, _ in comp)
                fresh += 1
    return EdgeColouredGraph(g.n, new_edges)


# text format

def serialize(g: EdgeColouredGraph) -> str:
    lines = [f"p ecg {g.n} {g.m}"]
    lines.extend(f"e {u + 1} {v + 1} {c}" for u, v, c in g.edges())
    return "\n".join(lines) + "\n"


def parse(text: str) -> EdgeColouredGraph:
    header = None
    edges: List[Edge] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "ecg":
                raise FormatError(f"line {lineno}: expected 'p ecg <n> <m>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer counts") from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError(f"line {lineno}: negative counts")
            continue
        if len(parts) != 4 or parts[0] != "e":
            raise FormatError(f"line {lineno}: expected 'e <u> <v> <c>'")
        try:
            u, v, c = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field") from None
        if u == v:
            raise FormatError(f"line {lineno}: self-loop")
        if not (1 <= u <= header[0] and 1 <= v <= header[0]) or c < 0:
            raise FormatError(f"line {lineno}: vertex or colour out of range")
        k = _key(u - 1, v - 1)
        if k in seen:
            raise FormatError(f"line {lineno}: duplicate edge")
        seen.add(k)
        edges.append((u - 1, v - 1, c))
    if header is None:
        raise FormatError("missing header line")
    if len(edges) != header[1]:
        raise FormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return EdgeColouredGraph(header[0], edges)


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def host_hash(g: EdgeColouredGraph) -> str:
    """FNV-1a 64 of the canonical serialization, as 16 hex digits."""
    return f"{fnv1a64(serialize(g).encode('ascii')):016x}"

