"""Graph ingestion, validation, regularity classification and directed-edge indexing."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import (
    DisconnectedError,
    DuplicateEdgeError,
    EmptyInputError,
    GraphError,
    MalformedLineError,
    SelfLoopError,
)

Kind = Literal["regular", "biregular", "neither"]


@dataclass(frozen=True)
class Graph:
    """Finite simple connected graph on vertices ``0..n-1``.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``.  ``labels``
    keeps the vertex names found in the input, for reporting only.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(v) for v in range(self.n)))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: int | None = None,
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        """Build and validate a graph from 0-based undirected edges."""
        edges = [(int(u), int(v)) for u, v in edges]
        if not edges:
            raise EmptyInputError("graph has no edges")
        if n is None:
            n = 1 + max(max(u, v) for u, v in edges)
        neigh: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if v in neigh[u]:
                raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
            neigh[u].add(v)
            neigh[v].add(u)
        g = cls(
            n=n,
            adjacency=tuple(tuple(sorted(s)) for s in neigh),
            labels=tuple(labels) if labels is not None else (),
        )
        _check_connected(g)
        return g

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, nb in enumerate(self.adjacency):
            a[u, list(nb)] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the isomorphic graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(((perm[u], perm[v]) for u, v in self.edges()), n=self.n)

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def _check_connected(g: Graph) -> None:
    comps = _components(g)
    if len(comps) > 1:
        stray = comps[1]
        names = ", ".join(g.labels[v] for v in stray[:8])
        more = " ..." if len(stray) > 8 else ""
        raise DisconnectedError(
            f"graph has {len(comps)} components; vertices {{{names}{more}}} "
            f"are not connected to vertex {g.labels[0]}"
        )


def parse_edge_list(text: str) -> Graph:
    """Parse a whitespace separated edge list.

    Blank lines and ``#`` comments are ignored.  Vertex names are mapped to
    dense ids: numerically sorted when every name is an integer, otherwise in
    order of first appearance.
    """
    pairs: list[tuple[str, str, int]] = []
    seen: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(f"line {lineno}: expected two vertex ids, got {raw.strip()!r}")
        a, b = parts
        if a == b:
            raise SelfLoopError(f"line {lineno}: self-loop at vertex {a}")
        key = frozenset((a, b))
        if key in seen:
            raise DuplicateEdgeError(
                f"line {lineno}: edge {a} {b} duplicates line {seen[key]}"
            )
        seen[key] = lineno
        pairs.append((a, b, lineno))
    if not pairs:
        raise EmptyInputError("edge list contains no edges")

    names: list[str] = []
    known: set[str] = set()
    for a, b, _ in pairs:
        for x in (a, b):
            if x not in known:
                known.add(x)
                names.append(x)
    try:
        names.sort(key=int)
    except ValueError:
        pass
    ids = {name: i for i, name in enumerate(names)}
    return Graph.from_edges(((ids[a], ids[b]) for a, b, _ in pairs), n=len(names), labels=names)


def bipartition(g: Graph) -> list[int] | None:
    """Two-colouring with vertex 0 coloured 0, or None if ``g`` has an odd cycle."""
    color = [-1] * g.n
    color[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if color[v] < 0:
                color[v] = 1 - color[u]
                queue.append(v)
            elif color[v] == color[u]:
                return None
    return color


@dataclass(frozen=True)
class RegularityClass:
    kind: Kind
    q: int | None = None
    q0: int | None = None
    q1: int | None = None
    types: tuple[int, ...] | None = None
    bipartite: bool = False

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "bipartite": self.bipartite}
        if self.kind == "regular":
            d["q"] = self.q
        elif self.kind == "biregular":
            d["q0"] = self.q0
            d["q1"] = self.q1
            d["type0"] = [v for v, t in enumerate(self.types) if t == 0]
            d["type1"] = [v for v, t in enumerate(self.types) if t == 1]
        return d


def classify(g: Graph) -> RegularityClass:
    """Regular (degree q+1, q >= 2), biregular (q1 > q0 >= 1) or neither."""
    deg = g.degrees
    colors = bipartition(g)
    bip = colors is not None
    if len(set(deg)) == 1:
        q = deg[0] - 1
        if q >= 2:
            return RegularityClass("regular", q=q, bipartite=bip)
        return RegularityClass("neither", bipartite=bip)
    if not bip:
        return RegularityClass("neither", bipartite=False)
    side_deg = [{deg[v] for v in range(g.n) if colors[v] == c} for c in (0, 1)]
    if any(len(s) != 1 for s in side_deg):
        return RegularityClass("neither", bipartite=True)
    d0, d1 = side_deg[0].pop(), side_deg[1].pop()
    # type 0 is the side with the smaller degree
    low = 0 if d0 < d1 else 1
    q0, q1 = min(d0, d1) - 1, max(d0, d1) - 1
    if q0 < 1:
        return RegularityClass("neither", bipartite=True)
    types = tuple(0 if c == low else 1 for c in colors)
    return RegularityClass("biregular", q0=q0, q1=q1, types=types, bipartite=True)


@dataclass(frozen=True, eq=False)
class DirectedEdgeIndex:
    """Lexicographic index of directed edges.

    ``edges[i] = (origin, terminus)``; ``reversal[i]`` is the index of the
    reversed edge.  ``oriented`` holds the undirected edges of a biregular
    graph written as (type-0 vertex, type-1 vertex), or None.
    """

    edges: np.ndarray
    reversal: np.ndarray
    lookup: dict
    out_start: np.ndarray
    oriented: np.ndarray | None = None
    oriented_lookup: dict | None = None

    def __len__(self) -> int:
        return len(self.edges)

    def index(self, u: int, v: int) -> int:
        return self.lookup[(u, v)]

    def out_edges(self, x: int) -> range:
        return range(self.out_start[x], self.out_start[x + 1])


def edge_index_from_adjacency(
    adjacency: Sequence[Sequence[int]], types: Sequence[int] | None = None
) -> DirectedEdgeIndex:
    edges = [(u, v) for u in range(len(adjacency)) for v in sorted(adjacency[u])]
    lookup = {e: i for i, e in enumerate(edges)}
    reversal = np.array([lookup[(v, u)] for u, v in edges], dtype=np.int64)
    out_start = np.zeros(len(adjacency) + 1, dtype=np.int64)
    np.cumsum([len(a) for a in adjacency], out=out_start[1:])
    oriented = oriented_lookup = None
    if types is not None:
        pairs = sorted((u, v) for u, v in edges if types[u] == 0 and types[v] == 1)
        oriented = np.array(pairs, dtype=np.int64).reshape(-1, 2)
        oriented_lookup = {e: i for i, e in enumerate(pairs)}
    return DirectedEdgeIndex(
        edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
        reversal=reversal,
        lookup=lookup,
        out_start=out_start,
        oriented=oriented,
        oriented_lookup=oriented_lookup,
    )


def directed_edges(g: Graph) -> DirectedEdgeIndex:
    cls = classify(g)
    return edge_index_from_adjacency(g.adjacency, cls.types if cls.kind == "biregular" else None)


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()], "class": classify(g).to_dict()}
