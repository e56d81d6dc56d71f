"""Named graphs used by the verification battery and the tests."""
from __future__ import annotations

from itertools import combinations

from .graph import Graph


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(combinations(range(n), 2), n=n)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(((i, a + j) for i in range(a) for j in range(b)), n=a + b)


def petersen() -> Graph:
    # Kneser graph K(5, 2): 2-subsets of {0..4}, adjacent when disjoint
    subsets = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i, j in combinations(range(len(subsets)), 2)
        if not set(subsets[i]) & set(subsets[j])
    ]
    return Graph.from_edges(edges, n=10)


def cycle(n: int) -> Graph:
    return Graph.from_edges(((i, (i + 1) % n) for i in range(n)), n=n)


def circular_ladder(k: int) -> Graph:
    """Prism graph C_k x K_2: outer cycle 0..k-1, inner cycle k..2k-1, rungs i -- i+k."""
    edges = []
    for i in range(k):
        edges.append((i, (i + 1) % k))
        edges.append((k + i, k + (i + 1) % k))
        edges.append((i, k + i))
    return Graph.from_edges(edges, n=2 * k)


def subdivision(g: Graph) -> Graph:
    """Insert a new vertex in the middle of every edge of ``g``."""
    edges = []
    for idx, (u, v) in enumerate(g.edges()):
        mid = g.n + idx
        edges.append((u, mid))
        edges.append((mid, v))
    return Graph.from_edges(edges, n=g.n + g.m)


def builtin_fixtures() -> dict[str, Graph]:
    return {
        "K4": complete_graph(4),
        "Petersen": petersen(),
        "CL16": circular_ladder(16),
        "K23": complete_bipartite(2, 3),
        "SubdivK4": subdivision(complete_graph(4)),
    }
