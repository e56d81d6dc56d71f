from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import petersen_by_pentagram
from lpx.errors import (
    DisconnectedError,
    DuplicateEdgeError,
    EmptyInputError,
    MalformedLineError,
    SelfLoopError,
)
from lpx.fixtures import complete_bipartite, complete_graph, cycle, petersen
from lpx.graph import classify, directed_edges, graph_to_dict, parse_edge_list

K4_TEXT = "0 1\n1 2\n2 0\n0 3\n1 3\n2 3"


def test_parse_k4():
    g = parse_edge_list(K4_TEXT)
    assert (g.n, g.m) == (4, 6)
    assert g.degrees == [3, 3, 3, 3]


def test_parse_petersen_from_pentagram_text():
    text = petersen_by_pentagram().to_edge_list()
    assert len(text.splitlines()) == 15
    g = parse_edge_list(text)
    assert (g.n, g.m) == (10, 15)
    assert set(g.degrees) == {3}


def test_package_petersen_matches_pentagram_construction():
    # same spectrum and girth 5 as the independent construction
    a = np.linalg.eigvalsh(petersen().adjacency_matrix().astype(float))
    b = np.linalg.eigvalsh(petersen_by_pentagram().adjacency_matrix().astype(float))
    assert np.allclose(a, b)
    A = petersen().adjacency_matrix()
    A2 = A @ A
    assert np.all(np.diag(A2) == 3) and np.all(A2[A == 1] == 0)  # no triangles
    A3 = A2 @ A
    assert np.all(np.diag(A3) == 0)


def test_comments_and_blank_lines():
    g = parse_edge_list("# triangle\n\n0 1  # first\n1 2\n\n2 0\n")
    assert g.m == 3


def test_symbolic_labels_keep_first_appearance_order():
    g = parse_edge_list("b a\na c\nc b\n")
    assert g.labels == ("b", "a", "c")


def test_numeric_labels_sorted_numerically():
    g = parse_edge_list("10 2\n2 3\n3 10\n")
    assert g.labels == ("2", "3", "10")


@pytest.mark.parametrize(
    "text, exc, needle",
    [
        ("0 0", SelfLoopError, "line 1"),
        ("0 1\n1 2\n2 1", DuplicateEdgeError, "line 3"),
        ("0 1\n2 3", DisconnectedError, "2"),
        ("# nothing\n\n", EmptyInputError, "no edges"),
        ("0 1 2", MalformedLineError, "line 1"),
    ],
)
def test_parse_errors(text, exc, needle):
    with pytest.raises(exc, match=needle):
        parse_edge_list(text)


def test_duplicate_names_original_line():
    with pytest.raises(DuplicateEdgeError, match="duplicates line 1"):
        parse_edge_list("0 1\n1 2\n1 0\n")


def test_classify_examples():
    assert classify(complete_graph(4)).kind == "regular"
    assert classify(complete_graph(4)).q == 2
    c = classify(complete_bipartite(2, 3))
    assert (c.kind, c.q0, c.q1) == ("biregular", 1, 2)
    # type 0 = the three degree-2 vertices
    assert [v for v, t in enumerate(c.types) if t == 0] == [2, 3, 4]
    assert classify(cycle(6)).kind == "neither"


def test_equal_degree_bipartite_is_regular():
    c = classify(complete_bipartite(3, 3))
    assert c.kind == "regular" and c.q == 2 and c.bipartite


def test_star_is_neither():
    # q0 = 0 is outside the biregular convention
    assert classify(complete_bipartite(1, 3)).kind == "neither"


def test_directed_edges_examples():
    k4 = directed_edges(complete_graph(4))
    assert len(k4) == 12
    for i, (u, v) in enumerate(k4.edges):
        assert tuple(k4.edges[k4.reversal[i]]) == (v, u)
    assert len(directed_edges(petersen())) == 30
    k23 = directed_edges(complete_bipartite(2, 3))
    assert len(k23) == 12
    assert k23.oriented.shape == (6, 2)
    types = classify(complete_bipartite(2, 3)).types
    assert all(types[x] == 0 and types[y] == 1 for x, y in k23.oriented)


def test_directed_edges_lexicographic():
    idx = directed_edges(petersen())
    pairs = [tuple(e) for e in idx.edges]
    assert pairs == sorted(pairs)


def test_graph_dict():
    d = graph_to_dict(complete_graph(4))
    assert d["n"] == 4 and len(d["edges"]) == 6 and d["class"]["kind"] == "regular"


@st.composite
def connected_graphs(draw):
    n = draw(st.integers(3, 12))
    # random spanning tree plus extra edges
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))
    for u, v in extra:
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return n, sorted(edges)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.randoms())
def test_degree_sum_and_reversal(data, rnd):
    n, edges = data
    g = parse_edge_list("".join(f"{u} {v}\n" for u, v in edges))
    assert sum(g.degrees) == 2 * g.m
    idx = directed_edges(g)
    r = idx.reversal
    assert np.all(r[r] == np.arange(len(r)))
    assert np.all(r != np.arange(len(r)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["K4", "Petersen", "CL16", "K23", "SubdivK4"]), st.randoms())
def test_classify_relabel_invariant(name, rnd):
    from lpx.fixtures import builtin_fixtures

    g = builtin_fixtures()[name]
    perm = list(range(g.n))
    rnd.shuffle(perm)
    a, b = classify(g), classify(g.relabel(perm))
    assert (a.kind, a.q, a.q0, a.q1) == (b.kind, b.q, b.q0, b.q1)
