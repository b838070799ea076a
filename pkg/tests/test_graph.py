from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from crux_subdiv import Graph, GraphError, ParseError, average_degree, generate, parse_graph, serialize_graph
from crux_subdiv.generators import blowup, gnp
from crux_subdiv.graph import (
    add_edge,
    bfs_distances,
    components,
    disjoint_union,
    edge_boundary,
    external_neighborhood,
    induced_edge_count,
    is_path,
)

K4 = {"kind": "complete", "n": 4}
C5 = {"kind": "cycle", "n": 5}


@pytest.mark.parametrize(
    "spec, d",
    [(K4, 3), (C5, 2), ({"kind": "petersen"}, 3), ({"kind": "star", "leaves": 3}, Fraction(3, 2))],
)
def test_average_degree_values(spec, d):
    got = average_degree(generate(spec))
    assert isinstance(got, Fraction)
    assert got == d


def test_average_degree_empty_graph():
    with pytest.raises(GraphError, match="empty graph"):
        average_degree(Graph(0))


def test_hypercube_shape():
    g = generate({"kind": "hypercube", "dim": 3})
    assert (g.n, g.m) == (8, 12)
    assert set(g.degrees.tolist()) == {3}


def test_blowup_petersen():
    g = generate({"kind": "blowup", "base": {"kind": "petersen"}, "s": 5})
    assert g.n == 50
    assert set(g.degrees.tolist()) == {15}


def test_union_of_bipartite():
    g = generate({"kind": "disjoint_union", "parts": [{"kind": "complete_bipartite", "a": 5, "b": 5}] * 2})
    assert g.n == 20 and average_degree(g) == 5
    assert len(components(g)) == 2


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "gnp", "n": 5, "p": 1.5},
        {"kind": "cycle", "n": 2},
        {"kind": "complete", "n": 0},
        {"kind": "blowup", "base": K4, "s": 0},
        {"kind": "unknown"},
        {"n": 4},
        {"kind": "disjoint_union", "parts": []},
    ],
)
def test_generate_rejects_bad_specs(spec):
    with pytest.raises(GraphError):
        generate(spec)


def test_generate_accepts_json_text():
    assert generate('{"kind": "complete", "n": 4}') == generate(K4)


def test_graph_rejects_loops_and_range():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])


def test_external_neighborhood_examples():
    assert external_neighborhood(generate(K4), {0}) == {1, 2, 3}
    assert external_neighborhood(generate(C5), {0, 1}) == {2, 4}
    q3 = generate({"kind": "hypercube", "dim": 3})
    assert external_neighborhood(q3, range(8)) == frozenset()
    with pytest.raises(GraphError):
        external_neighborhood(q3, {8})


def test_edge_boundary_examples():
    assert edge_boundary(generate({"kind": "complete", "n": 10}), {0, 1, 2}) == 21
    assert edge_boundary(generate(C5), {0, 1}) == 2
    assert edge_boundary(generate({"kind": "disjoint_union", "parts": [K4, K4]}), {0, 1, 2, 3}) == 0


def test_parse_examples():
    g = parse_graph("3 2\n0 1\n1 2")
    assert g == generate({"kind": "path", "n": 3})
    assert serialize_graph(generate({"kind": "complete", "n": 3})) == "3 3\n0 1\n0 2\n1 2"


@pytest.mark.parametrize(
    "text, kind",
    [
        ("2 1\n0 0", "self-loop"),
        ("2 1\n0 2", "out-of-range"),
        ("3 2\n0 1\n0 1", "duplicate-edge"),
        ("3 1\n2 1", "reversed-edge"),
        ("3 1\n0 x", "malformed"),
        ("3 2\n0 1", "malformed"),
        ("", "malformed"),
        ("three 1\n0 1", "malformed"),
    ],
)
def test_parse_errors_are_distinct(text, kind):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.kind == kind


@settings(max_examples=100)
@given(graphs(max_n=50))
def test_parse_serialize_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=60)
@given(graphs(max_n=12))
def test_graph_invariants(g):
    for u in range(g.n):
        assert u not in g.adj(u)
        for v in g.adj(u):
            assert u in g.adj(v)
    assert sum(g.degrees.tolist()) == 2 * g.m
    # CSR and set views agree
    for u in range(g.n):
        assert g.neighbors(u).tolist() == sorted(g.adj(u))


@settings(max_examples=20)
@given(graphs(max_n=8), st.integers(1, 4))
def test_blowup_counts(g, s):
    b = blowup(g, s)
    assert b.n == s * g.n and b.m == s * s * g.m
    if g.n:
        assert average_degree(b) == s * average_degree(g)


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5])
def test_gnp_reproducible(seed):
    a, b = gnp(30, 0.3, seed), gnp(30, 0.3, seed)
    assert list(a.edges()) == list(b.edges())
    assert gnp(30, 0.3, seed) != gnp(30, 0.3, seed + 1)


def test_gnp_extremes():
    assert gnp(6, 0.0, 3).m == 0
    assert gnp(6, 1.0, 3).m == 15


def test_induced_ids_and_restrict():
    g = generate({"kind": "cycle", "n": 6})
    sub = g.induced([5, 0, 1, 3])
    assert sub.ids == (0, 1, 3, 5)
    assert sub.graph.m == 2  # 0-1 and 5-0
    inner = sub.restrict([0, 3])
    assert inner.ids == (0, 5) and inner.graph.m == 1


def test_is_path_and_counts():
    g = generate({"kind": "cycle", "n": 6})
    assert is_path(g, [0, 1, 2])
    assert not is_path(g, [0, 2])
    assert not is_path(g, [0, 1, 0])
    assert induced_edge_count(g, [0, 1, 2, 4]) == 2


def test_bfs_distances_with_avoid():
    g = generate({"kind": "cycle", "n": 6})
    dist = bfs_distances(g, [0], avoid=[1])
    assert dist.tolist() == [0, -1, 4, 3, 2, 1]
    assert bfs_distances(g, [0], max_depth=1).tolist() == [0, 1, -1, -1, -1, 1]


def test_add_edge_and_union():
    g = add_edge(Graph(3), 0, 2)
    assert g.has_edge(2, 0)
    u = disjoint_union([g, Graph(2, [(0, 1)])])
    assert u.n == 5 and u.has_edge(3, 4)


def test_adjacency_views_consistent():
    g = generate({"kind": "petersen"})
    a = g.adjacency_matrix()
    assert np.array_equal(a, a.T) and a.sum() == 2 * g.m
    masks = g.adj_masks()
    for u in range(g.n):
        assert {v for v in range(g.n) if int(masks[u]) >> v & 1} == g.adj(u)
