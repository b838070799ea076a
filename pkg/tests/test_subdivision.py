import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from crux_subdiv import Graph, GraphError, generate
from crux_subdiv.expansion import ExpanderParams
from crux_subdiv.graph import add_edge
from crux_subdiv.subdivision import (
    SubdivisionCertificate,
    bounded_maxdeg_reduce,
    greedy_best_subdivision,
    greedy_grow_subdivision,
    greedy_subdivision_direct,
    is_valid,
    make_certificate,
    max_subdivision_bruteforce,
    verify_subdivision,
)
from mutations import mutate
from oracles import subdivision_oracle


def kinds(g, cert):
    return {v["kind"] for v in verify_subdivision(g, cert)}


# -- verifier ----------------------------------------------------------------------


def test_complete_graph_is_its_own_subdivision():
    g = generate({"kind": "complete", "n": 4})
    cert = make_certificate(range(4), {(u, v): [u, v] for u, v in g.edges()})
    assert verify_subdivision(g, cert) == []


def test_cycle_as_triangle_subdivision():
    g = generate({"kind": "cycle", "n": 4})
    cert = make_certificate([0, 1, 2], {(0, 1): [0, 1], (1, 2): [1, 2], (0, 2): [2, 3, 0]})
    assert is_valid(g, cert)


def test_internal_overlap_names_vertex():
    g = generate({"kind": "complete", "n": 6})
    cert = make_certificate([0, 1, 2], {(0, 1): [0, 4, 1], (1, 2): [1, 4, 2], (0, 2): [0, 2]})
    viol = verify_subdivision(g, cert)
    assert [v["kind"] for v in viol] == ["internal overlap"]
    assert viol[0]["vertex"] == 4


@pytest.mark.parametrize(
    "cert, kind",
    [
        (None, "malformed"),
        ("not json", "malformed"),
        ({"t": 2}, "malformed"),
        ({"t": 3, "core": [0, 1], "paths": {"0-1": [0, 1]}}, "core size"),
        ({"t": 2, "core": [0, 9], "paths": {"0-9": [0, 9]}}, "vertex range"),
        ({"t": 2, "core": [0, 0], "paths": {}}, "core repeat"),
        ({"t": 2, "core": [0, 1], "paths": {}}, "missing path"),
        ({"t": 2, "core": [0, 1], "paths": {"0-1": [0, 1], "0-2": [0, 2]}}, "extra path"),
        ({"t": 2, "core": [0, 1], "paths": {"0-1": [0, 2]}}, "endpoints"),
        ({"t": 2, "core": [0, 1], "paths": {"0-1": [0, 2, 0, 1]}}, "repeated vertex"),
        ({"t": 2, "core": [0, 2], "paths": {"0-2": [0, 2]}}, "missing edge"),
        ({"t": 3, "core": [0, 1, 2], "paths": {"0-1": [0, 1], "1-2": [1, 2], "0-2": [0, 1, 2]}}, "core internal"),
        ({"t": 2, "core": [0, 1], "paths": {"0-1": "abc"}}, "malformed"),
    ],
)
def test_violation_kinds(cert, kind):
    g = generate({"kind": "path", "n": 4})
    assert kind in kinds(g, cert)


@settings(max_examples=200)
@given(st.recursive(st.none() | st.integers(-3, 10) | st.text(max_size=4), lambda c: st.lists(c, max_size=4) | st.dictionaries(st.text(max_size=4), c, max_size=4)))
def test_verifier_never_raises(junk):
    g = generate({"kind": "complete", "n": 5})
    assert isinstance(verify_subdivision(g, junk), list)


def test_certificate_json_round_trip():
    g = generate({"kind": "petersen"})
    _, cert = max_subdivision_bruteforce(g)
    text = cert.dumps()
    assert text == json.dumps(json.loads(text), sort_keys=True)
    back = SubdivisionCertificate.from_json(text)
    assert back == cert and is_valid(g, text)
    assert all("-" in k and int(k.split("-")[0]) < int(k.split("-")[1]) for k in cert.to_json()["paths"])


def test_lift_through_subgraph():
    g = generate({"kind": "disjoint_union", "parts": [{"kind": "cycle", "n": 4}, {"kind": "complete", "n": 5}]})
    sub = g.induced(range(4, 9))
    _, cert = max_subdivision_bruteforce(sub.graph)
    lifted = cert.lift(sub)
    assert lifted.t == 5 and set(lifted.core) == set(range(4, 9))
    assert is_valid(g, lifted)


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "complete", "n": 5},
        {"kind": "complete_bipartite", "a": 3, "b": 3},
        {"kind": "petersen"},
        {"kind": "hypercube", "dim": 3},
        {"kind": "cycle", "n": 5},
    ],
)
def test_mutations_rejected(spec):
    g = generate(spec)
    _, cert = max_subdivision_bruteforce(g)
    rng = random.Random(repr(spec))
    for _ in range(20):
        bad = mutate(cert, g, rng)
        assert verify_subdivision(g, bad), bad


# -- exhaustive oracle ----------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, t",
    [
        ({"kind": "complete", "n": 5}, 5),
        ({"kind": "complete_bipartite", "a": 3, "b": 3}, 4),
        ({"kind": "petersen"}, 4),
        ({"kind": "hypercube", "dim": 3}, 4),
        ({"kind": "cycle", "n": 5}, 3),
        ({"kind": "path", "n": 4}, 2),
        ({"kind": "star", "leaves": 5}, 2),
    ],
)
def test_oracle_values(spec, t):
    g = generate(spec)
    got, cert = max_subdivision_bruteforce(g)
    assert got == t and cert.t == t and is_valid(g, cert)


def test_oracle_cap_and_limits():
    g = generate({"kind": "complete", "n": 6})
    assert max_subdivision_bruteforce(g, cap=4)[0] == 4
    assert max_subdivision_bruteforce(Graph(3))[0] == 1
    assert max_subdivision_bruteforce(Graph(0)) == (0, None)
    with pytest.raises(GraphError):
        max_subdivision_bruteforce(generate({"kind": "complete", "n": 13}))


@settings(max_examples=120)
@given(graphs(min_n=1, max_n=8))
def test_oracle_agrees_with_networkx_search(g):
    t, cert = max_subdivision_bruteforce(g)
    assert t == subdivision_oracle(g)
    if cert is not None:
        assert is_valid(g, cert) and cert.t == t
    assert t <= g.max_degree() + 1 or t == 1


@settings(max_examples=50)
@given(graphs(min_n=2, max_n=9), st.data())
def test_oracle_monotone_under_edge_addition(g, data):
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if not missing:
        return
    u, v = data.draw(st.sampled_from(missing))
    assert max_subdivision_bruteforce(add_edge(g, u, v))[0] >= max_subdivision_bruteforce(g)[0]


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0.3, 1.0), st.integers(0, 10**6))
def test_bipartite_space_bound(a, b, p, seed):
    rng = random.Random(seed)
    edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < p]
    g = Graph(a + b, edges)
    t, _ = max_subdivision_bruteforce(g)
    assert math.comb(math.ceil(t / 2), 2) <= g.n


# -- greedy builders ---------------------------------------------------------------------


def test_direct_greedy_complete():
    g = generate({"kind": "complete", "n": 6})
    cert = greedy_subdivision_direct(g, 6)
    assert cert.t == 6 and all(len(p) == 2 for p in cert.paths.values())
    assert is_valid(g, cert)


def test_direct_greedy_cycle():
    g = generate({"kind": "cycle", "n": 5})
    cert = greedy_subdivision_direct(g, 3)
    assert cert is not None and is_valid(g, cert)
    assert greedy_subdivision_direct(g, 4) is None
    with pytest.raises(ValueError):
        greedy_subdivision_direct(g, 1)


def test_direct_greedy_below_oracle():
    g = generate({"kind": "gnp", "n": 12, "p": 0.8, "seed": 7})
    t_oracle, _ = max_subdivision_bruteforce(g)
    for t in range(2, t_oracle + 3):
        cert = greedy_subdivision_direct(g, t)
        if cert is not None:
            assert is_valid(g, cert) and cert.t <= t_oracle


@settings(max_examples=60)
@given(graphs(min_n=2, max_n=10))
def test_greedy_builders_sound_and_below_oracle(g):
    t_oracle, _ = max_subdivision_bruteforce(g)
    for cert in (greedy_grow_subdivision(g), greedy_grow_subdivision(g, reserve=3), greedy_best_subdivision(g)):
        if cert is not None:
            assert is_valid(g, cert)
            assert cert.t <= t_oracle


@settings(max_examples=15)
@given(st.integers(30, 80), st.floats(0.1, 0.6), st.integers(0, 1000))
def test_greedy_best_sound_on_larger_graphs(n, p, seed):
    g = generate({"kind": "gnp", "n": n, "p": p, "seed": seed})
    cert = greedy_best_subdivision(g, max_cores=3, max_restarts=30)
    assert cert is None or is_valid(g, cert)


# -- high-degree reduction ----------------------------------------------------------------


def test_reduce_regular_unchanged():
    g = generate({"kind": "petersen"})
    res = bounded_maxdeg_reduce(g, ExpanderParams(), 3, 4)
    assert res.graph.graph == g and res.certificate is None and res.deleted == []


def test_reduce_deletes_hub():
    edges = [(0, i) for i in range(1, 51)] + [(a, b) for a in range(1, 5) for b in range(a + 1, 5)]
    g = Graph(51, edges)
    res = bounded_maxdeg_reduce(g, ExpanderParams(), 4, 3, deletion_threshold=5)
    assert res.deleted == [0]
    assert 0 not in res.graph.ids and res.graph.graph.n == 50
    assert res.checks["half_order"] is True


def test_reduce_embeds_on_high_degree_vertices():
    g = generate({"kind": "complete", "n": 12})
    res = bounded_maxdeg_reduce(g, ExpanderParams(), 11, 6)
    assert res.certificate is None  # nobody exceeds the cap
    res = bounded_maxdeg_reduce(g, ExpanderParams(), 5, 6)
    assert res.checks["cap_at_least_d"] is False
    assert res.certificate.t == 6 and is_valid(g, res.certificate)


def test_reduce_certificate_from_high_vertices():
    # K12 with pendant paths keeps d low enough for a cap of 5
    edges = [(a, b) for a in range(12) for b in range(a + 1, 12)]
    edges += [(12 + i, 13 + i) for i in range(60)]
    g = Graph(73, edges)
    res = bounded_maxdeg_reduce(g, ExpanderParams(), 5, 6)
    assert res.certificate is not None and res.certificate.t == 6
    assert set(res.certificate.core) <= set(range(12)) and is_valid(g, res.certificate)
