import json
import math

import pytest
from hypothesis import given, settings

from conftest import graphs
from crux_subdiv import Graph, generate
from crux_subdiv.graph import disjoint_union
from crux_subdiv.pipeline import PipelineConfig, h_schedule, pipeline_find_subdivision
from crux_subdiv.subdivision import greedy_best_subdivision, max_subdivision_bruteforce, verify_subdivision


def test_complete_graph_is_its_own_subdivision():
    res = pipeline_find_subdivision(generate({"kind": "complete", "n": 20}))
    assert res.t == 20
    assert verify_subdivision(generate({"kind": "complete", "n": 20}), res.certificate) == []


def test_union_of_bipartite_copies_matches_single():
    part = {"kind": "complete_bipartite", "a": 8, "b": 8}
    one = pipeline_find_subdivision(generate(part)).t
    many = pipeline_find_subdivision(generate({"kind": "disjoint_union", "parts": [part] * 4})).t
    assert one == many >= 5


def test_pipeline_not_worse_than_direct_greedy():
    g = generate({"kind": "gnp", "n": 64, "p": 0.5, "seed": 1})
    cfg = PipelineConfig()
    direct = greedy_best_subdivision(
        g, max_cores=cfg.greedy_max_cores, max_restarts=cfg.greedy_max_restarts, reserves=cfg.greedy_reserves
    )
    assert pipeline_find_subdivision(g, cfg).t >= direct.t


def test_small_components_use_the_oracle():
    g = generate({"kind": "petersen"})
    res = pipeline_find_subdivision(g)
    assert res.t == max_subdivision_bruteforce(g)[0] == 4
    assert any(ev.get("stage") == "oracle" for ev in res.trace)
    res = pipeline_find_subdivision(g, PipelineConfig(oracle_threshold=0))
    assert not any(ev.get("stage") == "oracle" for ev in res.trace)


def test_edgeless_and_tiny_inputs():
    # a vertex is a K_1 and an edge is a K_2, both certified trivially
    assert pipeline_find_subdivision(Graph(0)).t == 0
    assert pipeline_find_subdivision(Graph(5)).t == 1
    assert pipeline_find_subdivision(Graph(2, [(0, 1)])).t == 2
    assert pipeline_find_subdivision(generate({"kind": "cycle", "n": 30})).t == 3


@settings(max_examples=40)
@given(graphs(min_n=3, max_n=40, min_m=3))
def test_output_lifts_to_original_graph(g):
    res = pipeline_find_subdivision(g)
    if res.certificate is not None:
        assert verify_subdivision(g, res.certificate) == []
        assert res.certificate.t == res.t


@settings(max_examples=20)
@given(graphs(min_n=3, max_n=30, min_m=3))
def test_extra_edge_component_changes_nothing(g):
    bigger = disjoint_union([g, Graph(2, [(0, 1)])])
    assert pipeline_find_subdivision(bigger).t == pipeline_find_subdivision(g).t


def test_config_json_round_trip():
    cfg = PipelineConfig(eps=0.05, multipliers={"h1": 1e-6}, stages=["direct", "units"])
    back = PipelineConfig.from_json(json.dumps(cfg.to_json()))
    assert back == cfg and back.stages == ("direct", "units")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"preset": "nope"},
        {"eps": 0.5},
        {"alpha": "0"},
        {"oracle_threshold": -1},
        {"expander_trials": 0},
        {"multipliers": {"h9": 1.0}},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        PipelineConfig(**kwargs)


def test_config_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown config keys"):
        PipelineConfig.from_json({"eps": 0.01, "speed": 3})


def test_h_schedule_shapes():
    full = h_schedule(PipelineConfig(preset="asymptotic"), 10**6, 1000.0)
    desk = h_schedule(PipelineConfig(), 256, 128.0)
    assert full["h1"] > full["h3"] > 1
    assert all(v >= 1 for v in desk.values()) and desk["h3"] >= 2 and desk["h5"] >= 2
    override = h_schedule(PipelineConfig(multipliers={"h2": 40.0}), 256, 128.0)
    assert override["h2"] == round(40 * 128 / math.log(256) ** 3) == 30


def test_trace_is_json_lines():
    res = pipeline_find_subdivision(generate({"kind": "gnp", "n": 40, "p": 0.4, "seed": 2}))
    lines = res.trace_jsonl().splitlines()
    events = [json.loads(x) for x in lines]
    assert events[0]["stage"] == "input" and events[-1] == {"stage": "result", "event": "done", "t": res.t}
    assert all("stage" in ev and "event" in ev for ev in events)
    out = res.to_json()
    assert out["t"] == res.t and out["certificate"]["t"] == res.t


def test_seed_changes_are_deterministic():
    g = generate({"kind": "gnp", "n": 50, "p": 0.3, "seed": 7})
    a = pipeline_find_subdivision(g, PipelineConfig(seed=3))
    b = pipeline_find_subdivision(g, PipelineConfig(seed=3))
    assert a.t == b.t and a.trace_jsonl() == b.trace_jsonl()
