"""Graph families used in the experiments, built from JSON-style specs.

A spec is a mapping with a ``kind`` key::

    {"kind": "gnp", "n": 64, "p": 0.5, "seed": 1}
    {"kind": "hypercube", "dim": 3}
    {"kind": "complete", "n": 8}
    {"kind": "complete_bipartite", "a": 3, "b": 3}
    {"kind": "disjoint_union", "parts": [spec, ...]}
    {"kind": "blowup", "base": spec, "s": 5}
    {"kind": "petersen"}
    {"kind": "cycle", "n": 5}
    {"kind": "path", "n": 4}
    {"kind": "star", "leaves": 3}
    {"kind": "edges", "n": 3, "edges": [[0, 1], [1, 2]]}

``gnp`` draws one uniform double per pair (u, v), u < v, in lexicographic
order from numpy's PCG64 seeded with the 64-bit ``seed``; an edge is present
when the draw is below ``p``. PCG64 output is identical across platforms.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Any, Mapping

import numpy as np

from .graph import Graph, GraphError, disjoint_union


def _int(spec, key, minimum=1):
    if key not in spec:
        raise GraphError(f"{spec.get('kind')}: missing parameter {key!r}")
    val = spec[key]
    if isinstance(val, bool) or not isinstance(val, (int, np.integer)):
        raise GraphError(f"{spec.get('kind')}: {key} must be an integer, got {val!r}")
    if val < minimum:
        raise GraphError(f"{spec.get('kind')}: {key} must be >= {minimum}, got {val}")
    return int(val)


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle: n must be >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def hypercube(dim: int) -> Graph:
    n = 1 << dim
    return Graph(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(dim) if v < v ^ (1 << i)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def gnp(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"gnp: p must lie in [0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def blowup(g: Graph, s: int) -> Graph:
    """Each vertex becomes an independent s-set; each edge a K_{s,s}."""
    if s < 1:
        raise GraphError("blowup: s must be >= 1")
    edges = [(u * s + i, v * s + j) for u, v in g.edges() for i in range(s) for j in range(s)]
    return Graph(g.n * s, edges)


def generate(spec: Mapping[str, Any] | str) -> Graph:
    """Build the graph described by ``spec`` (a mapping or its JSON text)."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise GraphError("graph spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "gnp":
        n = _int(spec, "n")
        p = spec.get("p")
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise GraphError("gnp: p must be a number")
        seed = _int(spec, "seed", minimum=0) if "seed" in spec else 0
        if seed >= 1 << 64:
            raise GraphError("gnp: seed must fit in 64 bits")
        return gnp(n, float(p), seed)
    if kind == "hypercube":
        return hypercube(_int(spec, "dim"))
    if kind == "complete":
        return complete(_int(spec, "n"))
    if kind == "complete_bipartite":
        return complete_bipartite(_int(spec, "a"), _int(spec, "b"))
    if kind == "cycle":
        return cycle(_int(spec, "n", minimum=3))
    if kind == "path":
        return path_graph(_int(spec, "n"))
    if kind == "star":
        return star(_int(spec, "leaves"))
    if kind == "petersen":
        return petersen()
    if kind == "disjoint_union":
        parts = spec.get("parts")
        if not isinstance(parts, list) or not parts:
            raise GraphError("disjoint_union: 'parts' must be a non-empty list")
        return disjoint_union([generate(p) for p in parts])
    if kind == "blowup":
        if "base" not in spec:
            raise GraphError("blowup: missing parameter 'base'")
        return blowup(generate(spec["base"]), _int(spec, "s"))
    if kind == "edges":
        n = _int(spec, "n", minimum=0)
        return Graph(n, [tuple(e) for e in spec.get("edges", [])])
    raise GraphError(f"unknown graph kind {kind!r}")
