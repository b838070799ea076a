"""Certificate corruptions that are invalid by construction."""

import random

from crux_subdiv import Graph
from crux_subdiv.subdivision import SubdivisionCertificate


def mutate(cert: SubdivisionCertificate, g: Graph, rng: random.Random) -> dict:
    """A corruption that is invalid by construction."""
    data = cert.to_json()
    core = data["core"]
    paths = data["paths"]
    keys = sorted(paths)
    inner = [(k, i) for k in keys for i in range(1, len(paths[k]) - 1)]
    outside = [v for v in range(g.n) if v not in core]
    ops = ["drop", "t", "dup", "truncate", "repeat", "range"]
    if inner:
        ops.append("core_inside")
    if outside:
        ops.append("swap_core")
    op = rng.choice(ops)
    if op == "drop":
        del paths[rng.choice(keys)]
    elif op == "t":
        data["t"] += rng.choice([-1, 1])
    elif op == "dup":
        core[rng.randrange(1, len(core))] = core[0]
    elif op == "truncate":
        k = rng.choice(keys)
        paths[k] = paths[k][:-1]
    elif op == "repeat":
        k = rng.choice(keys)
        paths[k] = paths[k][:1] + paths[k]
    elif op == "range":
        k = rng.choice(keys)
        paths[k] = paths[k][:1] + [g.n + 3] + paths[k][1:]
    elif op == "core_inside":
        k, i = rng.choice(inner)
        a, b = (int(x) for x in k.split("-"))
        paths[k][i] = rng.choice([c for c in core if c not in (a, b)] or [a])
    elif op == "swap_core":
        i = rng.randrange(len(core))
        core[i] = rng.choice(outside)
    return data
