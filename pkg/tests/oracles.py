"""Slow, direct reference implementations used only by the tests.

None of these share code with the package: they enumerate definitions
literally with itertools, Fraction and networkx.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx


def to_nx(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def rho_ref(x: float, eps: float, k: float) -> float:
    if x < k / 5:
        return 0.0
    return eps / math.log(15 * x / k) ** 2


def avg_degree(h: nx.Graph) -> Fraction:
    n = h.number_of_nodes()
    return Fraction(2 * h.number_of_edges(), n) if n else Fraction(0)


def expander_oracle(g, eps: float, k: float):
    """("certified", None) or ("refuted", X) by enumerating X and every deletable edge set F.

    Only edges between X and its outside can change N(X), so F ranges over
    subsets of those edges of size at most the budget.
    """
    h = to_nx(g)
    n = g.n
    d = avg_degree(h)
    lo = max(1, math.ceil(k / 2))
    for s in range(lo, n // 2 + 1):
        r = rho_ref(s, eps, k)
        budget = math.floor(float(d) * r * s)
        for xs in itertools.combinations(range(n), s):
            xset = set(xs)
            cross = [(u, v) for u in xs for v in h[u] if v not in xset]
            best = None
            for size in range(0, min(budget, len(cross)) + 1):
                for f in itertools.combinations(cross, size):
                    removed = set(f)
                    nb = {v for (u, v) in cross if (u, v) not in removed}
                    if best is None or len(nb) < best:
                        best = len(nb)
            if best is None:
                best = 0
            if best < r * s:
                return "refuted", sorted(xs)
    return "certified", None


def min_nbhd_oracle(g, xs, budget: int) -> int:
    """min |N_{G-F}(X)| over edge sets F with |F| <= budget, by enumeration."""
    h = to_nx(g)
    xset = set(xs)
    cross = [(u, v) for u in xs for v in h[u] if v not in xset]
    best = len({v for _, v in cross})
    for size in range(1, min(budget, len(cross)) + 1):
        for f in itertools.combinations(cross, size):
            removed = set(f)
            best = min(best, len({v for (u, v) in cross if (u, v) not in removed}))
    return best


def crux_oracle(g, alpha: Fraction) -> int:
    """Smallest |S| with d(G[S]) >= alpha d(G), over every subset."""
    h = to_nx(g)
    target = alpha * avg_degree(h)
    for s in range(1, g.n + 1):
        for xs in itertools.combinations(range(g.n), s):
            if avg_degree(h.subgraph(xs)) >= target:
                return s
    raise AssertionError("the whole graph always qualifies")


def profile_oracle(g, delta: Fraction) -> Fraction:
    h = to_nx(g)
    d = avg_degree(h)
    best = None
    top = math.floor(delta * g.n)
    for s in range(1, top + 1):
        for xs in itertools.combinations(range(g.n), s):
            val = Fraction(nx.cut_size(h, xs), 1) / (d * s)
            if best is None or val < best:
                best = val
    return best


def subdivision_oracle(g, cap: int | None = None) -> int:
    """Largest t with a K_t-subdivision, via networkx simple paths and backtracking."""
    h = to_nx(g)
    degs = dict(h.degree())
    top = min(g.n, max(degs.values(), default=0) + 1)
    if cap is not None:
        top = min(top, cap)
    for t in range(top, 1, -1):
        cands = [v for v in h if degs[v] >= t - 1]
        for core in itertools.combinations(cands, t):
            if _embed(h, core):
                return t
    return 1 if g.n else 0


def _embed(h: nx.Graph, core) -> bool:
    core_set = set(core)
    pairs = list(itertools.combinations(core, 2))
    options = {}
    for a, b in pairs:
        sub = h.subgraph([v for v in h if v not in core_set or v in (a, b)])
        options[(a, b)] = [p[1:-1] for p in nx.all_simple_paths(sub, a, b)]
        if not options[(a, b)]:
            return False
    pairs.sort(key=lambda p: len(options[p]))

    def go(i, used):
        if i == len(pairs):
            return True
        for inner in options[pairs[i]]:
            if used.isdisjoint(inner) and go(i + 1, used | set(inner)):
                return True
        return False

    return go(0, frozenset())
