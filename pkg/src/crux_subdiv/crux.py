"""Crux orders c_alpha(G), the small-set expansion profile, and the clique-hardness gadget."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _kernels
from .expansion import ExactCheckInfeasible
from .graph import Graph, GraphError, average_degree, disjoint_union, induced_edge_count

DEFAULT_ALPHA = Fraction(1, 100)
CRUX_EXACT_THRESHOLD = 20
PROFILE_EXACT_THRESHOLD = 20
UNLIMITED = 1 << 62

Rational = Union[Fraction, int, float, str]


def as_fraction(x: Rational) -> Fraction:
    """Exact rational from an int, Fraction, "p/q" string or (short) float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


def _alpha(alpha: Rational) -> Fraction:
    a = as_fraction(alpha)
    if not 0 < a <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {a}")
    return a


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class CruxReport:
    alpha: Fraction
    lower: int
    upper: int
    witness: Optional[list[int]]
    mode: str  # "exact" | "bounded"
    empirical_lower: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "alpha": _fmt(self.alpha),
            "lower": self.lower,
            "upper": self.upper,
            "witness": self.witness,
            "mode": self.mode,
        }
        if self.empirical_lower is not None:
            out["empirical_lower"] = self.empirical_lower
        return out


def satisfies_crux(g: Graph, vertices, alpha: Rational) -> bool:
    """d(G[S]) >= alpha d(G), exactly."""
    a = _alpha(alpha)
    s = list(vertices)
    if not s:
        return False
    return induced_edge_count(g, s) * g.n * a.denominator >= a.numerator * g.m * len(s)


def _edges_needed(g: Graph, a: Fraction, size: int) -> int:
    # e(S) n q >= p e(G) |S|
    return -((-a.numerator * g.m * size) // (g.n * a.denominator))


def _search_order(g: Graph) -> np.ndarray:
    deg = g.degrees
    return np.lexsort((np.arange(g.n), -deg)).astype(np.int64)


def _dense_subset(g: Graph, size: int, need: int, node_budget: int):
    if need <= 0:
        return 1, list(range(size))
    if need > size * (size - 1) // 2:
        return 0, None
    status, chosen = _kernels.dense_subset_search(
        g.adjacency_matrix(), g.degrees.astype(np.int64), _search_order(g), size, need, node_budget
    )
    return int(status), (sorted(chosen.tolist()) if status == 1 else None)


def _require_edges(g: Graph):
    if g.n == 0 or g.m == 0:
        raise GraphError("crux needs a graph with at least one edge")


def crux_exact(
    g: Graph,
    alpha: Rational = DEFAULT_ALPHA,
    *,
    threshold: int = CRUX_EXACT_THRESHOLD,
    max_order: Optional[int] = None,
) -> CruxReport:
    """Smallest m with an m-set S satisfying d(G[S]) >= alpha d(G).

    Sizes are tried in increasing order, each by branch and bound. With
    ``max_order`` only sizes up to that bound are searched (any n allowed);
    if none qualifies the report is bounded with lower = max_order + 1.
    """
    a = _alpha(alpha)
    _require_edges(g)
    if max_order is None and g.n > threshold:
        raise ExactCheckInfeasible(f"crux_exact: n={g.n} exceeds exact threshold {threshold}; use crux_bounds")
    top = g.n if max_order is None else min(max_order, g.n)
    for size in range(2, top + 1):
        status, chosen = _dense_subset(g, size, _edges_needed(g, a, size), UNLIMITED)
        if status == 1:
            return CruxReport(a, size, size, chosen, "exact")
    return CruxReport(a, top + 1, g.n, list(range(g.n)), "bounded")


def _peeling_order(g: Graph) -> list[int]:
    """Repeatedly remove a minimum-degree vertex (lowest id on ties)."""
    deg = g.degrees.tolist()
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        for u in g.neighbors(v):
            u = int(u)
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order


def _best_suffix(g: Graph, a: Fraction):
    """Smallest suffix of the peeling order that is an alpha-crux."""
    order = _peeling_order(g)
    pos = {v: i for i, v in enumerate(order)}
    # edges of the suffix starting at i: those whose earlier endpoint is >= i
    first = np.zeros(g.n + 1, dtype=np.int64)
    for u, v in g.edges():
        first[min(pos[u], pos[v])] += 1
    suffix_edges = np.cumsum(first[::-1])[::-1]
    best = None
    for i in range(g.n):
        size = g.n - i
        if suffix_edges[i] * g.n * a.denominator >= a.numerator * g.m * size:
            best = i
    return sorted(order[best:])


def _greedy_grow(g: Graph, a: Fraction, start: int, limit: int):
    """Add the vertex with most neighbours inside until the set is a crux."""
    inside = {start}
    conn = np.zeros(g.n, dtype=np.int64)
    conn[g.neighbors(start)] += 1
    e = 0
    while len(inside) < limit:
        cand = conn.copy()
        cand[list(inside)] = -1
        v = int(np.argmax(cand))
        if cand[v] < 0:
            return None
        e += int(conn[v])
        inside.add(v)
        conn[g.neighbors(v)] += 1
        if e * g.n * a.denominator >= a.numerator * g.m * len(inside):
            return sorted(inside)
    return None


def _shrink(g: Graph, a: Fraction, witness: list[int]) -> list[int]:
    """Drop the lowest-degree vertex while the set stays a crux."""
    cur = set(witness)
    while len(cur) > 2:
        sub = g.induced(sorted(cur))
        degs = sub.graph.degrees
        v = int(np.argmin(degs))
        trial = cur - {sub.ids[v]}
        if not satisfies_crux(g, trial, a):
            break
        cur = trial
    return sorted(cur)


def crux_bounds(
    g: Graph,
    alpha: Rational = DEFAULT_ALPHA,
    *,
    node_budget: int = 200_000,
    grow_starts: int = 16,
    samples: int = 64,
    seed: int = 0,
) -> CruxReport:
    """Certified lower and upper bounds on c_alpha(G) for graphs of any size.

    Upper: peeling-order suffixes, greedy growth from high-degree starts, then
    shrinking. Lower: ceil(alpha d) + 1, raised size by size while a budgeted
    branch and bound proves no set of that size qualifies. The sampled
    ``empirical_lower`` is informational only.
    """
    a = _alpha(alpha)
    _require_edges(g)
    witness = _best_suffix(g, a)
    starts = _search_order(g)[:grow_starts]
    for s in starts:
        w = _greedy_grow(g, a, int(s), len(witness) - 1)
        if w is not None and len(w) < len(witness):
            witness = w
    witness = _shrink(g, a, witness)
    upper = len(witness)

    d = average_degree(g)
    lower = max(2, math.floor(a * d) + 1)
    budget = node_budget
    size = lower
    while size < upper and budget > 0:
        status, chosen = _dense_subset(g, size, _edges_needed(g, a, size), budget)
        budget //= 2
        if status == 0:
            lower = size + 1
            size += 1
        elif status == 1:
            witness, upper = chosen, size
            break
        else:
            break
    lower = min(lower, upper)
    empirical = _sampled_lower(g, a, lower, upper, samples, seed)
    mode = "exact" if lower == upper else "bounded"
    return CruxReport(a, lower, upper, witness, mode, empirical_lower=empirical)


def _sampled_lower(g: Graph, a: Fraction, lower: int, upper: int, samples: int, seed: int) -> int:
    """Smallest size in [lower, upper) where a sampled BFS-grown set qualifies."""
    if samples <= 0 or lower >= upper:
        return upper
    rng = np.random.default_rng(seed)
    for size in range(lower, upper):
        for _ in range(samples):
            start = int(rng.integers(g.n))
            w = _greedy_grow(g, a, start, size)
            if w is not None and len(w) <= size:
                return size
        if size - lower > 32:
            break
    return upper


# -- small-set expansion profile --------------------------------------------------


@dataclass
class ProfileReport:
    delta: Fraction
    value: Fraction
    argmin: list[int]
    mode: str  # "exact" | "sampled"

    def to_json(self) -> dict:
        return {
            "delta": _fmt(self.delta),
            "value": _fmt(self.value),
            "value_float": float(self.value),
            "argmin": self.argmin,
            "mode": self.mode,
        }


def _profile_value(g: Graph, boundary: int, size: int) -> Fraction:
    return Fraction(boundary * g.n, 2 * g.m * size)


def expansion_profile(
    g: Graph,
    delta: Rational,
    mode: str = "exact",
    *,
    threshold: int = PROFILE_EXACT_THRESHOLD,
    trials: Optional[int] = None,
    seed: int = 0,
) -> ProfileReport:
    """min over 1 <= |S| <= delta n of e(S, S^c) / (d |S|).

    Sampled mode returns an upper bound on the true minimum.
    """
    dl = as_fraction(delta)
    if g.n == 0 or g.m == 0:
        raise GraphError("expansion profile needs d(G) > 0")
    smax = math.floor(dl * g.n)
    if smax < 1:
        raise ValueError("empty size range")
    smax = min(smax, g.n)
    if mode == "exact":
        if g.n > threshold:
            raise ExactCheckInfeasible(f"exact profile infeasible: n={g.n} > threshold {threshold}")
        num, den, mask = _kernels.profile_exact_scan(g.adj_masks(), g.degrees.astype(np.int64), smax)
        s = [v for v in range(g.n) if (int(mask) >> v) & 1]
        return ProfileReport(dl, _profile_value(g, int(num), int(den)), s, "exact")
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    return _sampled_profile(g, dl, smax, trials, seed)


def _boundary(g: Graph, members: np.ndarray, mark: np.ndarray) -> int:
    mark[:] = False
    mark[members] = True
    deg = g.degrees[members].sum()
    inner = sum(int(mark[g.neighbors(v)].sum()) for v in members)
    return int(deg - inner)


def _sampled_profile(g, dl, smax, trials, seed):
    rng = np.random.default_rng(seed)
    per_size = 4 * g.n if trials is None else trials
    mark = np.zeros(g.n, dtype=np.bool_)
    best = None
    sizes = range(1, smax + 1) if smax <= 16 else sorted({int(round(v)) for v in np.geomspace(1, smax, 16)})
    for s in sizes:
        for t in range(per_size):
            if t % 2 == 0:
                members = _bfs_grown(g, int(rng.integers(g.n)), s, rng)
            else:
                members = np.sort(rng.choice(g.n, size=s, replace=False))
            val = _profile_value(g, _boundary(g, members, mark), s)
            if best is None or val < best[0]:
                best = (val, members.tolist())
    return ProfileReport(dl, best[0], best[1], "sampled")


def _bfs_grown(g: Graph, start: int, size: int, rng) -> np.ndarray:
    seen = [start]
    inside = {start}
    i = 0
    while len(seen) < size:
        if i < len(seen):
            nb = [int(u) for u in g.neighbors(seen[i]) if int(u) not in inside]
            rng.shuffle(nb)
            for u in nb[: size - len(seen)]:
                inside.add(u)
                seen.append(u)
            i += 1
        else:
            rest = [u for u in range(g.n) if u not in inside]
            u = rest[int(rng.integers(len(rest)))]
            inside.add(u)
            seen.append(u)
    return np.array(sorted(seen), dtype=np.int64)


@dataclass
class SSEReport:
    eps: Fraction
    crux: int
    delta: Fraction
    phi: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {
            "eps": _fmt(self.eps),
            "crux": self.crux,
            "delta": _fmt(self.delta),
            "phi": _fmt(self.phi),
            "holds": self.holds,
        }


def sse_crux_consistency(g: Graph, eps: Rational) -> SSEReport:
    """Check phi_{(c_eps - 1)/n}(G) > 1 - eps exactly.

    Every S below the crux order has e(S) < eps d |S| / 2, hence a boundary
    above (1 - eps) d |S| provided its degree sum is d |S|; the inequality is
    therefore only claimed, and only checked, for regular graphs.
    """
    e = _alpha(eps)
    degs = g.degrees
    if g.n == 0 or degs.min() != degs.max():
        raise ValueError("sse_crux_consistency requires a regular graph")
    c = crux_exact(g, e).upper
    delta = Fraction(c - 1, g.n)
    phi = expansion_profile(g, delta, "exact").value
    return SSEReport(e, c, delta, phi, phi > 1 - e)


# -- clique-hardness gadget -------------------------------------------------------


def max_clique(g: Graph) -> list[int]:
    """A maximum clique by branch and bound with greedy-colouring bounds."""
    best: list[int] = []
    adj = [g.adj(v) for v in range(g.n)]

    def colour_bound(cands):
        order = sorted(cands, key=lambda v: (-len(adj[v] & cands), v))
        classes: list[list[int]] = []
        bound = {}
        for v in order:
            for i, cl in enumerate(classes):
                if not any(u in adj[v] for u in cl):
                    cl.append(v)
                    bound[v] = i + 1
                    break
            else:
                classes.append([v])
                bound[v] = len(classes)
        return sorted(order, key=lambda v: bound[v]), bound

    def expand(clique, cands):
        nonlocal best
        order, bound = colour_bound(cands)
        for v in reversed(order):
            if len(clique) + bound[v] <= len(best):
                return
            nxt = cands & adj[v]
            if nxt:
                expand(clique + [v], nxt)
            elif len(clique) + 1 > len(best):
                best = clique + [v]
            cands = cands - {v}

    if g.n:
        expand([], frozenset(range(g.n)))
    return sorted(best)


def clique_number(g: Graph) -> int:
    return len(max_clique(g))


def _copies(g: Graph, count: int) -> Graph:
    return disjoint_union([g] * count)


def _pad_isolated(g: Graph, extra: int) -> Graph:
    return Graph(g.n + extra, g.edges())


def _case_one(g: Graph, k: int, hi: Fraction) -> Graph:
    d = average_degree(g)
    m1 = math.ceil(k * d / g.n)
    base = _copies(g, m1)
    # smallest m2 with m1 n d / (m1 n + m2) <= hi
    m2 = max(0, math.ceil(m1 * g.n * (d - hi) / hi))
    return _pad_isolated(base, m2)


def np_gadget(g: Graph, k: int, eps: Rational) -> Graph:
    """G' with omega(G') = omega(G) and d(G') in ((k - 1 - 1/k)/eps, (k - 1)/eps].

    Then c_eps(G') <= k exactly when G has a k-clique.
    """
    e = _alpha(eps)
    if not 3 <= k <= g.n:
        raise ValueError(f"need 3 <= k <= n, got k={k}, n={g.n}")
    if g.m == 0:
        raise GraphError("gadget needs at least one edge")
    lo = (k - 1 - Fraction(1, k)) / e
    hi = Fraction(k - 1) / e
    d = average_degree(g)
    if lo < d <= hi:
        return g
    if d > hi:
        out = _case_one(g, k, hi)
    else:
        m = math.ceil(hi - d)
        n = g.n
        edges = [(u + i * n, v + i * n) for i in range(2 * m) for u, v in g.edges()]
        edges += [(v + i * n, v + j * n) for v in range(n) for i in range(m) for j in range(m, 2 * m)]
        out = Graph(2 * m * n, edges)
        if average_degree(out) != hi:
            out = _case_one(out, k, hi)
    dout = average_degree(out)
    assert lo < dout <= hi, f"gadget degree {dout} outside ({lo}, {hi}]"
    return out
