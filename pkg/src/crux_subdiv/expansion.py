"""Sublinear robust expanders: the rate function, checking, extraction, balls and paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels
from .graph import Graph, GraphError, Subgraph, average_degree, blocked_mask

DEFAULT_EXACT_THRESHOLD = 14


class ExactCheckInfeasible(ValueError):
    pass


class ExtractionError(RuntimeError):
    """Iteration cap hit; ``best`` holds the best subgraph found so far."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


class HypothesisError(ValueError):
    def __init__(self, report):
        failed = [k for k, v in report.items() if v is False]
        super().__init__(f"hypotheses failed: {', '.join(failed)}")
        self.report = report


@dataclass(frozen=True)
class ExpanderParams:
    """(eps, k) for robust expanders.

    Construction rejects eps for which the integral of rho(x)/x over
    [1, inf) reaches 1/8. With natural logs the integral has the closed form
    eps / ln(15 x0 / k), x0 = max(1, k/5).
    """

    eps: float = 0.01
    k: float = 1.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.rate_integral() >= 0.125:
            raise ValueError(f"eps={self.eps} too large: integral of rho(x)/x is {self.rate_integral():.4f} >= 1/8")

    def rate_integral(self) -> float:
        x0 = max(1.0, self.k / 5)
        return self.eps / math.log(15 * x0 / self.k)

    def rho(self, x: float) -> float:
        return rho(x, self)


@dataclass(frozen=True)
class ExpansionRange:
    """Every X with a <= |X| <= b must satisfy |N(X)| >= rho |X|."""

    a: float
    b: float
    rho: float

    def __post_init__(self):
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if not 1 <= self.a <= self.b:
            raise ValueError(f"need 1 <= a <= b, got a={self.a}, b={self.b}")


@dataclass
class ExpanderWitness:
    verdict: str  # "certified" | "refuted" | "sampled-pass"
    mode: str  # "exact" | "sampled"
    violating_set: Optional[list[int]] = None
    deleted_edges: Optional[list[tuple[int, int]]] = None
    trials: Optional[int] = None
    neighbourhood_left: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "witness_set": self.violating_set,
            "deleted_edges": [list(e) for e in self.deleted_edges] if self.deleted_edges is not None else None,
            "trials": self.trials,
        }


def rho(x: float, params: ExpanderParams) -> float:
    """Sublinear expansion rate: 0 below k/5, eps / ln^2(15x/k) from there on."""
    if x <= 0:
        raise ValueError(f"rho needs x > 0, got {x}")
    if x < params.k / 5:
        return 0.0
    return params.eps / math.log(15 * x / params.k) ** 2


def short_path_length_bound(n: int, params: ExpanderParams) -> float:
    return (2 / params.eps) * math.log(15 * n / params.k) ** 3


# -- deletion-robust neighbourhoods ------------------------------------------


def min_neighborhood_under_deletion(g: Graph, x: Iterable[int], budget: int):
    """Smallest |N_{G-F}(X)| over edge sets |F| <= budget, with an optimal F.

    Cutting neighbour v off costs its number of edges into X and lowers the
    objective by one, so taking the cheapest neighbours first is optimal.
    """
    xs = g.check_vertices(x)
    cost: dict[int, int] = {}
    for u in xs:
        for v in g.adj(u):
            if v not in xs:
                cost[v] = cost.get(v, 0) + 1
    spent = 0
    removed = []
    for v in sorted(cost, key=lambda v: (cost[v], v)):
        if spent + cost[v] > budget:
            break
        spent += cost[v]
        removed.append(v)
    edges = sorted((min(u, v), max(u, v)) for v in removed for u in g.adj(v) if u in xs)
    return len(cost) - len(removed), edges


def _deletion_budget(d: Fraction, r: float, s: int) -> int:
    return math.floor(float(d) * r * s)


def _size_range(g: Graph, params: ExpanderParams):
    return math.ceil(params.k / 2), g.n // 2


def check_robust_expander(
    g: Graph,
    params: ExpanderParams,
    mode: str = "exact",
    *,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
    trials: Optional[int] = None,
    seed: int = 0,
) -> ExpanderWitness:
    """Test the (eps, k)-robust-expander condition.

    ``exact`` enumerates every X with k/2 <= |X| <= n/2; ``sampled`` draws
    randomly grown connected sets and uniform sets per size class and can only refute.
    """
    if g.n < 1:
        raise GraphError("empty graph")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    smin, smax = _size_range(g, params)
    if smin > smax:
        return ExpanderWitness("certified", mode, trials=0 if mode == "sampled" else None)
    if mode == "exact" and g.n > exact_threshold:
        raise ExactCheckInfeasible(f"exact check infeasible: n={g.n} > threshold {exact_threshold}")
    d = average_degree(g)
    budgets = np.zeros(smax + 1, dtype=np.int64)
    needs = np.zeros(smax + 1, dtype=np.float64)
    for s in range(smin, smax + 1):
        r = rho(s, params)
        budgets[s] = _deletion_budget(d, r, s)
        needs[s] = r * s
    if mode == "exact":
        xmask, _ = _kernels.expander_exact_scan(g.adj_masks(), smin, smax, budgets, needs)
        if xmask < 0:
            return ExpanderWitness("certified", "exact")
        xs = [v for v in range(g.n) if (int(xmask) >> v) & 1]
        left, cut = min_neighborhood_under_deletion(g, xs, int(budgets[len(xs)]))
        return ExpanderWitness("refuted", "exact", xs, cut, neighbourhood_left=left)
    return _sampled_check(g, smin, smax, budgets, needs, trials, seed)


def _size_classes(smin, smax, count=16):
    if smax - smin + 1 <= count:
        return list(range(smin, smax + 1))
    return sorted({int(round(v)) for v in np.geomspace(smin, smax, count)})


_KEY_CHUNK = 256  # rows of random keys drawn at once


def _sampled_check(g, smin, smax, budgets, needs, trials, seed):
    """Per size class, ``trials`` connected sets then ``trials`` uniform sets (default 10 n each).

    Each set comes from a row of uniform random keys: connected sets grow
    from the least-key vertex through least-key frontier vertices, uniform
    sets are the s least keys. Keys are drawn with numpy on every backend.
    """
    rng = np.random.default_rng(seed)
    per_class = 10 * g.n if trials is None else trials
    drawn = 0
    for s in _size_classes(smin, smax):
        for connected in (True, False):
            left_rows = per_class
            while left_rows > 0:
                rows = min(left_rows, _KEY_CHUNK)
                keys = rng.random((rows, g.n))
                hit, members = _kernels.sampled_scan(
                    g.indptr, g.indices, keys, s, int(budgets[s]), float(needs[s]), connected
                )
                if hit >= 0:
                    drawn += int(hit) + 1
                    xs = [int(v) for v in members]
                    left, cut = min_neighborhood_under_deletion(g, xs, int(budgets[s]))
                    return ExpanderWitness("refuted", "sampled", xs, cut, trials=drawn, neighbourhood_left=left)
                drawn += rows
                left_rows -= rows
    return ExpanderWitness("sampled-pass", "sampled", trials=drawn)


def verify_refutation(g: Graph, params: ExpanderParams, witness: ExpanderWitness) -> bool:
    """Re-derive the violation from the witness pair (X, F) alone."""
    if witness.verdict != "refuted" or witness.violating_set is None:
        return False
    xs = set(witness.violating_set)
    s = len(xs)
    if not params.k / 2 <= s <= g.n / 2:
        return False
    r = rho(s, params)
    fset = {tuple(sorted(e)) for e in (witness.deleted_edges or [])}
    if any(not g.has_edge(u, v) for u, v in fset):
        return False
    if len(fset) > float(average_degree(g)) * r * s:
        return False
    nb = {v for u in xs for v in g.adj(u) if v not in xs and (min(u, v), max(u, v)) not in fset}
    return len(nb) < r * s


# -- extraction ---------------------------------------------------------------


def _peel(g: Graph, vertices: np.ndarray) -> np.ndarray:
    """Drop vertices of degree < d/2 until none is left; d never decreases."""
    alive = np.zeros(g.n, dtype=np.bool_)
    alive[vertices] = True
    deg = np.zeros(g.n, dtype=np.int64)
    owner = np.repeat(np.arange(g.n), np.diff(g.indptr))
    both = alive[owner] & alive[g.indices]
    np.add.at(deg, owner[both], 1)
    while True:
        n_cur = int(alive.sum())
        e2 = int(deg[alive].sum())
        low = alive & (2 * deg * n_cur < e2)
        if not low.any():
            return np.flatnonzero(alive)
        alive &= ~low
        for v in np.flatnonzero(low):
            nb = g.neighbors(v)
            deg[nb] -= 1
        deg[low] = 0


def _density(g: Graph, vertices) -> Fraction:
    sub = g.induced(vertices).graph
    return average_degree(sub)


@dataclass
class Extraction:
    subgraph: Subgraph
    witness: ExpanderWitness
    iterations: int
    trace: list = field(default_factory=list)

    @property
    def graph(self) -> Graph:
        return self.subgraph.graph

    @property
    def ids(self):
        return self.subgraph.ids


def _satisfies_extraction_bounds(h: Graph, d0: Fraction) -> bool:
    if h.n == 0 or h.m == 0:
        return False
    dh = average_degree(h)
    return dh >= d0 / 2 and 2 * h.min_degree() >= dh


def extract_robust_expander(
    g: Graph,
    params: ExpanderParams,
    *,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
    trials: Optional[int] = None,
    seed: int = 0,
    max_iter: Optional[int] = None,
) -> Extraction:
    """Find H with d(H) >= d(G)/2 and delta(H) >= d(H)/2, then test expansion.

    Min-degree peeling enforces both degree bounds. While the expansion test
    refutes, descend into G[X + N(X)] or G - X for the witness X, whichever
    keeps d >= d(G)/2 after peeling and is denser.
    """
    if g.m < 1:
        raise GraphError("extraction needs at least one edge")
    d0 = average_degree(g)
    cap = 10 * g.n if max_iter is None else max_iter
    current = _peel(g, np.arange(g.n))
    trace = []
    for it in range(1, cap + 1):
        sub = g.induced(current.tolist())
        h = sub.graph
        mode = "exact" if h.n <= exact_threshold else "sampled"
        w = check_robust_expander(h, params, mode, exact_threshold=exact_threshold, trials=trials, seed=seed + it)
        trace.append({"iteration": it, "n": h.n, "m": h.m, "verdict": w.verdict, "mode": mode})
        if w.verdict != "refuted":
            return Extraction(sub, w, it, trace)
        xs = set(w.violating_set)
        closed = xs | {v for u in xs for v in h.adj(u)}
        best = None
        for local in (sorted(closed), sorted(set(range(h.n)) - xs)):
            if not local or len(local) == h.n:
                continue
            peeled = _peel(h, np.array(local, dtype=np.int64))
            cand = h.induced(peeled.tolist()).graph
            if not _satisfies_extraction_bounds(cand, d0):
                continue
            dens = average_degree(cand)
            if best is None or dens > best[0]:
                best = (dens, peeled)
        if best is None:
            return Extraction(sub, w, it, trace)
        current = np.array([sub.ids[v] for v in best[1]], dtype=np.int64)
    best_sub = g.induced(current.tolist())
    raise ExtractionError(f"extraction exceeded {cap} iterations", best_sub)


# -- balls and paths ------------------------------------------------------------


def ball(g: Graph, x: Iterable[int], r: int, avoid: Iterable[int] = ()) -> frozenset:
    """B^r(X) in G - avoid."""
    xs = g.check_vertices(x)
    av = g.check_vertices(avoid)
    if xs & av:
        raise ValueError("ball: X must be disjoint from the avoided set")
    if r < 0:
        raise ValueError("ball: radius must be >= 0")
    if r == 0:
        return xs
    dist, _, _ = _kernels.bfs(
        g.indptr, g.indices, np.fromiter(sorted(xs), dtype=np.int64), blocked_mask(g, av), max_depth=r
    )
    return frozenset(np.flatnonzero(dist >= 0).tolist())


def short_path(
    g: Graph, x: Iterable[int], y: Iterable[int], w: Iterable[int] = (), max_len: int = -1
) -> Optional[list[int]]:
    """Shortest X-Y path in G - W; ties broken towards smaller vertex ids."""
    xs = g.check_vertices(x)
    ys = g.check_vertices(y)
    ws = g.check_vertices(w)
    if not xs or not ys:
        raise ValueError("short_path: X and Y must be non-empty")
    if ws & (xs | ys):
        raise ValueError("short_path: W must be disjoint from X and Y")
    return _path_search(g, xs, ys, blocked_mask(g, ws), max_len)


def _path_search(g: Graph, sources, targets, blocked: np.ndarray, max_len: int = -1) -> Optional[list[int]]:
    is_target = np.zeros(g.n, dtype=np.bool_)
    is_target[np.fromiter(targets, dtype=np.int64)] = True
    src = np.fromiter(sorted(sources), dtype=np.int64)
    _, parent, hit = _kernels.bfs(g.indptr, g.indices, src, blocked, is_target, max_len, True)
    if hit < 0:
        return None
    path = [int(hit)]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    path.reverse()
    return path


# -- ball-growth selection ------------------------------------------------------


def has_expansion_property(g: Graph, rng: ExpansionRange, limit: int = 20) -> Optional[bool]:
    """Exact (a, b, rho)-expansion test for n <= limit; None when too large."""
    if g.n > limit:
        return None
    lo, hi = max(1, math.ceil(rng.a)), min(g.n, math.floor(rng.b))
    if lo > hi:
        return True
    budgets = np.zeros(hi + 1, dtype=np.int64)
    needs = np.array([rng.rho * s for s in range(hi + 1)], dtype=np.float64)
    xmask, _ = _kernels.expander_exact_scan(g.adj_masks(), lo, hi, budgets, needs)
    return bool(xmask < 0)


def _union_condition(sets, k, x, max_checks=20000):
    q = len(sets)
    lo, hi = max(1, math.ceil(k)), min(q, math.floor(3 * k))
    if lo > hi:
        return True
    pairwise_disjoint = all(not (sets[i] & sets[j]) for i in range(q) for j in range(i + 1, q))
    if pairwise_disjoint and all(len(a) >= x for a in sets):
        return True
    total = sum(math.comb(q, s) for s in range(lo, hi + 1))
    if total > max_checks:
        return None
    for s in range(lo, hi + 1):
        for idx in combinations(range(q), s):
            if len(frozenset().union(*(sets[i] for i in idx))) < s * x:
                return False
    return True


def _family_hypotheses(g, rng, sets, w, avoid_sets, k, x, extra):
    q = len(sets)
    rep = {
        "A1_sizes": all(len(a) >= x for a in sets) and all(len(wi) <= rng.rho * x / 4 for wi in avoid_sets),
        "A2_disjoint": all(not (a & wi) and not (a & w) for a, wi in zip(sets, avoid_sets)),
        "A3_union": _union_condition(sets, k, x),
        "W_size": len(w) <= rng.rho * k * x / 2,
        "expansion_property": has_expansion_property(g, rng),
    }
    rep.update(extra)
    rep["q"] = q
    return rep


@dataclass
class FamilySelection:
    indices: list[int]
    ball_sizes: list[int]
    threshold: float
    report: dict

    @property
    def hypotheses_hold(self) -> bool:
        return all(v is True for k, v in self.report.items() if k != "q")


def _prepare_family(g, sets, w, avoid_sets):
    sets = [g.check_vertices(a) for a in sets]
    w = g.check_vertices(w)
    avoid_sets = [g.check_vertices(a) for a in avoid_sets] if avoid_sets is not None else [frozenset()] * len(sets)
    if len(avoid_sets) != len(sets):
        raise ValueError("need one avoid set per set")
    return sets, w, avoid_sets


def _ball_size(g, a, r, avoid):
    src = sorted(a - avoid)
    if not src:
        return 0
    if r == 0:
        return len(src)
    dist, _, _ = _kernels.bfs(g.indptr, g.indices, np.array(src, dtype=np.int64), blocked_mask(g, avoid), max_depth=r)
    return int((dist >= 0).sum())


def select_expanding_family(
    g: Graph,
    rng: ExpansionRange,
    sets: Sequence[Iterable[int]],
    w: Iterable[int],
    avoid_sets: Optional[Sequence[Iterable[int]]],
    k: float,
    r: int,
    x: float,
    *,
    strict: bool = False,
) -> FamilySelection:
    """Indices j whose ball B^r_{G-(W+W_j)}(A_j) reaches (1 + rho/4)^r x.

    Hypotheses are evaluated and reported; when all of them hold, the
    guaranteed count |J| >= q - 2kr is asserted.
    """
    sets, w, avoid_sets = _prepare_family(g, sets, w, avoid_sets)
    q = len(sets)
    extra = {
        "q_gt_2kr": q > 2 * k * r,
        "kx_range": rng.a <= k * x < rng.b / 20,
        "k_ge_growth": k >= (1 + rng.rho / 4) ** r,
    }
    report = _family_hypotheses(g, rng, sets, w, avoid_sets, k, x, extra)
    threshold = (1 + rng.rho / 4) ** r * x
    sizes = [_ball_size(g, a, r, w | wi) for a, wi in zip(sets, avoid_sets)]
    chosen = [j for j, s in enumerate(sizes) if s >= threshold]
    sel = FamilySelection(chosen, sizes, threshold, report)
    if strict and not sel.hypotheses_hold:
        raise HypothesisError(report)
    if sel.hypotheses_hold:
        assert len(chosen) >= q - 2 * k * r, "ball-growth guarantee violated"
    return sel


def ball_hypotheses(
    g: Graph,
    rng: ExpansionRange,
    sets: Sequence[Iterable[int]],
    w: Iterable[int],
    avoid_sets: Optional[Sequence[Iterable[int]]],
    x: float,
    mode: str = "single",
    k: float = 1,
) -> dict:
    """Hypotheses behind ``find_large_ball_index``.

    ``mode="collective"`` checks the many-sets form (threshold kx/2);
    ``mode="single"`` checks the thin-layer form (threshold qx).
    """
    sets, w, avoid_sets = _prepare_family(g, sets, w, avoid_sets)
    q = len(sets)
    if mode == "collective":
        extra = {
            "q_large": q > 20 * k * math.log(max(k, 1)) / rng.rho,
            "kx_range": rng.a <= k * x < rng.b / 20,
        }
        return _family_hypotheses(g, rng, sets, w, avoid_sets, k, x, extra)
    if mode != "single":
        raise ValueError(f"unknown mode {mode!r}")
    return {
        "disjoint_sets": all(not (sets[i] & sets[j]) for i in range(q) for j in range(i + 1, q)),
        "avoid_disjoint": all(not (a & wi) and not (a & w) for a, wi in zip(sets, avoid_sets)),
        "sizes": all(len(a) >= x for a in sets),
        "qx_range": rng.a <= q * x <= rng.b / 4,
        "W_size": len(w) <= rng.rho * q * x / 2,
        "expansion_property": has_expansion_property(g, rng),
        "q": q,
    }


def find_large_ball_index(
    g: Graph,
    rng: ExpansionRange,
    sets: Sequence[Iterable[int]],
    w: Iterable[int],
    avoid_sets: Optional[Sequence[Iterable[int]]],
    threshold: float,
    r: int,
    *,
    mode: Optional[str] = None,
    x: float = 1,
    k: float = 1,
    report: Optional[dict] = None,
) -> Optional[int]:
    """First index whose r-ball in G - (W + W_i) has at least ``threshold`` vertices.

    With ``mode`` set, the matching hypothesis set is evaluated into ``report``.
    """
    if mode is not None and report is not None:
        report.update(ball_hypotheses(g, rng, sets, w, avoid_sets, x, mode, k))
    sets, w, avoid_sets = _prepare_family(g, sets, w, avoid_sets)
    for i, (a, wi) in enumerate(zip(sets, avoid_sets)):
        if _ball_size(g, a, r, w | wi) >= threshold:
            return i
    return None


class DeletionBound(NamedTuple):
    actual: Fraction
    bound: float
    within_hypothesis: bool


def deleted_avg_degree_bound(g: Graph, params: ExpanderParams, w: Iterable[int]) -> DeletionBound:
    """d(G - W) next to the lower bound rho(n) d / 20 it enjoys on expanders."""
    ws = g.check_vertices(w)
    d = average_degree(g)
    r = rho(g.n, params)
    rest = [v for v in range(g.n) if v not in ws]
    actual = average_degree(g.induced(rest).graph) if rest else Fraction(0)
    return DeletionBound(actual, r * float(d) / 20, len(ws) <= r * g.n / 20)
