"""Clique-subdivision certificates, their verifier, an exhaustive oracle and greedy builders."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .graph import Graph, GraphError, Subgraph, average_degree

ORACLE_THRESHOLD = 12


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class SubdivisionCertificate:
    """Core vertices plus one path per unordered core pair, keyed (min, max)."""

    t: int
    core: list[int]
    paths: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "core": list(self.core),
            "paths": {f"{u}-{v}": list(p) for (u, v), p in sorted(self.paths.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "SubdivisionCertificate":
        if isinstance(data, str):
            data = json.loads(data)
        paths = {}
        for key, p in data["paths"].items():
            a, b = key.split("-")
            paths[_pair(int(a), int(b))] = [int(x) for x in p]
        return cls(int(data["t"]), [int(v) for v in data["core"]], paths)

    def lift(self, sub: Subgraph) -> "SubdivisionCertificate":
        """Re-express in the host graph of ``sub``."""
        ids = sub.ids
        paths = {}
        for (u, v), p in self.paths.items():
            lifted = [ids[x] for x in p]
            if lifted[0] > lifted[-1]:
                lifted.reverse()
            paths[_pair(ids[u], ids[v])] = lifted
        return SubdivisionCertificate(self.t, [ids[v] for v in self.core], paths)

    def vertices(self) -> set[int]:
        out = set(self.core)
        for p in self.paths.values():
            out.update(p)
        return out


def make_certificate(core: Sequence[int], paths: Mapping[tuple[int, int], Sequence[int]]) -> SubdivisionCertificate:
    canon = {}
    for (u, v), p in paths.items():
        p = list(p)
        if p and p[0] > p[-1]:
            p.reverse()
        canon[_pair(u, v)] = p
    return SubdivisionCertificate(len(core), list(core), canon)


def trivial_certificate(g: Graph) -> Optional[SubdivisionCertificate]:
    """TK_2 from the lexicographically first edge, or TK_1 on a vertex."""
    for u, v in g.edges():
        return make_certificate([u, v], {(u, v): [u, v]})
    if g.n:
        return SubdivisionCertificate(1, [0], {})
    return None


# -- verification ---------------------------------------------------------------


def _violation(kind: str, message: str, **extra) -> dict:
    return {"kind": kind, "message": message, **extra}


def verify_subdivision(g: Graph, cert: Any) -> list[dict]:
    """Every violated certificate invariant; empty means valid. Never raises."""
    try:
        if isinstance(cert, (str, Mapping)):
            cert = SubdivisionCertificate.from_json(cert)
        core = list(cert.core)
        paths = dict(cert.paths)
        t = cert.t
    except Exception as exc:  # malformed input is reported, not raised
        return [_violation("malformed", f"unreadable certificate: {exc}")]
    out: list[dict] = []
    if not isinstance(t, int) or t != len(core):
        out.append(_violation("core size", f"t={t} but core has {len(core)} vertices"))
    bad_core = [v for v in core if not isinstance(v, (int, np.integer)) or not 0 <= v < g.n]
    for v in bad_core:
        out.append(_violation("vertex range", f"core vertex {v} not in graph", vertex=v))
    if len(set(core)) != len(core):
        out.append(_violation("core repeat", "core vertices are not distinct"))
    core_set = set(core)
    expected = {_pair(u, v) for u, v in combinations(core_set, 2)}
    keys = set()
    for key in paths:
        try:
            keys.add(_pair(int(key[0]), int(key[1])))
        except Exception:
            out.append(_violation("malformed", f"bad pair key {key!r}"))
    for pr in sorted(expected - keys):
        out.append(_violation("missing path", f"no path for pair {pr[0]}-{pr[1]}", pair=list(pr)))
    for pr in sorted(keys - expected):
        out.append(_violation("extra path", f"pair {pr[0]}-{pr[1]} is not a core pair", pair=list(pr)))

    owner: dict[int, tuple[int, int]] = {}
    for key, p in sorted(paths.items(), key=lambda kv: str(kv[0])):
        try:
            pr = _pair(int(key[0]), int(key[1]))
            p = [int(x) for x in p]
        except Exception:
            out.append(_violation("malformed", f"path for {key!r} is not a vertex list"))
            continue
        tag = f"{pr[0]}-{pr[1]}"
        if len(p) < 2 or {p[0], p[-1]} != set(pr) or p[0] == p[-1]:
            out.append(_violation("endpoints", f"path {tag} does not join {pr[0]} and {pr[1]}", pair=list(pr)))
        if len(set(p)) != len(p):
            out.append(_violation("repeated vertex", f"path {tag} repeats a vertex", pair=list(pr)))
        for x in p:
            if not 0 <= x < g.n:
                out.append(_violation("vertex range", f"path {tag} uses vertex {x} outside graph", vertex=x))
        for a, b in zip(p, p[1:]):
            if 0 <= a < g.n and 0 <= b < g.n and not g.has_edge(a, b):
                out.append(_violation("missing edge", f"path {tag} uses non-edge {a}-{b}", edge=[a, b], pair=list(pr)))
        for x in set(p[1:-1]):
            if x in core_set:
                out.append(_violation("core internal", f"core vertex {x} is internal to path {tag}", vertex=x))
            elif x in owner and owner[x] != pr:
                o = owner[x]
                out.append(
                    _violation(
                        "internal overlap",
                        f"vertex {x} is internal to paths {o[0]}-{o[1]} and {tag}",
                        vertex=x,
                        pair=list(pr),
                    )
                )
            else:
                owner[x] = pr
    return out


def is_valid(g: Graph, cert: Any) -> bool:
    return not verify_subdivision(g, cert)


# -- exhaustive oracle ------------------------------------------------------------


def _chordless_paths(masks: Sequence[int], u: int, v: int, free: int, limit: int = -1) -> list[int]:
    """Internal-vertex masks of induced u-v paths whose interior lies in ``free``."""
    if (masks[u] >> v) & 1:
        return [0]
    out: list[int] = []

    def extend(last, inner, forbidden):
        cand = masks[last] & free & ~inner & ~forbidden
        while cand:
            if 0 <= limit <= len(out):
                return
            low = cand & -cand
            cand ^= low
            x = low.bit_length() - 1
            if (masks[x] >> v) & 1:
                out.append(inner | low)
            else:
                # later vertices may touch only their predecessor on the path
                extend(x, inner | low, forbidden | masks[last] | (1 << last))

    extend(u, 0, 0)
    return out


def _reachable(masks, u, v, free) -> bool:
    seen = masks[u] & free
    frontier = seen
    if (masks[u] >> v) & 1:
        return True
    while frontier:
        nb = 0
        f = frontier
        while f:
            low = f & -f
            f ^= low
            nb |= masks[low.bit_length() - 1]
        if (nb >> v) & 1:
            return True
        frontier = nb & free & ~seen
        seen |= frontier
    return False


def _mask_to_path(masks, u, v, inner: int) -> list[int]:
    path = [u]
    left = inner
    cur = u
    while left:
        step = masks[cur] & left
        x = (step & -step).bit_length() - 1
        path.append(x)
        left &= ~(1 << x)
        cur = x
    path.append(v)
    return path


def _embed_core(masks, core: Sequence[int], n: int):
    """Path system for ``core`` (internal-mask per pair) or None."""
    core_mask = 0
    for c in core:
        core_mask |= 1 << c
    free = ((1 << n) - 1) & ~core_mask
    need = [p for p in combinations(core, 2) if not (masks[p[0]] >> p[1]) & 1]
    if len(need) > bin(free).count("1"):
        return None
    for c in core:
        partners = sum(1 for p in need if c in p)
        if partners > bin(masks[c] & free).count("1"):
            return None
    failed: set = set()

    def solve(todo: tuple, free: int):
        if not todo:
            return {}
        key = (todo, free)
        if key in failed:
            return None
        best = None
        for pr in todo:
            if not _reachable(masks, pr[0], pr[1], free):
                failed.add(key)
                return None
            opts = _chordless_paths(masks, pr[0], pr[1], free, limit=64)
            if best is None or len(opts) < best[1]:
                best = (pr, len(opts))
        pr = best[0]
        rest = tuple(p for p in todo if p != pr)
        opts = sorted(_chordless_paths(masks, pr[0], pr[1], free), key=lambda m: (bin(m).count("1"), m))
        for inner in opts:
            sub = solve(rest, free & ~inner)
            if sub is not None:
                sub[pr] = inner
                return sub
        failed.add(key)
        return None

    inner = solve(tuple(need), free)
    if inner is None:
        return None
    paths = {}
    for u, v in combinations(core, 2):
        pr = _pair(u, v)
        paths[pr] = _mask_to_path(masks, pr[0], pr[1], inner.get(pr, 0))
    return paths


def max_subdivision_bruteforce(
    g: Graph, cap: Optional[int] = None, *, threshold: int = ORACLE_THRESHOLD
) -> tuple[int, Optional[SubdivisionCertificate]]:
    """Largest t <= cap with a K_t-subdivision, with a certificate, by exhaustive search."""
    if g.n > threshold:
        raise GraphError(f"oracle limited to n <= {threshold}, got n={g.n}")
    if g.n == 0:
        return 0, None
    masks = [int(x) for x in g.adj_masks()]
    top = min(cap if cap is not None else g.n, g.max_degree() + 1, g.n)
    degs = g.degrees
    for t in range(top, 1, -1):
        cands = [v for v in range(g.n) if degs[v] >= t - 1]
        for core in combinations(cands, t):
            paths = _embed_core(masks, core, g.n)
            if paths is not None:
                return t, make_certificate(core, paths)
    return 1, SubdivisionCertificate(1, [0], {})


# -- greedy builders ---------------------------------------------------------------


def _shortest(g: Graph, u: int, v: int, blocked: np.ndarray) -> Optional[list[int]]:
    if g.has_edge(u, v):
        return [u, v]
    target = np.zeros(g.n, dtype=np.bool_)
    target[v] = True
    was_u, was_v = blocked[u], blocked[v]
    blocked[u] = blocked[v] = False
    _, parent, hit = _kernels.bfs(g.indptr, g.indices, np.array([u], dtype=np.int64), blocked, target, -1, True)
    blocked[u], blocked[v] = was_u, was_v
    if hit < 0:
        return None
    path = [int(hit)]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    path.reverse()
    return path


def _ranked(g: Graph, candidates: Optional[Iterable[int]], min_degree: int) -> list[int]:
    degs = g.degrees
    pool = range(g.n) if candidates is None else sorted(g.check_vertices(candidates))
    return sorted((v for v in pool if degs[v] >= min_degree), key=lambda v: (-int(degs[v]), v))


def _core_sets(ranked: list[int], degs, t: int, limit: int):
    """t-subsets of ``ranked`` in non-increasing degree sum (k-best enumeration)."""
    n = len(ranked)
    if n < t:
        return
    start = tuple(range(t))
    score = lambda c: -sum(int(degs[ranked[i]]) for i in c)
    heap = [(score(start), start)]
    seen = {start}
    emitted = 0
    while heap and emitted < limit:
        _, c = heapq.heappop(heap)
        yield [ranked[i] for i in c]
        emitted += 1
        for i in range(t):
            nxt_lim = c[i + 1] if i + 1 < t else n
            if c[i] + 1 < nxt_lim:
                nc = c[:i] + (c[i] + 1,) + c[i + 1:]
                if nc not in seen:
                    seen.add(nc)
                    heapq.heappush(heap, (score(nc), nc))


def _route_pairs(g: Graph, core: list[int], order: list[tuple[int, int]], reserved=()):
    """Shortest paths pair by pair; returns (paths, None) or (None, failed pair)."""
    blocked = np.zeros(g.n, dtype=np.bool_)
    blocked[core] = True
    for r in reserved:
        blocked[r] = True
    paths = {}
    for u, v in order:
        p = _shortest(g, u, v, blocked)
        if p is None:
            return None, (u, v)
        blocked[p] = True
        paths[_pair(u, v)] = p
    return paths, None


def greedy_subdivision_direct(
    g: Graph,
    t: int,
    *,
    candidates: Optional[Iterable[int]] = None,
    max_cores: int = 50,
    max_restarts: int = 1000,
) -> Optional[SubdivisionCertificate]:
    """Greedy K_t-subdivision: high-degree core, then shortest disjoint paths pair by pair.

    Pairs follow the double loop over the core; a pair that fails moves to
    the front and the routing restarts. Core sets are tried in descending
    degree sum, at most ``max_cores`` of them.
    """
    if t < 2:
        raise ValueError("t must be >= 2")
    ranked = _ranked(g, candidates, t - 1)
    degs = g.degrees
    restarts = 0
    for core in _core_sets(ranked, degs, t, max_cores):
        order = [(core[i], core[j]) for i in range(t) for j in range(i + 1, t)]
        while True:
            paths, failed = _route_pairs(g, core, order)
            if paths is not None:
                return make_certificate(core, paths)
            restarts += 1
            if restarts >= max_restarts:
                return None
            if order[0] == failed:
                break
            order.remove(failed)
            order.insert(0, failed)
    return None


def greedy_grow_subdivision(
    g: Graph,
    *,
    reserve: int = 0,
    max_failures: int = 64,
    candidates: Optional[Iterable[int]] = None,
) -> Optional[SubdivisionCertificate]:
    """Grow a clique subdivision one core vertex at a time.

    Candidates are tried in descending degree. Each new core vertex is joined
    to every existing core vertex by a shortest path avoiding everything used
    so far; the top ``reserve`` untried candidates stay off-limits to paths.
    Stops after ``max_failures`` consecutive rejected candidates.
    """
    if g.m == 0:
        return trivial_certificate(g)
    ranked = _ranked(g, candidates, 1)
    degs = g.degrees
    blocked = np.zeros(g.n, dtype=np.bool_)
    core: list[int] = []
    paths: dict = {}
    fails = 0
    for idx, v in enumerate(ranked):
        if blocked[v]:
            continue
        if degs[v] < len(core):
            break
        res = np.zeros(g.n, dtype=np.bool_)
        upcoming = [w for w in ranked[idx + 1: idx + 1 + reserve] if not blocked[w]]
        res[upcoming] = True
        trial = blocked | res
        trial[v] = True
        added = {}
        ok = True
        # route to the nearest-ranked cores first
        for c in core:
            p = _shortest(g, v, c, trial)
            if p is None:
                ok = False
                break
            trial[p] = True
            added[_pair(v, c)] = p
        if ok:
            core.append(v)
            paths.update(added)
            blocked[v] = True
            for p in added.values():
                blocked[p] = True
            fails = 0
        else:
            fails += 1
            if fails >= max_failures:
                break
    if len(core) < 2:
        return trivial_certificate(g)
    return make_certificate(core, paths)


def greedy_best_subdivision(
    g: Graph,
    *,
    t_max: Optional[int] = None,
    max_cores: int = 8,
    max_restarts: int = 200,
    reserves: Sequence[int] = (0, 4),
) -> Optional[SubdivisionCertificate]:
    """Best of incremental growth and a downward search with the direct greedy."""
    best = trivial_certificate(g)
    if g.m == 0:
        return best
    for r in reserves:
        c = greedy_grow_subdivision(g, reserve=r)
        if c is not None and (best is None or c.t > best.t):
            best = c
    hi = g.max_degree() + 1 if t_max is None else t_max
    t = best.t + 1
    while t <= hi:
        c = greedy_subdivision_direct(g, t, max_cores=max_cores, max_restarts=max_restarts)
        if c is None:
            break
        best = c
        t += 1
    return best


@dataclass
class ReduceResult:
    graph: Subgraph
    certificate: Optional[SubdivisionCertificate]
    deleted: list[int]
    checks: dict


def bounded_maxdeg_reduce(
    g: Graph,
    params,
    degree_cap: float,
    t_target: int,
    *,
    deletion_threshold: Optional[float] = None,
) -> ReduceResult:
    """Either embed K_t on the high-degree vertices or delete them.

    With at least ``t_target`` vertices above ``degree_cap`` the direct
    greedy is run with its core drawn from them. Otherwise those vertices
    are removed; |H| >= n/2 and delta(H) >= d/4 are evaluated into
    ``checks`` when fewer than ``deletion_threshold`` were deleted.
    """
    if g.n == 0:
        raise GraphError("empty graph")
    d = average_degree(g)
    degs = g.degrees
    high = [v for v in range(g.n) if degs[v] > degree_cap]
    # a cap below d(G) is outside the intended regime but still well defined
    checks: dict = {"high_degree_count": len(high), "cap_at_least_d": degree_cap >= d}
    if len(high) >= t_target >= 2:
        cert = greedy_subdivision_direct(g, t_target, candidates=high)
        if cert is not None:
            return ReduceResult(Subgraph.identity(g), cert, [], checks)
    if not high:
        return ReduceResult(Subgraph.identity(g), None, [], checks)
    keep = [v for v in range(g.n) if degs[v] <= degree_cap]
    sub = g.induced(keep)
    if deletion_threshold is not None and len(high) < deletion_threshold:
        h = sub.graph
        checks["half_order"] = 2 * h.n >= g.n
        checks["min_degree_quarter"] = h.n > 0 and 4 * h.min_degree() >= d
    return ReduceResult(sub, None, high, checks)
