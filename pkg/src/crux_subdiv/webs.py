"""Stars, units and webs: structures, validators, builders and the connectors."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .graph import Graph, is_path
from .subdivision import SubdivisionCertificate, make_certificate


@dataclass(frozen=True)
class Star:
    center: int
    leaves: tuple[int, ...]

    def vertices(self) -> set[int]:
        return {self.center, *self.leaves}


@dataclass
class UnitBranch:
    path: list[int]  # unit center -> star center
    star: Star


@dataclass
class Unit:
    center: int
    branches: list[UnitBranch]
    h1: int
    h2: int
    h3: int

    def interior(self) -> set[int]:
        out = {self.center}
        for b in self.branches:
            out.update(b.path)
            out.add(b.star.center)
        return out

    def exterior(self) -> set[int]:
        return {x for b in self.branches for x in b.star.leaves}

    def vertices(self) -> set[int]:
        return self.interior() | self.exterior()


@dataclass
class WebBranch:
    path: list[int]  # web center -> unit center
    unit: Unit


@dataclass
class Web:
    center: int
    branches: list[WebBranch]
    h4: int
    h5: int
    h1: int
    h2: int
    h3: int

    def core(self) -> set[int]:
        out = {self.center}
        for b in self.branches:
            out.update(b.path)
        return out

    def interior(self) -> set[int]:
        out = self.core()
        for b in self.branches:
            out |= b.unit.interior()
        return out

    def exterior(self) -> set[int]:
        out: set[int] = set()
        for b in self.branches:
            out |= b.unit.exterior()
        return out

    def vertices(self) -> set[int]:
        return self.interior() | self.exterior()


# -- validators ----------------------------------------------------------------


def _v(kind, message, **extra):
    return {"kind": kind, "message": message, **extra}


def validate_star(g: Graph, s: Star, min_leaves: int = 1) -> list[dict]:
    out = []
    if not 0 <= s.center < g.n:
        return [_v("vertex range", f"star center {s.center} outside graph")]
    if s.center in s.leaves:
        out.append(_v("star", f"center {s.center} listed as its own leaf"))
    if len(set(s.leaves)) != len(s.leaves):
        out.append(_v("star", f"star at {s.center} repeats a leaf"))
    for x in s.leaves:
        if not 0 <= x < g.n or not g.has_edge(s.center, x):
            out.append(_v("star edge", f"leaf {x} not adjacent to center {s.center}", vertex=x))
    if len(set(s.leaves)) < min_leaves:
        out.append(_v("star size", f"star at {s.center} has {len(s.leaves)} < {min_leaves} leaves"))
    return out


def validate_unit(g: Graph, u: Unit) -> list[dict]:
    out = []
    if len(u.branches) < u.h1:
        out.append(_v("branch count", f"unit at {u.center} has {len(u.branches)} < h1={u.h1} branches"))
    star_owner: dict[int, int] = {}
    for i, b in enumerate(u.branches):
        out += validate_star(g, b.star, u.h2)
        for x in b.star.vertices():
            if x in star_owner and star_owner[x] != i:
                out.append(_v("star overlap", f"stars of branches {star_owner[x]} and {i} share {x}", vertex=x))
            star_owner[x] = i
    if u.center in star_owner:
        out.append(_v("center in star", f"unit center {u.center} lies in a star"))
    seen_internal: dict[int, int] = {}
    for i, b in enumerate(u.branches):
        p = b.path
        if not is_path(g, p) or p[0] != u.center or p[-1] != b.star.center:
            out.append(_v("branch path", f"branch {i} is not a path from {u.center} to {b.star.center}"))
            continue
        if len(p) - 1 > u.h3:
            out.append(_v("path length", f"branch {i} path has length {len(p) - 1} > h3={u.h3}"))
        for x in p[1:-1]:
            if x in star_owner:
                out.append(_v("path meets star", f"branch {i} path passes star vertex {x}", vertex=x))
            if x in seen_internal:
                out.append(
                    _v("internal overlap", f"branches {seen_internal[x]} and {i} share internal vertex {x}", vertex=x)
                )
            seen_internal[x] = i
        if len(p) >= 2 and p[-1] in seen_internal:
            out.append(_v("internal overlap", f"star center {p[-1]} internal to another branch", vertex=p[-1]))
    both = u.interior() & u.exterior()
    if both:
        out.append(_v("interior/exterior", f"vertices {sorted(both)} are both interior and exterior"))
    return out


def validate_web(g: Graph, w: Web) -> list[dict]:
    out = []
    if len(w.branches) < w.h4:
        out.append(_v("branch count", f"web at {w.center} has {len(w.branches)} < h4={w.h4} units"))
    owner: dict[int, int] = {}
    for i, b in enumerate(w.branches):
        u = b.unit
        for viol in validate_unit(g, u):
            out.append({**viol, "unit": i})
        if u.h1 < w.h1 or u.h2 < w.h2 or u.h3 > w.h3:
            out.append(_v("unit params", f"unit {i} parameters weaker than the web requires"))
        if len(u.branches) < w.h1:
            out.append(_v("branch count", f"unit {i} has {len(u.branches)} < h1={w.h1} branches"))
        for x in u.vertices():
            if x in owner and owner[x] != i:
                out.append(_v("unit overlap", f"units {owner[x]} and {i} share vertex {x}", vertex=x))
            owner[x] = i
    if w.center in owner:
        out.append(_v("center in unit", f"web center {w.center} lies in a unit"))
    seen: dict[int, int] = {}
    for i, b in enumerate(w.branches):
        p = b.path
        if not is_path(g, p) or p[0] != w.center or p[-1] != b.unit.center:
            out.append(_v("web path", f"branch {i} is not a path from {w.center} to its unit center"))
            continue
        if len(p) - 1 > w.h5:
            out.append(_v("path length", f"branch {i} path has length {len(p) - 1} > h5={w.h5}"))
        for x in p[1:-1]:
            if x in owner:
                out.append(_v("path meets unit", f"branch {i} path passes unit vertex {x}", vertex=x))
            if x in seen:
                out.append(_v("internal overlap", f"web paths {seen[x]} and {i} share vertex {x}", vertex=x))
            seen[x] = i
    return out


# -- stars -----------------------------------------------------------------------


def find_disjoint_stars(
    g: Graph,
    w: Iterable[int],
    leaf_count: int,
    target_count: int,
    *,
    centers: Optional[Iterable[int]] = None,
    leaf_pool: Optional[Iterable[int]] = None,
) -> list[Star]:
    """Greedy vertex-disjoint K_{1,leaf_count} stars in G - W.

    The center is the vertex of highest remaining degree (lowest id on ties);
    its leaves are its remaining neighbours of lowest remaining degree, so
    high-degree vertices stay free for later centers. ``centers`` and
    ``leaf_pool`` restrict where centers and leaves may come from.
    """
    if leaf_count < 1:
        raise ValueError("leaf_count must be >= 1")
    avail = np.ones(g.n, dtype=np.bool_)
    ws = list(g.check_vertices(w))
    avail[ws] = False
    center_ok = np.ones(g.n, dtype=np.bool_)
    if centers is not None:
        center_ok[:] = False
        center_ok[list(g.check_vertices(centers))] = True
    leaf_ok = np.ones(g.n, dtype=np.bool_)
    if leaf_pool is not None:
        leaf_ok[:] = False
        leaf_ok[list(g.check_vertices(leaf_pool))] = True
    owner = np.repeat(np.arange(g.n), np.diff(g.indptr))
    stars: list[Star] = []
    while len(stars) < target_count:
        usable = avail & leaf_ok
        rem = np.bincount(owner, weights=usable[g.indices], minlength=g.n).astype(np.int64)
        score = np.where(avail & center_ok & (rem >= leaf_count), rem, -1)
        c = int(np.argmax(score))
        if score[c] < 0:
            break
        nb = g.neighbors(c)
        nb = nb[usable[nb] & (nb != c)]
        order = np.lexsort((nb, rem[nb]))
        leaves = tuple(sorted(int(x) for x in nb[order[:leaf_count]]))
        stars.append(Star(c, leaves))
        avail[c] = False
        avail[list(leaves)] = False
    return stars


# -- path search ----------------------------------------------------------------


def _bfs_path(g: Graph, sources, targets, blocked: np.ndarray, max_len: int = -1):
    src = np.fromiter(sources, dtype=np.int64)
    if src.size == 0:
        return None
    is_target = np.zeros(g.n, dtype=np.bool_)
    tg = np.fromiter(targets, dtype=np.int64)
    if tg.size == 0:
        return None
    is_target[tg] = True
    was = blocked[src].copy(), blocked[tg].copy()
    blocked[src] = False
    blocked[tg] = False
    _, parent, hit = _kernels.bfs(g.indptr, g.indices, src, blocked, is_target, max_len, True)
    blocked[src], blocked[tg] = was
    if hit < 0:
        return None
    path = [int(hit)]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    path.reverse()
    return path


# -- units -----------------------------------------------------------------------


def build_unit(
    g: Graph,
    w: Iterable[int],
    s_stars: Sequence[Star],
    r_stars: Sequence[Star],
    h1: int,
    h2: int,
    h3: int,
    *,
    r_multiplicity: Optional[int] = None,
    trace: Optional[list] = None,
) -> Optional[Unit]:
    """Grow a (h1, h2, h3)-unit in G - W from two star families.

    Rounds go over the S-stars in order. Each round gives every S-star one
    more path, from its center to the center of an R-star it does not use
    yet, of length at most h3, in G - W minus the other star centers and
    minus what that S-star already holds. The first S-star
    to reach h1 paths becomes the unit center; R-star leaves lying on its
    paths are dropped.
    """
    if min(h1, h2) < 1 or h3 < 2:
        raise ValueError("need h1, h2 >= 1 and h3 >= 2")
    if not s_stars or not r_stars:
        return None
    ws = g.check_vertices(w)
    centers = {s.center for s in s_stars} | {s.center for s in r_stars}
    base = np.zeros(g.n, dtype=np.bool_)
    base[list(ws | centers)] = True
    r_owner = {s.center: j for j, s in enumerate(r_stars)}
    mult = [0] * len(r_stars)
    state = [{"paths": [], "used": set(), "js": set(), "dead": False} for _ in s_stars]
    progress = True
    rounds = 0
    while progress:
        progress = False
        rounds += 1
        for i, s in enumerate(s_stars):
            st = state[i]
            if st["dead"]:
                continue
            if s.center in ws:
                st["dead"] = True
                continue
            targets = [
                r.center
                for j, r in enumerate(r_stars)
                if j not in st["js"] and (r_multiplicity is None or mult[j] < r_multiplicity) and r.center not in ws
            ]
            blocked = base.copy()
            if st["used"]:
                blocked[list(st["used"])] = True
            # vertices of R-stars this unit already holds stay intact
            for j in st["js"]:
                blocked[list(r_stars[j].vertices())] = True
            p = _bfs_path(g, [s.center], targets, blocked, h3)
            if p is None:
                st["dead"] = True
                continue
            j = r_owner[p[-1]]
            st["paths"].append((p, j))
            st["used"].update(p)
            st["js"].add(j)
            mult[j] += 1
            progress = True
            if len(st["paths"]) >= h1:
                unit = _assemble_unit(s, st["paths"], r_stars, h1, h2, h3)
                if unit is not None:
                    if trace is not None:
                        trace.append({"rounds": rounds, "center": s.center, "paths": len(st["paths"])})
                    return unit
                # drop partners whose stars lost too many leaves; they stay excluded
                used = {x for q, _ in st["paths"] for x in q}
                st["paths"] = [
                    (q, jj) for q, jj in st["paths"] if sum(1 for x in r_stars[jj].leaves if x not in used) >= h2
                ]
                st["used"] = {x for q, _ in st["paths"] for x in q}
    return None


def _assemble_unit(s: Star, paths, r_stars, h1, h2, h3) -> Optional[Unit]:
    used = {x for p, _ in paths for x in p}
    branches = []
    for p, j in paths:
        r = r_stars[j]
        leaves = tuple(x for x in r.leaves if x not in used)
        if len(leaves) < h2:
            return None
        branches.append(UnitBranch(p, Star(r.center, leaves)))
    return Unit(s.center, branches, h1, h2, h3)


def build_units(
    g: Graph, w: Iterable[int], stars: Sequence[Star], count: int, h1: int, h2: int, h3: int
) -> list[Unit]:
    """Up to ``count`` pairwise vertex-disjoint units; each new one avoids the earlier ones."""
    units: list[Unit] = []
    ws = set(g.check_vertices(w))
    pool = list(stars)
    while len(units) < count and len(pool) >= h1 + 1:
        split = max(1, len(pool) // (h1 + 1))
        s_stars, r_stars = pool[:split], pool[split:]
        u = build_unit(g, ws, s_stars, r_stars, h1, h2, h3)
        if u is None:
            break
        units.append(u)
        taken = u.vertices()
        ws |= taken
        pool = [s for s in pool if not (s.vertices() & taken)]
    return units


# -- webs ------------------------------------------------------------------------


def build_web(
    g: Graph,
    w: Iterable[int],
    stars: Sequence[Star],
    units: Sequence[Unit],
    h4: int,
    h5: int,
    *,
    trace: Optional[list] = None,
) -> Optional[Web]:
    """A (h4, h5, h1/2, h2/2, h3)-web in G - W, centred at one of the star centers.

    For each star center c in turn, shortest paths of length <= h5 are grown
    from c to unused unit centers in G - W - (other star centers) - (earlier
    paths). Once 2 h4 paths exist, units whose vertices the paths touch at
    h1/2 or more places are dropped; surviving units lose hit branches and
    hit leaves, and the first h4 that keep enough of both form the web.
    """
    if h4 < 1 or h5 < 1:
        raise ValueError("need h4, h5 >= 1")
    if not units:
        return None
    ws = g.check_vertices(w)
    h1 = min(u.h1 for u in units)
    h2 = min(u.h2 for u in units)
    h3 = max(u.h3 for u in units)
    h1_half, h2_half = max(1, (h1 + 1) // 2), max(1, (h2 + 1) // 2)
    unit_of_center = {u.center: k for k, u in enumerate(units)}
    star_centers = {s.center for s in stars}
    for s in stars:
        if any(s.center in u.vertices() for u in units):
            continue
        blocked = np.zeros(g.n, dtype=np.bool_)
        blocked[list(ws | (star_centers - {s.center}))] = True
        paths: list[tuple[list[int], int]] = []
        used_units: set[int] = set()
        while len(paths) < 2 * h4:
            targets = [u.center for k, u in enumerate(units) if k not in used_units]
            p = _bfs_path(g, [s.center], targets, blocked, h5)
            if p is None:
                break
            k = unit_of_center[p[-1]]
            paths.append((p, k))
            used_units.add(k)
            blocked[p[1:]] = True
        if len(paths) < h4:
            continue
        web = _prune_web(s.center, paths, units, h4, h5, h1_half, h2_half, h3)
        if trace is not None:
            trace.append({"center": s.center, "paths": len(paths), "ok": web is not None})
        if web is not None:
            return web
    return None


def _prune_web(center, paths, units, h4, h5, h1_half, h2_half, h3) -> Optional[Web]:
    hit: set[int] = {center}
    for p, _ in paths:
        hit.update(p)
    branches = []
    for p, k in paths:
        u = units[k]
        own_center_only = hit & u.vertices() - {u.center}
        others_hit = any(u.center in q for q, kk in paths if kk != k)
        if others_hit or len(own_center_only) >= h1_half:
            continue
        kept = []
        for b in u.branches:
            if set(b.path[1:]) & hit:
                continue
            leaves = tuple(x for x in b.star.leaves if x not in hit)
            if len(leaves) < h2_half:
                continue
            kept.append(UnitBranch(b.path, Star(b.star.center, leaves)))
        if len(kept) < h1_half:
            continue
        branches.append(WebBranch(p, Unit(u.center, kept, h1_half, h2_half, u.h3)))
        if len(branches) == h4:
            break
    if len(branches) < h4:
        return None
    # paths may only meet units at their centers
    unit_vertices = set()
    for b in branches:
        unit_vertices |= b.unit.vertices()
    for b in branches:
        if set(b.path[1:-1]) & unit_vertices:
            return None
    return Web(center, branches, h4, h5, h1_half, h2_half, h3)


def build_webs(
    g: Graph,
    w: Iterable[int],
    stars: Sequence[Star],
    units: Sequence[Unit],
    count: int,
    h4: int,
    h5: int,
) -> list[Web]:
    """Up to ``count`` pairwise vertex-disjoint webs."""
    webs: list[Web] = []
    ws = set(g.check_vertices(w))
    pool_units = list(units)
    pool_stars = list(stars)
    while len(webs) < count and pool_units and pool_stars:
        web = build_web(g, ws, pool_stars, pool_units, h4, h5)
        if web is None:
            break
        webs.append(web)
        taken = web.vertices()
        ws |= taken
        pool_units = [u for u in pool_units if not (u.vertices() & taken)]
        pool_stars = [s for s in pool_stars if not (s.vertices() & taken)]
    return webs


# -- connecting units and webs -------------------------------------------------------


@dataclass
class _BranchState:
    path: list[int]  # hub (unit center) -> star center
    center: int
    leaves: list[int]
    deleted: bool = False
    leaves_used: int = 0


@dataclass
class _UnitState:
    path: list[int]  # web center -> unit center (just [c] for bare units)
    center: int
    branches: list[_BranchState]
    spent: bool = False
    deleted: bool = False


@dataclass
class _HubState:
    center: int
    units: list[_UnitState]
    deleted: bool = False
    core: set = field(default_factory=set)
    interior: set = field(default_factory=set)


def _unit_state(path, u: Unit) -> _UnitState:
    bs = [_BranchState(b.path, b.star.center, list(b.star.leaves)) for b in u.branches]
    return _UnitState(path, u.center, bs)


def _hub_from_web(w: Web) -> _HubState:
    h = _HubState(w.center, [_unit_state(b.path, b.unit) for b in w.branches])
    h.core = w.core()
    h.interior = w.interior()
    return h


def _hub_from_unit(u: Unit) -> _HubState:
    """A bare unit acts as a web whose units are its single branches."""
    units = [
        _UnitState(b.path, b.star.center, [_BranchState([b.star.center], b.star.center, list(b.star.leaves))])
        for b in u.branches
    ]
    h = _HubState(u.center, units)
    # connections avoid every unit interior, not just the endpoints'
    h.core = u.interior()
    h.interior = u.interior()
    return h


class _Connector:
    """Shared state of the connection loop: used vertices and the deletion rules."""

    def __init__(self, g: Graph, hubs: list[_HubState], w: Iterable[int]):
        self.g = g
        self.hubs = hubs
        self.used = np.zeros(g.n, dtype=np.bool_)
        self.fixed = np.zeros(g.n, dtype=np.bool_)
        self.fixed[list(g.check_vertices(w))] = True
        for h in hubs:
            self.fixed[list(h.core)] = True
        self.leaf_at: dict[int, tuple[int, int, int]] = {}
        self.interior_at: dict[int, list[tuple[int, int, int]]] = {}
        for a, h in enumerate(hubs):
            for ui, u in enumerate(h.units):
                self.interior_at.setdefault(u.center, []).append((a, ui, -1))
                for bi, b in enumerate(u.branches):
                    for x in b.leaves:
                        self.leaf_at[x] = (a, ui, bi)
                    for x in b.path[1:]:
                        self.interior_at.setdefault(x, []).append((a, ui, bi))
        self.deleted_webs = 0
        self.deleted_units = 0

    def _ends(self, a: int) -> list[int]:
        out = []
        for u in self.hubs[a].units:
            if u.spent or u.deleted:
                continue
            for b in u.branches:
                if not b.deleted:
                    out.extend(x for x in b.leaves if not self.used[x])
        return out

    def _extend(self, leaf: int) -> list[int]:
        """Hub center -> unit center -> star center -> leaf."""
        a, ui, bi = self.leaf_at[leaf]
        u = self.hubs[a].units[ui]
        return u.path + u.branches[bi].path[1:] + [leaf]

    def connect(self, a: int, b: int) -> Optional[list[int]]:
        if self.hubs[a].deleted or self.hubs[b].deleted:
            return None
        src, dst = self._ends(a), self._ends(b)
        if not src or not dst:
            return None
        blocked = self.used | self.fixed
        blocked[list(self.hubs[a].interior | self.hubs[b].interior)] = True
        mid = _bfs_path(self.g, src, dst, blocked)
        if mid is None:
            return None
        return self._extend(mid[0])[:-1] + mid + self._extend(mid[-1])[::-1][1:]

    def commit(self, path: list[int], first_leaf: int, last_leaf: int):
        for leaf in (first_leaf, last_leaf):
            a, ui, _ = self.leaf_at[leaf]
            self.hubs[a].units[ui].spent = True
        self.used[path] = True
        touched = set()
        for x in path:
            loc = self.leaf_at.get(x)
            if loc is not None:
                a, ui, bi = loc
                self.hubs[a].units[ui].branches[bi].leaves_used += 1
                touched.add((a, ui))
            for a, ui, bi in self.interior_at.get(x, ()):
                if bi < 0:
                    u = self.hubs[a].units[ui]
                    if not u.spent and not u.deleted:
                        u.deleted = True
                        self.deleted_units += 1
                else:
                    self.hubs[a].units[ui].branches[bi].deleted = True
                touched.add((a, ui))
        for a, ui in touched:
            u = self.hubs[a].units[ui]
            for b in u.branches:
                if 2 * b.leaves_used > len(b.leaves):
                    b.deleted = True
            dead = sum(1 for b in u.branches if b.deleted)
            # spent units are consumed, not deleted
            if not u.spent and not u.deleted and 2 * dead > len(u.branches):
                u.deleted = True
                self.deleted_units += 1
            hub = self.hubs[a]
            if not hub.deleted and 2 * sum(1 for x in hub.units if x.deleted) > len(hub.units):
                hub.deleted = True
                self.deleted_webs += 1

    def snapshot(self):
        return copy.deepcopy((self.hubs, self.used, self.deleted_webs, self.deleted_units))

    def restore(self, snap):
        self.hubs, self.used, self.deleted_webs, self.deleted_units = snap


def _connect_hubs(
    g: Graph, hubs: list[_HubState], s: Optional[int], w: Iterable[int], trace: Optional[list]
) -> Optional[SubdivisionCertificate]:
    con = _Connector(g, hubs, w)
    accepted: list[int] = []
    paths: dict = {}
    for k in range(len(hubs)):
        if s is not None and len(accepted) >= s:
            break
        if con.hubs[k].deleted:
            continue
        snap = con.snapshot()
        new = {}
        for j in accepted:
            p = con.connect(j, k)
            if p is None:
                break
            la = next(x for x in p if x in con.leaf_at and con.leaf_at[x][0] == j)
            lb = next(x for x in reversed(p) if x in con.leaf_at and con.leaf_at[x][0] == k)
            con.commit(p, la, lb)
            new[(j, k)] = p
        ok = len(new) == len(accepted)
        if ok:
            accepted.append(k)
            paths.update(new)
        else:
            con.restore(snap)
            con.hubs[k].deleted = True
            con.deleted_webs += 1
        if trace is not None:
            trace.append(
                {"hub": k, "accepted": ok, "deleted_units": con.deleted_units, "deleted_hubs": con.deleted_webs}
            )
    if len(accepted) < 2:
        return None
    centers = [con.hubs[a].center for a in accepted]
    cert_paths = {(con.hubs[j].center, con.hubs[k].center): p for (j, k), p in paths.items()}
    return make_certificate(centers, cert_paths)


def connect_webs(
    g: Graph,
    webs: Sequence[Web],
    s: Optional[int] = None,
    *,
    w: Iterable[int] = (),
    trace: Optional[list] = None,
) -> Optional[SubdivisionCertificate]:
    """Join web centers pairwise into a clique subdivision.

    Webs are taken in order; the next web is joined to every accepted one,
    each time through a fresh unit of each side and one of its live
    branches. Connecting paths avoid every web core, all earlier paths and
    the interiors of both endpoint webs. A branch dies once more than half
    its leaves are used or its path or star center is hit, a unit once more
    than half its branches died, a web once more than half its units died.
    A web that cannot be joined to all accepted ones is deleted. With ``s``
    set, returns None unless s centers get connected.
    """
    hubs = [_hub_from_web(x) for x in webs]
    cert = _connect_hubs(g, hubs, s, w, trace)
    if s is not None and (cert is None or cert.t < s):
        return None
    return cert


def connect_units(
    g: Graph,
    units: Sequence[Unit],
    s: Optional[int] = None,
    *,
    w: Iterable[int] = (),
    trace: Optional[list] = None,
) -> Optional[SubdivisionCertificate]:
    """Join unit centers pairwise, each connection spending one star of each unit.

    Connections run between unit exteriors while avoiding all unit centers,
    all unit interiors of the endpoints and earlier paths.
    """
    hubs = [_hub_from_unit(u) for u in units]
    cert = _connect_hubs(g, hubs, s, w, trace)
    if s is not None and (cert is None or cert.t < s):
        return None
    return cert
