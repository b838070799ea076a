"""Hot inner loops: breadth-first search over CSR arrays and bitmask subset scans.

Every function here is written in the numba-compatible subset of Python so the
same source runs compiled or interpreted (see ``_accel``). BFS additionally has
a vectorised numpy implementation, used when the numba backend is off.
"""

import numpy as np

from ._accel import USE_NUMBA, jit


# ---------------------------------------------------------------------------
# breadth-first search


@jit
def _bfs_loop(indptr, indices, sources, blocked, is_target, max_depth, stop_at_target):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    frontier = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    nf = 0
    for s in sources:
        if not blocked[s] and dist[s] < 0:
            dist[s] = 0
            frontier[nf] = s
            nf += 1
    frontier[:nf] = np.sort(frontier[:nf])
    hit = -1
    if stop_at_target:
        for i in range(nf):
            if is_target[frontier[i]]:
                hit = frontier[i]
                break
    depth = 0
    while hit < 0 and nf > 0 and (max_depth < 0 or depth < max_depth):
        nn = 0
        # frontier is sorted, so the first discoverer is the least-id parent
        for i in range(nf):
            u = frontier[i]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0 and not blocked[v]:
                    dist[v] = depth + 1
                    parent[v] = u
                    nxt[nn] = v
                    nn += 1
        depth += 1
        frontier[:nn] = np.sort(nxt[:nn])
        nf = nn
        if stop_at_target:
            for i in range(nf):
                if is_target[frontier[i]]:
                    hit = frontier[i]
                    break
    return dist, parent, hit


def _bfs_numpy(indptr, indices, sources, blocked, is_target, max_depth, stop_at_target):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    sources = np.asarray(sources, dtype=np.int64)
    frontier = np.unique(sources[~blocked[sources]]) if sources.size else sources
    dist[frontier] = 0
    hit = -1
    if stop_at_target and frontier.size:
        t = frontier[is_target[frontier]]
        if t.size:
            hit = int(t[0])
    depth = 0
    while hit < 0 and frontier.size and (max_depth < 0 or depth < max_depth):
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        owners = np.repeat(frontier, counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        nbrs = indices[np.repeat(starts, counts) + offsets]
        keep = (dist[nbrs] < 0) & ~blocked[nbrs]
        nbrs, owners = nbrs[keep], owners[keep]
        # owners ascend along the array, so the first occurrence has the least parent
        new, first = np.unique(nbrs, return_index=True)
        depth += 1
        dist[new] = depth
        parent[new] = owners[first]
        frontier = new
        if stop_at_target and frontier.size:
            t = frontier[is_target[frontier]]
            if t.size:
                hit = int(t[0])
    return dist, parent, hit


def bfs(indptr, indices, sources, blocked, is_target=None, max_depth=-1, stop_at_target=False):
    """Layered BFS from ``sources`` in the graph minus ``blocked``.

    Returns ``(dist, parent, hit)``; ``hit`` is the least-id target in the
    first layer that contains one (or -1).
    """
    sources = np.asarray(sources, dtype=np.int64)
    if is_target is None:
        is_target = np.zeros(indptr.shape[0] - 1, np.bool_)
    if USE_NUMBA:
        return _bfs_loop(indptr, indices, sources, blocked, is_target, max_depth, stop_at_target)
    return _bfs_numpy(indptr, indices, sources, blocked, is_target, max_depth, stop_at_target)


# ---------------------------------------------------------------------------
# bit tricks


@jit
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@jit
def _lowbit_index(x):
    i = 0
    while not (x >> i) & 1:
        i += 1
    return i


@jit
def induced_edge_counts(adj_masks):
    """e(G[S]) for every bitmask S over ``len(adj_masks)`` vertices."""
    n = adj_masks.shape[0]
    out = np.zeros(1 << n, np.int32)
    for b in range(n):
        lo = 1 << b
        row = adj_masks[b]
        for rest in range(lo):
            out[lo | rest] = out[rest] + popcount(row & rest)
    return out


# ---------------------------------------------------------------------------
# exact robust-expander scan


@jit
def _next_combination(idx, n):
    k = idx.shape[0]
    i = k - 1
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return True


@jit
def _min_neighbourhood_mask(adj_masks, xmask, budget):
    """|N_{G-F}(X)| minimised over |F| <= budget, plus the mask of cut neighbours."""
    nb = 0
    m = xmask
    while m:
        v = _lowbit_index(m)
        nb |= adj_masks[v]
        m &= m - 1
    nb &= ~xmask
    size = popcount(nb)
    if budget <= 0 or size == 0:
        return size, np.int64(0)
    costs = np.empty(size, np.int64)
    verts = np.empty(size, np.int64)
    k = 0
    m = nb
    while m:
        v = _lowbit_index(m)
        costs[k] = popcount(adj_masks[v] & xmask)
        verts[k] = v
        k += 1
        m &= m - 1
    order = np.argsort(costs, kind="mergesort")
    spent = 0
    cut = np.int64(0)
    removed = 0
    for j in range(size):
        c = costs[order[j]]
        if spent + c > budget:
            break
        spent += c
        cut |= np.int64(1) << verts[order[j]]
        removed += 1
    return size - removed, cut


@jit
def expander_exact_scan(adj_masks, smin, smax, budgets, needs):
    """First X (by size, then lexicographic) with min |N_{G-F}(X)| < needs[|X|].

    Returns ``(xmask, cutmask)``, or ``(-1, 0)`` when no set violates.
    """
    n = adj_masks.shape[0]
    for s in range(smin, smax + 1):
        idx = np.arange(s)
        while True:
            xmask = np.int64(0)
            for i in range(s):
                xmask |= np.int64(1) << idx[i]
            left, cut = _min_neighbourhood_mask(adj_masks, xmask, budgets[s])
            if left < needs[s]:
                return xmask, cut
            if not _next_combination(idx, n):
                break
    return np.int64(-1), np.int64(0)


@jit
def _grow_by_keys(indptr, indices, key, s, inx, front, members):
    """Connected growth from the least-key vertex, always adding the least-key frontier vertex.

    Falls back to the least-key unchosen vertex when the component runs out.
    """
    n = key.shape[0]
    for i in range(s):
        best = -1
        for v in range(n):
            if front[v] and not inx[v] and (best < 0 or key[v] < key[best]):
                best = v
        if best < 0:
            for v in range(n):
                if not inx[v] and (best < 0 or key[v] < key[best]):
                    best = v
        inx[best] = True
        members[i] = best
        for j in range(indptr[best], indptr[best + 1]):
            front[indices[j]] = True


@jit
def sampled_scan(indptr, indices, keys, s, budget, need, connected):
    """First row of ``keys`` whose s-set violates |N_{G-F}(X)| >= need, or -1.

    Row r defines X either by connected growth (``connected``) or as the s
    least keys. F may cut any neighbours whose edges into X fit in ``budget``,
    cheapest first. Returns ``(row, members)``.
    """
    n = indptr.shape[0] - 1
    inx = np.zeros(n, np.bool_)
    front = np.zeros(n, np.bool_)
    cost = np.zeros(n, np.int64)
    members = np.empty(s, np.int64)
    for r in range(keys.shape[0]):
        key = keys[r]
        if connected:
            _grow_by_keys(indptr, indices, key, s, inx, front, members)
        else:
            order = np.argsort(key)
            for i in range(s):
                members[i] = order[i]
                inx[order[i]] = True
        size = 0
        for i in range(s):
            u = members[i]
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if not inx[v]:
                    if cost[v] == 0:
                        size += 1
                    cost[v] += 1
        vals = np.empty(size, np.int64)
        k = 0
        for v in range(n):
            if cost[v] > 0:
                vals[k] = cost[v]
                k += 1
                cost[v] = 0
        vals.sort()
        spent = 0
        removed = 0
        for i in range(size):
            if spent + vals[i] > budget:
                break
            spent += vals[i]
            removed += 1
        inx[:] = False
        front[:] = False
        if size - removed < need:
            return r, np.sort(members)
    return -1, members


# ---------------------------------------------------------------------------
# densest-m-subgraph feasibility (branch and bound)


@jit
def _toggle(adjm, conn, v, delta):
    for u in range(adjm.shape[0]):
        if adjm[v, u]:
            conn[u] += delta


@jit
def dense_subset_search(adjm, deg, order, m, need, node_budget):
    """Is there an m-set with at least ``need`` induced edges?

    Depth-first branch and bound over ``order`` with an explicit stack; a
    node is cut when the current edge count plus half the r largest values
    of 2 conn(v) + min(deg v, r - 1) over remaining candidates misses ``need``.
    Returns ``(status, chosen)``: 1 found, 0 none exists, -1 budget exhausted.
    """
    total = order.shape[0]
    chosen = np.full(m, -1, np.int64)
    conn = np.zeros(adjm.shape[0], np.int64)
    nxt = np.zeros(m + 1, np.int64)
    ecur = np.zeros(m + 1, np.int64)
    vals = np.empty(total, np.int64)
    nodes = node_budget
    depth = 0
    entering = True
    while depth >= 0:
        if entering:
            entering = False
            prune = False
            if depth == m:
                if ecur[m] >= need:
                    return 1, chosen
                prune = True
            else:
                nodes -= 1
                if nodes < 0:
                    return -1, chosen
                r = m - depth
                pos = nxt[depth]
                if total - pos < r:
                    prune = True
                else:
                    for i in range(pos, total):
                        v = order[i]
                        dv = deg[v]
                        if dv > r - 1:
                            dv = r - 1
                        vals[i - pos] = 2 * conn[v] + dv
                    part = np.sort(vals[: total - pos])
                    bound = 0
                    for i in range(r):
                        bound += part[total - pos - 1 - i]
                    if ecur[depth] + bound // 2 < need:
                        prune = True
            if prune:
                depth -= 1
                if depth >= 0:
                    _toggle(adjm, conn, chosen[depth], -1)
                continue
        i = nxt[depth]
        if i > total - (m - depth):
            depth -= 1
            if depth >= 0:
                _toggle(adjm, conn, chosen[depth], -1)
            continue
        v = order[i]
        nxt[depth] = i + 1
        chosen[depth] = v
        ecur[depth + 1] = ecur[depth] + conn[v]
        _toggle(adjm, conn, v, 1)
        nxt[depth + 1] = i + 1
        depth += 1
        entering = True
    return 0, chosen


# ---------------------------------------------------------------------------
# small-set expansion profile


@jit
def profile_exact_scan(adj_masks, deg, smax):
    """min over 1 <= |S| <= smax of e(S, S^c)/|S|, as (num, den, mask).

    Ties keep the numerically smallest mask.
    """
    n = adj_masks.shape[0]
    full = 1 << n
    ecount = np.zeros(full, np.int32)
    degsum = np.zeros(full, np.int32)
    size = np.zeros(full, np.int8)
    best_num = -1
    best_den = 1
    best_mask = np.int64(0)
    for b in range(n):
        lo = 1 << b
        row = adj_masks[b]
        for rest in range(lo):
            mk = lo | rest
            ecount[mk] = ecount[rest] + popcount(row & rest)
            degsum[mk] = degsum[rest] + deg[b]
            size[mk] = size[rest] + 1
    for mk in range(1, full):
        s = size[mk]
        if s > smax:
            continue
        num = degsum[mk] - 2 * ecount[mk]
        if best_num < 0 or num * best_den < best_num * s:
            best_num = num
            best_den = s
            best_mask = mk
    return best_num, best_den, best_mask
