"""Immutable simple undirected graphs and the basic measures on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels


class GraphError(ValueError):
    """Invalid graph input."""


class ParseError(GraphError):
    """Malformed graph text. ``kind`` names the failure."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is kept twice: as frozensets for set algebra and as read-only
    CSR arrays (``indptr``/``indices``, neighbours sorted) for the kernels.
    """

    __slots__ = ("n", "_adj", "indptr", "indices", "_m", "_masks", "_matrix", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        self._init_from_sets(n, adj)

    def _init_from_sets(self, n, adj):
        self.n = n
        self._adj = tuple(frozenset(a) for a in adj)
        degs = np.fromiter((len(a) for a in adj), dtype=np.int64, count=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degs, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        for v, a in enumerate(adj):
            indices[indptr[v]:indptr[v + 1]] = sorted(a)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        self.indptr = indptr
        self.indices = indices
        self._m = int(indptr[-1]) // 2
        self._masks = None
        self._matrix = None
        self._hash = None

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        n = len(adj)
        edges = [(u, v) for u, nb in enumerate(adj) for v in nb if u < v]
        g = cls(n, edges)
        for u, nb in enumerate(adj):
            if set(nb) != g._adj[u]:
                raise GraphError("adjacency is not symmetric")
        return g

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    def adj(self, v: int) -> frozenset:
        return self._adj[v]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if v > u:
                    yield u, int(v)

    def adj_masks(self) -> np.ndarray:
        """Neighbourhood bitmasks; only for n <= 62."""
        if self._masks is None:
            if self.n > 62:
                raise GraphError("bitmask adjacency needs n <= 62")
            masks = np.zeros(self.n, dtype=np.int64)
            for v in range(self.n):
                mk = 0
                for u in self._adj[v]:
                    mk |= 1 << u
                masks[v] = mk
            masks.flags.writeable = False
            self._masks = masks
        return self._masks

    def adjacency_matrix(self) -> np.ndarray:
        if self._matrix is None:
            mat = np.zeros((self.n, self.n), dtype=np.bool_)
            for v in range(self.n):
                mat[v, self.neighbors(v)] = True
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    def check_vertices(self, vertices: Iterable[int]) -> frozenset:
        vs = frozenset(int(v) for v in vertices)
        for v in vs:
            if not 0 <= v < self.n:
                raise GraphError(f"vertex {v} out of range for n={self.n}")
        return vs

    def induced(self, vertices: Iterable[int]) -> "Subgraph":
        ids = tuple(sorted(self.check_vertices(vertices)))
        pos = {v: i for i, v in enumerate(ids)}
        adj = [set() for _ in ids]
        for i, v in enumerate(ids):
            for u in self._adj[v]:
                j = pos.get(u)
                if j is not None:
                    adj[i].add(j)
        g = Graph.__new__(Graph)
        g._init_from_sets(len(ids), adj)
        return Subgraph(g, ids)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._adj))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Subgraph:
    """An induced subgraph plus the map from its ids to the host's ids."""

    graph: Graph
    ids: tuple[int, ...]

    @classmethod
    def identity(cls, g: Graph) -> "Subgraph":
        return cls(g, tuple(range(g.n)))

    def lift(self, v: int) -> int:
        return self.ids[v]

    def lift_all(self, vs: Iterable[int]) -> list[int]:
        return [self.ids[v] for v in vs]

    def restrict(self, vertices: Iterable[int]) -> "Subgraph":
        """Induced subgraph on local ids, still mapped to the original host."""
        inner = self.graph.induced(vertices)
        return Subgraph(inner.graph, tuple(self.ids[v] for v in inner.ids))


# -- measures ---------------------------------------------------------------


def average_degree(g: Graph) -> Fraction:
    """2 e(G) / n as an exact fraction."""
    if g.n == 0:
        raise GraphError("empty graph")
    return Fraction(2 * g.m, g.n)


def external_neighborhood(g: Graph, x: Iterable[int]) -> frozenset:
    xs = g.check_vertices(x)
    out = set()
    for v in xs:
        out.update(g.adj(v))
    return frozenset(out - xs)


def edge_boundary(g: Graph, s: Iterable[int]) -> int:
    ss = g.check_vertices(s)
    return sum(1 for v in ss for u in g.adj(v) if u not in ss)


def induced_edge_count(g: Graph, s: Iterable[int]) -> int:
    ss = g.check_vertices(s)
    return sum(1 for v in ss for u in g.adj(v) if u in ss) // 2


def is_path(g: Graph, vertices: Sequence[int]) -> bool:
    if not vertices:
        return False
    if len(set(vertices)) != len(vertices):
        return False
    if any(not 0 <= v < g.n for v in vertices):
        return False
    return all(g.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))


def blocked_mask(g: Graph, vertices: Iterable[int]) -> np.ndarray:
    mask = np.zeros(g.n, dtype=np.bool_)
    idx = np.fromiter(vertices, dtype=np.int64)
    if idx.size:
        mask[idx] = True
    return mask


def bfs_distances(g: Graph, sources: Iterable[int], avoid: Iterable[int] = (), max_depth: int = -1) -> np.ndarray:
    src = np.fromiter(sources, dtype=np.int64)
    dist, _, _ = _kernels.bfs(g.indptr, g.indices, src, blocked_mask(g, avoid), max_depth=max_depth)
    return dist


def components(g: Graph) -> list[list[int]]:
    seen = np.zeros(g.n, dtype=np.bool_)
    out = []
    for v in range(g.n):
        if not seen[v]:
            dist = bfs_distances(g, [v])
            comp = np.flatnonzero(dist >= 0)
            seen[comp] = True
            out.append(comp.tolist())
    return out


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    edges = []
    offset = 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges())
        offset += h.n
    return Graph(offset, edges)


def add_edge(g: Graph, u: int, v: int) -> Graph:
    return Graph(g.n, list(g.edges()) + [(u, v)])


# -- text format ------------------------------------------------------------


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines)


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``u v`` edge lines format.

    Edges must satisfy ``0 <= u < v < n``; each failure mode raises a
    ``ParseError`` with its own ``kind``.
    """
    lines = [ln.strip() for ln in text.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("malformed", "missing header")
    header = lines[0].split()
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise ParseError("malformed", f"bad header {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != m:
        raise ParseError("malformed", f"header declares {m} edges, found {len(body)}")
    seen = set()
    edges = []
    for lineno, line in enumerate(body, start=2):
        toks = line.split()
        if len(toks) != 2 or not all(tok.isdigit() for tok in toks):
            raise ParseError("malformed", f"line {lineno}: {line!r}")
        u, v = int(toks[0]), int(toks[1])
        if u >= n or v >= n:
            raise ParseError("out-of-range", f"line {lineno}: vertex id >= n={n}")
        if u == v:
            raise ParseError("self-loop", f"line {lineno}: self-loop at {u}")
        if u > v:
            raise ParseError("reversed-edge", f"line {lineno}: expected u < v, got {u} {v}")
        if (u, v) in seen:
            raise ParseError("duplicate-edge", f"line {lineno}: edge {u} {v} repeated")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)
