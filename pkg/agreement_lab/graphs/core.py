"""Distances, intervals and convexity on simple connected graphs.

Everything here is immutable and pure, so graphs and the values
derived from them can be shared between concurrent runs.

| Name                  | Description                                 |
|-----------------------|---------------------------------------------|
| `Graph`               | Validated, hashable adjacency lists         |
| `DistanceMatrix`      | All-pairs hop distances (`numpy` array)     |
| `interval`            | Vertices on some shortest `u`-`v` path      |
| `convex_hull`         | Smallest geodesically convex superset       |
| `midpoint_g`          | Fixed center vertex of a fixed shortest path|
"""
from __future__ import annotations

import itertools

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import networkx as nx
import numpy as np
import numpy.typing as npt

from agreement_lab.annotations import Edge, Vertex, VertexSet
from agreement_lab.errors import (
    DisconnectedGraphError,
    EmptyVertexSetError,
    GraphFormatError,
)


__all__ = [
    'Graph',
    'DistanceMatrix',
    'distances',
    'eccentricities',
    'eccentricity',
    'diameter',
    'radius',
    'center',
    'set_diameter',
    'interval',
    'convex_hull',
    'is_clique',
    'simplicial_vertices',
    'induced_subgraph',
    'midpoint_g',
]


@dataclass(frozen=True)
class Graph:
    """An undirected connected graph on vertices `0..n-1`.

    Construction validates every structural invariant, so any
    `Graph` instance can be handed to the other functions as-is.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphFormatError("a graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise GraphFormatError(
                f"expected {self.n} adjacency rows, got {len(self.adjacency)}")
        for v, row in enumerate(self.adjacency):
            if list(row) != sorted(set(row)):
                raise GraphFormatError(
                    f"neighbours of {v} must be sorted without duplicates")
            for u in row:
                if not 0 <= u < self.n:
                    raise GraphFormatError(f"vertex {u} out of range")
                if u == v:
                    raise GraphFormatError(f"self-loop at {v}")
                if v not in self.adjacency[u]:
                    raise GraphFormatError(f"edge {v}-{u} is not symmetric")
        if not nx.is_connected(self.to_networkx()):
            raise DisconnectedGraphError()

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        name: str = ""
    ) -> Graph:
        """Build from an edge list, rejecting loops and repeats."""
        rows: list[set[int]] = [set() for _ in range(max(n, 0))]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge {u}-{v} out of range 0..{n - 1}")
            if u == v:
                raise GraphFormatError(f"self-loop at {u}")
            if v in rows[u]:
                raise GraphFormatError(f"duplicate edge {u}-{v}")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n, tuple(tuple(sorted(row)) for row in rows), name=name)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.n, self.adjacency))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(
            (u, v) for u, row in enumerate(self.adjacency) for v in row if u < v)

    @cached_property
    def _neighbour_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(row) for row in self.adjacency)

    def neighbours(self, v: Vertex) -> frozenset[int]:
        return self._neighbour_sets[v]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self._neighbour_sets[u]

    @cached_property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        """Every 3-clique as a sorted triple."""
        return tuple(
            (u, v, w)
            for u, v in self.edges
            for w in self.adjacency[v]
            if w > v and self.has_edge(u, w))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(
            (u, v) for u, row in enumerate(self.adjacency) for v in row if u < v)
        return graph

    @cached_property
    def distances(self) -> DistanceMatrix:
        return distances(self)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={len(self.edges)}>"


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Hop distances; `d[u, v]` reads one entry."""

    d: npt.NDArray[np.int64]

    def __getitem__(self, uv: tuple[int, int]) -> int:
        return int(self.d[uv])

    def row(self, u: Vertex) -> npt.NDArray[np.int64]:
        return self.d[u]

    def within(self, members: Iterable[int]) -> npt.NDArray[np.int64]:
        """The square sub-matrix for `members` in ascending order."""
        index = sorted(members)
        return self.d[np.ix_(index, index)]


def distances(g: Graph) -> DistanceMatrix:
    """All-pairs BFS distances."""
    d = np.zeros((g.n, g.n), dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(g.to_networkx()):
        for target, length in lengths.items():
            d[source, target] = length
    d.setflags(write=False)
    return DistanceMatrix(d)


def _require_nonempty(u_set: Iterable[int]) -> VertexSet:
    members = frozenset(u_set)
    if not members:
        raise EmptyVertexSetError()
    return members


def eccentricities(g: Graph) -> npt.NDArray[np.int64]:
    return g.distances.d.max(axis=1)


def eccentricity(g: Graph, v: Vertex) -> int:
    return int(g.distances.row(v).max())


def diameter(g: Graph) -> int:
    return int(g.distances.d.max())


def radius(g: Graph) -> int:
    return int(eccentricities(g).min())


def center(g: Graph) -> VertexSet:
    ecc = eccentricities(g)
    return frozenset(int(v) for v in np.flatnonzero(ecc == ecc.min()))


def set_diameter(g: Graph, u_set: Iterable[int]) -> int:
    """`D(U)`: the largest distance between two members of `U`."""
    members = _require_nonempty(u_set)
    return int(g.distances.within(members).max())


def interval(g: Graph, u: Vertex, v: Vertex) -> VertexSet:
    """Every `w` with `d(u, w) + d(w, v) == d(u, v)`."""
    d = g.distances.d
    return frozenset(
        int(w) for w in np.flatnonzero(d[u] + d[v] == d[u, v]))


def convex_hull(g: Graph, u_set: Iterable[int]) -> VertexSet:
    """Close `U` under pairwise intervals until nothing changes."""
    return _hull(g, _require_nonempty(u_set))


@lru_cache(maxsize=1 << 16)
def _hull(g: Graph, members: VertexSet) -> VertexSet:
    d = g.distances.d
    inside = np.zeros(g.n, dtype=bool)
    inside[list(members)] = True
    while True:
        index = np.flatnonzero(inside)
        rows = d[index]
        # rows[a, w] + rows[b, w] == d[a, b] marks w between a and b
        between = rows[:, None, :] + rows[None, :, :] == d[np.ix_(index, index)][:, :, None]
        grown = inside | between.any(axis=(0, 1))
        if (grown == inside).all():
            return frozenset(int(w) for w in index)
        inside = grown


def is_clique(g: Graph, u_set: Iterable[int]) -> bool:
    """Distinct members pairwise adjacent; empty and singletons count."""
    members = sorted(set(u_set))
    return all(
        g.has_edge(u, v) for u, v in itertools.combinations(members, 2))


def simplicial_vertices(g: Graph, within: Iterable[int]) -> VertexSet:
    """Vertices whose neighbourhood inside `G[within]` is a clique."""
    members = _require_nonempty(within)
    return frozenset(
        v for v in members
        if is_clique(g, g.neighbours(v) & members))


def induced_subgraph(
    g: Graph,
    u_set: Iterable[int]
) -> tuple[Graph, tuple[int, ...]]:
    """Relabelled `G[U]` plus the new-id to old-id mapping.

    Raises:
        `DisconnectedGraphError` if `G[U]` is not connected.
    """
    return _induced(g, _require_nonempty(u_set))


@lru_cache(maxsize=1 << 14)
def _induced(g: Graph, members: VertexSet) -> tuple[Graph, tuple[int, ...]]:
    old_ids = tuple(sorted(members))
    new_id = {old: new for new, old in enumerate(old_ids)}
    rows = tuple(
        tuple(sorted(new_id[u] for u in g.adjacency[old] if u in new_id))
        for old in old_ids)
    name = f"{g.name}[{','.join(map(str, old_ids))}]" if g.name else ""
    try:
        sub = Graph(len(old_ids), rows, name=name)
    except DisconnectedGraphError as e:
        raise DisconnectedGraphError(
            f"induced subgraph on {list(old_ids)} is not connected") from e
    return sub, old_ids


@lru_cache(maxsize=1 << 16)
def midpoint_g(g: Graph, u: Vertex, v: Vertex) -> Vertex:
    """The fixed center `g(u, v)` of the fixed shortest `u`-`v` path.

    The path is the lexicographically smallest shortest path from
    `min(u, v)`; the result sits `floor(d / 2)` steps along it, so the
    function is symmetric and both distances are at most `ceil(d / 2)`.
    """
    if u > v:
        u, v = v, u
    d = g.distances.d
    steps = int(d[u, v]) // 2
    current = u
    for _ in range(steps):
        remaining = d[current, v]
        current = next(
            w for w in g.adjacency[current] if d[w, v] == remaining - 1)
    return current
