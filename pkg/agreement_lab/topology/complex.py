"""Chromatic 2-complexes for three processes.

A vertex is a process colour plus an opaque state key. Input vertices
carry their input value as key; after a round of immediate snapshots
a vertex's key is the sorted tuple of `(colour, key)` pairs it saw.
Vertices are identified by that pair, so triangles sharing an edge
glue without any bookkeeping.
"""
from __future__ import annotations

import logging

from collections import Counter, defaultdict
from collections.abc import Hashable, Iterable
from dataclasses import dataclass
from functools import cached_property

from agreement_lab.annotations import Edge, Triangle
from agreement_lab.errors import ComplexError
from agreement_lab.simulation.schedules import ordered_set_partitions


__all__ = [
    'ComplexVertex',
    'Complex',
    'standard_triangle',
    'input_configurations',
    'build_H',
    'subdivide_once',
    'subdivide',
    'triangle_edges',
]


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComplexVertex:
    colour: int
    key: Hashable


def triangle_edges(triangle: Triangle) -> tuple[Edge, Edge, Edge]:
    a, b, c = triangle
    return (a, b), (a, c), (b, c)


@dataclass(frozen=True)
class Complex:
    """A triangulated disk with `corners` marked along its boundary.

    `boundary` lists the boundary cycle starting at `corners[0]` and
    running towards `corners[1]`.
    """

    vertices: tuple[ComplexVertex, ...]
    triangles: tuple[Triangle, ...]
    boundary: tuple[int, ...]
    corners: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        for triangle in self.triangles:
            if list(triangle) != sorted(set(triangle)) or len(triangle) != 3:
                raise ComplexError(f"triangle {triangle} must be 3 sorted ids")
            if not all(0 <= v < n for v in triangle):
                raise ComplexError(f"triangle {triangle} names unknown vertices")
            if len({self.vertices[v].colour for v in triangle}) != 3:
                raise ComplexError(f"triangle {triangle} is not properly coloured")
        if len(set(self.boundary)) != len(self.boundary) or len(self.boundary) < 3:
            raise ComplexError("boundary must be a simple cycle")
        ring = set(self.boundary_edges)
        for i, u in enumerate(self.boundary):
            v = self.boundary[(i + 1) % len(self.boundary)]
            if (min(u, v), max(u, v)) not in ring:
                raise ComplexError(f"boundary step {u}-{v} is not a boundary edge")
        position = {v: i for i, v in enumerate(self.boundary)}
        if any(c not in position for c in self.corners):
            raise ComplexError("every corner must lie on the boundary")
        placed = [position[c] for c in self.corners]
        if placed != sorted(placed) or len(set(placed)) != len(placed):
            raise ComplexError("corners must appear once each, in boundary order")

    @cached_property
    def edge_triangles(self) -> dict[Edge, list[int]]:
        """Indices of the triangles on each edge."""
        table: dict[Edge, list[int]] = defaultdict(list)
        for i, triangle in enumerate(self.triangles):
            for e in triangle_edges(triangle):
                table[e].append(i)
        return dict(table)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edge_triangles))

    @cached_property
    def boundary_edges(self) -> frozenset[Edge]:
        return frozenset(e for e, ts in self.edge_triangles.items() if len(ts) == 1)

    @cached_property
    def interior(self) -> tuple[int, ...]:
        on_boundary = set(self.boundary)
        return tuple(v for v in range(len(self.vertices)) if v not in on_boundary)

    @cached_property
    def segments(self) -> dict[int, int]:
        """Boundary vertex to segment `k` (from corner `k` to `k + 1`).

        Corners map to their own index.
        """
        corner_index = {c: k for k, c in enumerate(self.corners)}
        table: dict[int, int] = {}
        k = 0
        for v in self.boundary:
            k = corner_index.get(v, k)
            table[v] = k
        return table

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)


def _boundary_cycle(
    triangles: Iterable[Triangle],
    corners: tuple[int, ...]
) -> tuple[int, ...]:
    """Walk the edges lying in exactly one triangle, oriented by corners."""
    count: Counter[Edge] = Counter(e for t in triangles for e in triangle_edges(t))
    ring: dict[int, list[int]] = defaultdict(list)
    for (u, v), k in count.items():
        if k == 1:
            ring[u].append(v)
            ring[v].append(u)
    if not ring or any(len(ns) != 2 for ns in ring.values()):
        raise ComplexError("complex is not a disk: boundary is not one cycle")

    start = corners[0]
    cycle = [start]
    previous, current = start, min(ring[start])
    while current != start:
        cycle.append(current)
        a, b = ring[current]
        previous, current = current, (b if a == previous else a)
    if len(cycle) != len(ring):
        raise ComplexError("boundary splits into several cycles")

    if len(corners) > 1:
        position = {v: i for i, v in enumerate(cycle)}
        if position[corners[1]] > position[corners[-1]]:
            cycle = [start] + cycle[:0:-1]
    return tuple(cycle)


def _assemble(
    vertex_ids: dict[tuple[int, Hashable], int],
    triangles: set[Triangle],
    corners: tuple[int, ...]
) -> Complex:
    vertices = [ComplexVertex(0, None)] * len(vertex_ids)
    for (colour, key), i in vertex_ids.items():
        vertices[i] = ComplexVertex(colour, key)
    ordered = tuple(sorted(triangles))
    return Complex(
        vertices=tuple(vertices),
        triangles=ordered,
        boundary=_boundary_cycle(ordered, corners),
        corners=corners,
    )


def standard_triangle() -> Complex:
    """One triangle: process `i` with input `i`, corners `0, 1, 2`."""
    ids = {(i, i): i for i in range(3)}
    return _assemble(ids, {(0, 1, 2)}, (0, 1, 2))


def input_configurations(c: int) -> list[dict[int, int]]:
    """The `c - 2` input triangles as `{process: input}` maps."""
    families = (
        (3, lambda a: {0: 3 * a, 1: 3 * a + 1, 2: c - 3 * a - 1}),
        (4, lambda a: {1: 3 * a + 1, 2: c - 3 * a - 1, 0: c - 3 * a - 2}),
        (5, lambda a: {1: 3 * a + 1, 2: 3 * a + 2, 0: c - 3 * a - 2}),
        (6, lambda a: {2: 3 * a + 2, 0: c - 3 * a - 2, 1: c - 3 * a - 3}),
        (7, lambda a: {2: 3 * a + 2, 0: 3 * a + 3, 1: c - 3 * a - 3}),
        (8, lambda a: {0: 3 * a + 3, 1: c - 3 * a - 3, 2: c - 3 * a - 4}),
    )
    return [
        configuration(a)
        for offset, configuration in families
        for a in range((c - offset) // 6 + 1)]


def build_H(c: int) -> Complex:
    """The input subcomplex for `c`-cycle agreement among 3 processes.

    It has one vertex per input value and its boundary is the `c`-gon
    `0, 1, ..., c-1`, whose vertices are also the corners.

    Raises:
        `ComplexError` for `c < 4`.
    """
    if c < 4:
        raise ComplexError(f"cycle agreement needs c >= 4, got {c}")
    colour_of: dict[int, int] = {}
    triangles: set[Triangle] = set()
    for configuration in input_configurations(c):
        for process, value in configuration.items():
            if colour_of.setdefault(value, process) != process:
                raise ComplexError(f"input {value} appears with two colours")
        a, b, d = sorted(configuration.values())
        triangles.add((a, b, d))
    if sorted(colour_of) != list(range(c)):
        raise ComplexError(f"inputs {sorted(colour_of)} do not cover 0..{c - 1}")
    ids = {(colour_of[x], x): x for x in range(c)}
    return _assemble(ids, triangles, tuple(range(c)))


def subdivide_once(cx: Complex) -> Complex:
    """One round of immediate snapshots on every triangle.

    Each ordered partition of a triangle's three processes contributes
    the triangle in which a process in block `j` saw blocks `1..j`.
    """
    ids: dict[tuple[int, Hashable], int] = {}
    triangles: set[Triangle] = set()

    def vertex(colour: int, seen: list[ComplexVertex]) -> int:
        # colours within a view are distinct, so ordering by colour is canonical
        key = tuple(sorted(((s.colour, s.key) for s in seen), key=lambda p: p[0]))
        return ids.setdefault((colour, key), len(ids))

    for triangle in cx.triangles:
        parents = [cx.vertices[v] for v in triangle]
        for blocks in ordered_set_partitions([0, 1, 2]):
            seen: list[ComplexVertex] = []
            new: list[int] = []
            for block in blocks:
                seen.extend(parents[i] for i in block)
                new.extend(vertex(parents[i].colour, seen) for i in block)
            a, b, d = sorted(new)
            triangles.add((a, b, d))

    corners = tuple(
        ids[(cx.vertices[c].colour, ((cx.vertices[c].colour, cx.vertices[c].key),))]
        for c in cx.corners)
    result = _assemble(ids, triangles, corners)
    log.debug(
        "subdivided %d triangles into %d", len(cx.triangles), len(result.triangles))
    return result


def subdivide(cx: Complex, rounds: int) -> Complex:
    for _ in range(rounds):
        cx = subdivide_once(cx)
    return cx
