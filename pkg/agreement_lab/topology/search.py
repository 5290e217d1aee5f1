"""Exhaustive search for bounded-round cycle agreement decision maps.

A wait-free protocol running `rounds` immediate-snapshot rounds from
the inputs of `build_H(c)` assigns an output to every vertex of the
subdivided complex. It is correct only if solo and two-process
boundary views decide one of their inputs and no triangle decides
three distinct values. The search looks for such a map.

The boundary is labelled first, then the interior by forward-checking
backtracking. Every labelling without a trichromatic triangle has an
even number of boundary edges for each label pair, so with parity
pruning on, boundary prefixes that cannot reach all-even parity are
cut off before the interior is touched. With it off the interior
search alone has to refute every boundary.
"""
from __future__ import annotations

import itertools
import logging

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from functools import lru_cache

from agreement_lab.annotations import JSONDict
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.topology.complex import Complex, build_H, subdivide
from agreement_lab.topology.sperner import allowed_boundary_labels


__all__ = [
    'SearchStats',
    'SearchResult',
    'search_protocol',
    'search_labelling',
]


log = logging.getLogger(__name__)


@dataclass
class SearchStats:
    vertices: int = 0
    triangles: int = 0
    boundary_length: int = 0
    boundary_nodes: int = 0
    interior_nodes: int = 0

    def to_json(self) -> JSONDict:
        return {
            "vertices": self.vertices,
            "triangles": self.triangles,
            "boundary_length": self.boundary_length,
            "boundary_nodes": self.boundary_nodes,
            "interior_nodes": self.interior_nodes,
        }


@dataclass(frozen=True)
class SearchResult:
    satisfiable: bool
    labelling: tuple[int, ...] | None
    stats: SearchStats = field(compare=False)
    cycle: int = 0
    rounds: int = 0
    corner_conditions: bool = True
    parity_pruning: bool = True

    def to_json(self) -> JSONDict:
        return {
            "cycle": self.cycle,
            "rounds": self.rounds,
            "corner_conditions": self.corner_conditions,
            "parity_pruning": self.parity_pruning,
            "result": "SAT" if self.satisfiable else "UNSAT",
            "labelling": list(self.labelling) if self.labelling else None,
            "stats": self.stats.to_json(),
        }


def _domains(
    cx: Complex,
    corner_conditions: bool,
    fixed: Mapping[int, int]
) -> list[tuple[int, ...]]:
    c = len(cx.corners)
    free = tuple(range(c))
    domains = [free] * len(cx.vertices)
    if corner_conditions:
        for v in cx.boundary:
            domains[v] = allowed_boundary_labels(cx, v)
    for v, x in fixed.items():
        domains[v] = (x,) if x in domains[v] else ()
    return domains


def _pair_bits(c: int) -> dict[tuple[int, int], int]:
    pairs = itertools.combinations(range(c), 2)
    return {pair: 1 << i for i, pair in enumerate(pairs)}


def _label_boundary(
    cx: Complex,
    domains: list[tuple[int, ...]],
    stats: SearchStats,
    use_parity: bool = True
) -> Iterator[list[int]]:
    """Yield boundary labellings in label order.

    With `use_parity` only those with all-even pair parity are yielded.
    """
    ring = cx.boundary
    if not use_parity:
        for labels in itertools.product(*(domains[v] for v in ring)):
            stats.boundary_nodes += 1
            yield list(labels)
        return
    size = len(ring)
    bits = _pair_bits(len(cx.corners))

    def toggle(mask: int, a: int, b: int) -> int:
        return mask if a == b else mask ^ bits[(min(a, b), max(a, b))]

    @lru_cache(maxsize=None)
    def completes(i: int, first: int, prev: int, mask: int) -> bool:
        """Can positions after `i` be labelled to close with mask 0?"""
        stats.boundary_nodes += 1
        if i == size - 1:
            return toggle(mask, prev, first) == 0
        return any(
            completes(i + 1, first, x, toggle(mask, prev, x))
            for x in domains[ring[i + 1]])

    def walk(
        i: int, first: int, prev: int, mask: int, chosen: list[int]
    ) -> Iterator[list[int]]:
        if i == size - 1:
            yield list(chosen)
            return
        for x in domains[ring[i + 1]]:
            after = toggle(mask, prev, x)
            if completes(i + 1, first, x, after):
                chosen.append(x)
                yield from walk(i + 1, first, x, after, chosen)
                chosen.pop()

    for first in domains[ring[0]]:
        if completes(0, first, first, 0):
            yield from walk(0, first, first, 0, [first])


def _label_interior(
    cx: Complex,
    labels: list[int | None],
    domains: list[tuple[int, ...]],
    stats: SearchStats
) -> list[int] | None:
    """Forward-checking backtracking over the interior vertices."""
    triangles_of: list[list[tuple[int, int]]] = [[] for _ in cx.vertices]
    for a, b, d in cx.triangles:
        triangles_of[a].append((b, d))
        triangles_of[b].append((a, d))
        triangles_of[d].append((a, b))

    def allowed(v: int, current: list[int | None]) -> list[int]:
        options = set(domains[v])
        for u, w in triangles_of[v]:
            lu, lw = current[u], current[w]
            if lu is not None and lw is not None and lu != lw:
                options &= {lu, lw}
        return sorted(options)

    # every boundary triangle must already be fine
    for triangle in cx.triangles:
        values = [labels[v] for v in triangle]
        if None not in values and len(set(values)) == 3:
            return None

    order = sorted(cx.interior)
    around = [
        sorted({u for pair in triangles_of[v] for u in pair})
        for v in range(len(cx.vertices))]

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for x in allowed(v, labels):
            stats.interior_nodes += 1
            labels[v] = x
            wiped_out = any(
                labels[u] is None and not allowed(u, labels) for u in around[v])
            if not wiped_out and assign(i + 1):
                return True
        labels[v] = None
        return False

    if not assign(0):
        return None
    return [x for x in labels if x is not None]


def search_labelling(
    cx: Complex,
    corner_conditions: bool = True,
    use_parity: bool = True,
    fixed: Mapping[int, int] | None = None
) -> tuple[tuple[int, ...] | None, SearchStats]:
    """First decision map in search order, or `None` if none exists.

    `fixed` pins vertices to labels on top of the corner conditions.
    """
    stats = SearchStats(
        vertices=len(cx.vertices),
        triangles=len(cx.triangles),
        boundary_length=len(cx.boundary))
    domains = _domains(cx, corner_conditions, fixed or {})
    for boundary_labels in _label_boundary(cx, domains, stats, use_parity):
        labels: list[int | None] = [None] * len(cx.vertices)
        for v, x in zip(cx.boundary, boundary_labels):
            labels[v] = x
        found = _label_interior(cx, labels, domains, stats)
        if found is not None:
            return tuple(found), stats
    return None, stats


def search_protocol(
    c: int,
    rounds: int,
    budgets: Budgets = DEFAULT_BUDGETS,
    corner_conditions: bool = True,
    use_parity: bool = True
) -> SearchResult:
    """Search every decision map on `rounds` subdivisions of `build_H(c)`.

    Raises:
        `UndecidedError` past the topology budgets.
    """
    budgets.check("topology_cycle", c)
    budgets.check("topology_rounds", rounds)
    cx = subdivide(build_H(c), rounds)
    labelling, stats = search_labelling(cx, corner_conditions, use_parity)
    result = SearchResult(
        satisfiable=labelling is not None,
        labelling=labelling,
        stats=stats,
        cycle=c,
        rounds=rounds,
        corner_conditions=corner_conditions,
        parity_pruning=use_parity)
    log.info(
        "c=%d rounds=%d: %s after %d boundary and %d interior nodes",
        c, rounds, "SAT" if result.satisfiable else "UNSAT",
        stats.boundary_nodes, stats.interior_nodes)
    return result
