"""Graph class membership with witnesses.

Exact checks guard their search with a `Budgets` entry and raise
`UndecidedError` rather than answer past it. `classify` turns those
into absent fields of its report.
"""
from __future__ import annotations

import logging

from collections import deque
from dataclasses import asdict, dataclass, field

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from agreement_lab.annotations import JSONDict, Vertex, VertexSet
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import GraphClassError, UndecidedError
from agreement_lab.graphs.core import (
    Graph,
    convex_hull,
    diameter,
    eccentricities,
    radius,
)
from agreement_lab.graphs.fixtures import sun3
from agreement_lab.graphs.labelling import Labelling, find_lower_bound_labelling


__all__ = [
    'ChordalityResult',
    'BridgedResult',
    'SufficientConditions',
    'ClassReport',
    'is_chordal',
    'is_bridged',
    'is_k_self_centered',
    'self_centered_k',
    'convex_sets',
    'is_nicely_bridged_exact',
    'contains_induced_3sun',
    'max_clique_at_most',
    'wheels_uniquely_centered',
    'sufficient_conditions',
    'classify',
]


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChordalityResult:
    chordal: bool
    elimination_order: tuple[int, ...] | None = None
    induced_cycle: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.chordal


@dataclass(frozen=True)
class BridgedResult:
    bridged: bool
    isometric_cycle: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.bridged


def _maximum_cardinality_order(g: Graph) -> list[Vertex]:
    """Visit order of maximum cardinality search, smallest id on ties."""
    weight = [0] * g.n
    visited = [False] * g.n
    order: list[Vertex] = []
    for _ in range(g.n):
        v = max(
            (u for u in g.vertices if not visited[u]),
            key=lambda u: (weight[u], -u))
        visited[v] = True
        order.append(v)
        for u in g.adjacency[v]:
            if not visited[u]:
                weight[u] += 1
    return order


def _is_perfect_elimination(g: Graph, order: list[Vertex]) -> bool:
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in g.adjacency[v] if position[u] > position[v]]
        if not later:
            continue
        parent = min(later, key=position.__getitem__)
        if any(u != parent and not g.has_edge(parent, u) for u in later):
            return False
    return True


def _shortest_induced_cycle(g: Graph, min_length: int = 4) -> tuple[int, ...] | None:
    cycles = [
        tuple(c) for c in nx.chordless_cycles(g.to_networkx())
        if len(c) >= min_length]
    if not cycles:
        return None
    return min(cycles, key=lambda c: (len(c), c))


def is_chordal(g: Graph) -> ChordalityResult:
    """Chordality with a perfect elimination order or an induced cycle."""
    order = _maximum_cardinality_order(g)
    order.reverse()
    if _is_perfect_elimination(g, order):
        return ChordalityResult(True, elimination_order=tuple(order))
    return ChordalityResult(False, induced_cycle=_shortest_induced_cycle(g))


def _find_isometric_cycle(g: Graph, length: int) -> tuple[int, ...] | None:
    d = g.distances.d

    def extend(path: list[int]) -> tuple[int, ...] | None:
        k = len(path)
        for w in g.adjacency[path[-1]]:
            if w <= path[0]:
                continue
            # every earlier vertex must sit at its cycle distance from w
            if any(
                d[p, w] != min(k - j, length - (k - j))
                for j, p in enumerate(path)
            ):
                continue
            path.append(w)
            if k + 1 == length:
                return tuple(path)
            found = extend(path)
            if found:
                return found
            path.pop()
        return None

    for start in g.vertices:
        found = extend([start])
        if found:
            return found
    return None


def is_bridged(g: Graph, budgets: Budgets = DEFAULT_BUDGETS) -> BridgedResult:
    """No isometric cycle of length at least 4.

    An isometric cycle of length `L` has diameter `floor(L / 2)`, so
    only lengths up to `2 * diam + 1` are searched.

    Raises:
        `UndecidedError` past `budgets.bridged_vertices`.
    """
    budgets.check("bridged_vertices", g.n)
    for length in range(4, 2 * diameter(g) + 2):
        cycle = _find_isometric_cycle(g, length)
        if cycle:
            return BridgedResult(False, isometric_cycle=cycle)
    return BridgedResult(True)


def self_centered_k(g: Graph) -> int | None:
    """The common eccentricity, or `None` if eccentricities differ."""
    ecc = eccentricities(g)
    return int(ecc[0]) if (ecc == ecc[0]).all() else None


def is_k_self_centered(g: Graph, k: int) -> bool:
    return bool((eccentricities(g) == k).all())


def convex_sets(g: Graph) -> list[VertexSet]:
    """Every nonempty convex vertex set, smallest first.

    Each convex `S` is reached from a singleton inside it by adding
    members of `S` one at a time and closing, so the closure search is
    complete.
    """
    seen: set[VertexSet] = set()
    queue: deque[VertexSet] = deque()
    for v in g.vertices:
        single = frozenset((v,))
        seen.add(single)
        queue.append(single)
    while queue:
        current = queue.popleft()
        for v in g.vertices:
            if v in current:
                continue
            grown = convex_hull(g, current | {v})
            if grown not in seen:
                seen.add(grown)
                queue.append(grown)
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def _is_two_self_centered_within(g: Graph, members: VertexSet) -> bool:
    # Convex sets keep their geodesics, so G-distances are G[S]-distances.
    sub = g.distances.within(members)
    return bool((sub.max(axis=1) == 2).all())


def is_nicely_bridged_exact(
    g: Graph,
    budgets: Budgets = DEFAULT_BUDGETS
) -> bool:
    """Every 2-self-centered subgraph induced by a convex set is chordal.

    Raises:
        `GraphClassError` if `g` is not bridged.
        `UndecidedError` past `budgets.nicely_bridged_vertices`.
    """
    budgets.check("nicely_bridged_vertices", g.n)
    bridged = is_bridged(g, budgets)
    if not bridged:
        raise GraphClassError(
            f"{g!r} is not bridged: isometric cycle {list(bridged.isometric_cycle or ())}")
    nxg = g.to_networkx()
    for members in convex_sets(g):
        if len(members) < 3 or not _is_two_self_centered_within(g, members):
            continue
        if not nx.is_chordal(nxg.subgraph(members)):
            log.debug("convex set %s is 2-self-centered, not chordal", sorted(members))
            return False
    return True


def contains_induced_3sun(g: Graph, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    budgets.check("max_vertices", g.n)
    matcher = GraphMatcher(g.to_networkx(), sun3().to_networkx())
    return matcher.subgraph_is_isomorphic()


def max_clique_at_most(
    g: Graph,
    k: int,
    budgets: Budgets = DEFAULT_BUDGETS
) -> bool:
    budgets.check("max_vertices", g.n)
    return all(len(c) <= k for c in nx.find_cliques(g.to_networkx()))


def wheels_uniquely_centered(g: Graph, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    """No induced cycle of length at least 4 has two universal neighbours.

    A vertex `x` outside an induced cycle `C` and adjacent to all of it
    makes `C + x` a wheel; the wheel is uniquely centered when no other
    `y != x` outside `C` is adjacent to all of `C`.
    """
    budgets.check("bridged_vertices", g.n)
    for cycle in nx.chordless_cycles(g.to_networkx()):
        if len(cycle) < 4:
            continue
        members = set(cycle)
        hubs = [
            x for x in g.vertices
            if x not in members and members <= g.neighbours(x)]
        if len(hubs) >= 2:
            log.debug("cycle %s has hubs %s", cycle, hubs)
            return False
    return True


@dataclass(frozen=True)
class SufficientConditions:
    """Each flag alone, together with bridgedness, implies nicely bridged."""

    is_chordal: bool
    no_3sun: bool
    wheels_uniquely_centered: bool
    k4_free: bool

    def any(self) -> bool:
        return (
            self.is_chordal or self.no_3sun
            or self.wheels_uniquely_centered or self.k4_free)


def sufficient_conditions(
    g: Graph,
    budgets: Budgets = DEFAULT_BUDGETS
) -> SufficientConditions:
    return SufficientConditions(
        is_chordal=is_chordal(g).chordal,
        no_3sun=not contains_induced_3sun(g, budgets),
        wheels_uniquely_centered=wheels_uniquely_centered(g, budgets),
        k4_free=max_clique_at_most(g, 3, budgets),
    )


@dataclass(frozen=True)
class ClassReport:
    name: str
    n: int
    chordal: bool
    bridged: bool | None
    nicely_bridged: bool | None
    radius: int
    diameter: int
    self_centered_k: int | None
    sufficient_conditions: SufficientConditions | None
    lower_bound_labelling: Labelling | None
    lower_bound_labelling_searched: bool
    undecided: tuple[str, ...] = field(default=())

    def to_json(self) -> JSONDict:
        return {
            "graph": self.name,
            "n": self.n,
            "chordal": self.chordal,
            "bridged": self.bridged,
            "nicely_bridged": self.nicely_bridged,
            "radius": self.radius,
            "diameter": self.diameter,
            "self_centered_k": self.self_centered_k,
            "sufficient_conditions": (
                asdict(self.sufficient_conditions)
                if self.sufficient_conditions else None),
            "lower_bound_labelling": (
                self.lower_bound_labelling.to_json()
                if self.lower_bound_labelling else None),
            "lower_bound_labelling_searched": self.lower_bound_labelling_searched,
            "undecided": list(self.undecided),
        }


def classify(g: Graph, budgets: Budgets = DEFAULT_BUDGETS) -> ClassReport:
    """Run every class check, leaving a field `None` past its budget."""
    undecided: list[str] = []
    chordal = is_chordal(g)

    bridged: bool | None
    if chordal:
        bridged = True
    else:
        try:
            bridged = is_bridged(g, budgets).bridged
        except UndecidedError as e:
            undecided.append(e.budget)
            bridged = None

    conditions: SufficientConditions | None
    try:
        conditions = sufficient_conditions(g, budgets)
    except UndecidedError as e:
        undecided.append(e.budget)
        conditions = None

    nicely: bool | None
    if bridged is None:
        nicely = None
    elif not bridged:
        nicely = False
    else:
        try:
            nicely = is_nicely_bridged_exact(g, budgets)
        except UndecidedError as e:
            undecided.append(e.budget)
            nicely = True if conditions and conditions.any() else None

    labelling: Labelling | None = None
    searched = False
    try:
        labelling = find_lower_bound_labelling(g, budgets)
        searched = True
    except UndecidedError as e:
        undecided.append(e.budget)

    report = ClassReport(
        name=g.name,
        n=g.n,
        chordal=chordal.chordal,
        bridged=bridged,
        nicely_bridged=nicely,
        radius=radius(g),
        diameter=diameter(g),
        self_centered_k=self_centered_k(g),
        sufficient_conditions=conditions,
        lower_bound_labelling=labelling,
        lower_bound_labelling_searched=searched,
        undecided=tuple(dict.fromkeys(undecided)),
    )
    log.info(
        "%s: chordal=%s bridged=%s nicely_bridged=%s",
        g.name or repr(g), report.chordal, report.bridged, report.nicely_bridged)
    return report
