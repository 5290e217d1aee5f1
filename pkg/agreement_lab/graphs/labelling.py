"""Lower-bound labellings: the obstruction to 1-resilient agreement.

A labelling `V -> {0, 1, 2}` qualifies when

1. no triangle of `G` carries all three labels, and
2. some simple cycle of `G` holds exactly one vertex labelled 1,
   whose two cycle neighbours are labelled 0 and 2.
"""
from __future__ import annotations

import logging

from dataclasses import dataclass
from typing import Any

import networkx as nx

from agreement_lab.annotations import JSONDict, Vertex
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import LabellingError
from agreement_lab.graphs.core import Graph


__all__ = [
    'Labelling',
    'find_lower_bound_labelling',
    'verify_lower_bound_labelling',
]


log = logging.getLogger(__name__)


LABELS = (0, 1, 2)


@dataclass(frozen=True)
class Labelling:
    """Labels indexed by vertex plus the witness cycle.

    Labellings found by search list the cycle starting at its single
    1-labelled vertex `v1`, then its 0-labelled neighbour `v0`, ending
    at the 2-labelled `v2`.
    """

    labels: tuple[int, ...]
    cycle: tuple[int, ...] | None = None

    def __getitem__(self, v: Vertex) -> int:
        return self.labels[v]

    def _require_cycle(self) -> tuple[int, ...]:
        if not self.cycle:
            raise LabellingError("labelling has no witness cycle")
        return self.cycle

    def witness(self) -> tuple[Vertex, Vertex, Vertex]:
        """`(v0, v1, v2)` read off the cycle.

        Raises:
            `LabellingError` unless exactly one cycle vertex is
            labelled 1 and it is flanked by labels 0 and 2.
        """
        cycle = self._require_cycle()
        ones = [i for i, v in enumerate(cycle) if self.labels[v] == 1]
        if len(ones) != 1:
            raise LabellingError(
                "witness cycle must hold exactly one vertex labelled 1",
                (cycle[i] for i in ones))
        i = ones[0]
        before, after = cycle[i - 1], cycle[(i + 1) % len(cycle)]
        by_label = {self.labels[before]: before, self.labels[after]: after}
        if set(by_label) != {0, 2}:
            raise LabellingError(
                "vertex labelled 1 must be flanked by 0 and 2",
                (before, cycle[i], after))
        return by_label[0], cycle[i], by_label[2]

    @property
    def v0(self) -> Vertex:
        return self.witness()[0]

    @property
    def v1(self) -> Vertex:
        return self.witness()[1]

    @property
    def v2(self) -> Vertex:
        return self.witness()[2]

    def to_json(self) -> JSONDict:
        document: JSONDict = {
            "labels": list(self.labels),
            "cycle": list(self.cycle) if self.cycle else None,
        }
        if self.cycle:
            try:
                v0, v1, v2 = self.witness()
            except LabellingError:
                return document
            document.update(v0=v0, v1=v1, v2=v2)
        return document

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> Labelling:
        try:
            labels = tuple(int(x) for x in document["labels"])
            raw_cycle = document.get("cycle")
        except (KeyError, TypeError, ValueError) as e:
            raise LabellingError(f"malformed labelling document: {e}") from e
        cycle = tuple(int(v) for v in raw_cycle) if raw_cycle else None
        return cls(labels, cycle)


def _witness_cycle(g: Graph, labels: list[int]) -> tuple[int, ...] | None:
    """Smallest `v1` with a 0- and a 2-neighbour joined outside label 1."""
    free = [v for v in g.vertices if labels[v] != 1]
    if not free:
        return None
    rest = g.to_networkx().subgraph(free)
    for v1 in g.vertices:
        if labels[v1] != 1:
            continue
        zeros = [u for u in g.adjacency[v1] if labels[u] == 0]
        twos = [u for u in g.adjacency[v1] if labels[u] == 2]
        for a in zeros:
            for b in twos:
                if nx.has_path(rest, a, b):
                    path = nx.shortest_path(rest, a, b)
                    return (v1, *path)
    return None


def find_lower_bound_labelling(
    g: Graph,
    budgets: Budgets = DEFAULT_BUDGETS
) -> Labelling | None:
    """Exhaustive lexicographic search, pruning rainbow triangles early.

    Raises:
        `UndecidedError` past `budgets.labelling_vertices`.
    """
    budgets.check("labelling_vertices", g.n)

    # Each triangle is checked once its largest vertex is labelled.
    closing: list[list[tuple[int, int]]] = [[] for _ in g.vertices]
    for u, v, w in g.triangles:
        closing[w].append((u, v))

    labels = [0] * g.n
    leaves = 0

    def assign(v: int) -> Labelling | None:
        nonlocal leaves
        if v == g.n:
            leaves += 1
            cycle = _witness_cycle(g, labels)
            return Labelling(tuple(labels), cycle) if cycle else None
        for label in LABELS:
            labels[v] = label
            if any(
                {labels[a], labels[b], label} == {0, 1, 2}
                for a, b in closing[v]
            ):
                continue
            found = assign(v + 1)
            if found:
                return found
        return None

    found = assign(0)
    log.debug("labelling search on %r visited %d leaves", g, leaves)
    return found


def _is_simple_cycle(g: Graph, cycle: tuple[int, ...]) -> bool:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    return all(
        g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)])
        for i in range(len(cycle)))


def verify_lower_bound_labelling(g: Graph, lab: Labelling) -> bool:
    """Check both defining conditions against the stored cycle.

    Raises:
        `LabellingError` if the labelling is not total over `V` or
        carries no witness cycle.
    """
    if len(lab.labels) != g.n or any(x not in LABELS for x in lab.labels):
        raise LabellingError(f"labelling must map all {g.n} vertices into {{0,1,2}}")
    cycle = lab._require_cycle()

    for triangle in g.triangles:
        if {lab[v] for v in triangle} == {0, 1, 2}:
            log.debug("rainbow triangle %s", triangle)
            return False

    if not _is_simple_cycle(g, cycle):
        log.debug("witness %s is not a simple cycle", cycle)
        return False
    try:
        lab.witness()
    except LabellingError as e:
        log.debug("%s", e)
        return False
    return True
