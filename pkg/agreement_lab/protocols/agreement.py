"""Approximate agreement protocols as step functions.

Each protocol runs one snapshot object per iteration. Process `i`
writes its current vertex `x_i(t)`, scans a view `X_i(t)` and moves
to `step(t, x_i(t), X_i(t))`. The value after the last iteration is
its decision.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property, lru_cache

from agreement_lab.annotations import JSONDict, Vertex, VertexSet
from agreement_lab.errors import EmptyVertexSetError, ProtocolError
from agreement_lab.graphs.core import (
    Graph,
    convex_hull,
    diameter,
    midpoint_g,
    simplicial_vertices,
)
from agreement_lab.simulation.schedules import WaitRule


__all__ = [
    'ProtocolId',
    'ProtocolSpec',
    'OneResilientProtocol',
    'WaitFreeBridgedProtocol',
    'ceil_log2',
    'ceil_log_three_halves',
    'psi_path',
    'psi_center',
    'make_one_resilient',
    'make_wait_free_bridged',
    'make_protocol',
    'protocol_metadata',
]


class ProtocolId(StrEnum):
    ONE_RESILIENT = "one-resilient"
    WAIT_FREE_BRIDGED = "wait-free-bridged"


def ceil_log2(d: int) -> int:
    """Smallest `T >= 0` with `2**T >= d`."""
    return max(d - 1, 0).bit_length()


def ceil_log_three_halves(d: int) -> int:
    """Smallest `T >= 0` with `(3/2)**T >= d`, in integers."""
    t = 0
    while 3 ** t < d * 2 ** t:
        t += 1
    return t


def psi_path(g: Graph, x_set: VertexSet) -> Vertex:
    """A singleton's member, or the fixed midpoint of a pair.

    Raises:
        `ProtocolError` for sets of any other size.
    """
    members = sorted(x_set)
    if len(members) == 1:
        return members[0]
    if len(members) == 2:
        return midpoint_g(g, members[0], members[1])
    raise ProtocolError(f"path rule needs one or two values, got {members}")


def psi_center(g: Graph, x_set: VertexSet) -> Vertex:
    """A center vertex of the hull, non-simplicial ones first.

    Ties go to the smallest id.
    """
    if not x_set:
        raise EmptyVertexSetError()
    return _psi_center(g, frozenset(x_set))


@lru_cache(maxsize=1 << 16)
def _psi_center(g: Graph, x_set: VertexSet) -> Vertex:
    hull = convex_hull(g, x_set)
    members = sorted(hull)
    # a convex set keeps its geodesics, so eccentricity within H reads off G
    ecc = g.distances.within(members).max(axis=1)
    low = ecc.min()
    center = [v for v, e in zip(members, ecc) if e == low]
    simplicial = simplicial_vertices(g, hull)
    preferred = [v for v in center if v not in simplicial]
    return (preferred or center)[0]


@dataclass(frozen=True)
class ProtocolSpec(ABC):
    graph: Graph

    id: ProtocolId = ProtocolId.ONE_RESILIENT
    wait_rule: WaitRule = WaitRule.WAIT_FREE

    @property
    @abstractmethod
    def iterations(self) -> int:
        """`T`: the last iteration index; objects are `0..T`."""

    @property
    def num_objects(self) -> int:
        return self.iterations + 1

    @property
    @abstractmethod
    def formula(self) -> str:
        ...

    @abstractmethod
    def max_crashes(self, n: int) -> int:
        ...

    @abstractmethod
    def phase(self, t: int) -> str:
        ...

    @abstractmethod
    def step(self, t: int, own: Vertex, view: VertexSet) -> Vertex:
        ...

    @cached_property
    def diameter(self) -> int:
        return diameter(self.graph)


@dataclass(frozen=True)
class OneResilientProtocol(ProtocolSpec):
    """Min phase on object 0, then `T = ceil(log2 diam)` path phases."""

    id: ProtocolId = ProtocolId.ONE_RESILIENT
    wait_rule: WaitRule = WaitRule.WAIT_N_MINUS_ONE

    @property
    def iterations(self) -> int:
        return ceil_log2(self.diameter)

    @property
    def formula(self) -> str:
        return f"T = ceil(log2 {self.diameter}) = {self.iterations}"

    def max_crashes(self, n: int) -> int:
        return 1

    def phase(self, t: int) -> str:
        return "min" if t == 0 else "path"

    def step(self, t: int, own: Vertex, view: VertexSet) -> Vertex:
        if t == 0:
            return min(view)
        return psi_path(self.graph, view)


@dataclass(frozen=True)
class WaitFreeBridgedProtocol(ProtocolSpec):
    """`T = max(|V|, T*)` center steps with `T* = ceil(log1.5 diam) + 1`."""

    id: ProtocolId = ProtocolId.WAIT_FREE_BRIDGED
    wait_rule: WaitRule = WaitRule.WAIT_FREE

    @property
    def t_star(self) -> int:
        return ceil_log_three_halves(self.diameter) + 1

    @property
    def iterations(self) -> int:
        return max(self.graph.n, self.t_star)

    @property
    def formula(self) -> str:
        return (
            f"T* = ceil(log1.5 {self.diameter}) + 1 = {self.t_star};"
            f" T = max({self.graph.n}, {self.t_star}) = {self.iterations}")

    def max_crashes(self, n: int) -> int:
        return max(n - 1, 0)

    def phase(self, t: int) -> str:
        return "center"

    def step(self, t: int, own: Vertex, view: VertexSet) -> Vertex:
        return psi_center(self.graph, view)


def make_one_resilient(g: Graph) -> OneResilientProtocol:
    return OneResilientProtocol(g)


def make_wait_free_bridged(g: Graph) -> WaitFreeBridgedProtocol:
    return WaitFreeBridgedProtocol(g)


def make_protocol(protocol: ProtocolId | str, g: Graph) -> ProtocolSpec:
    match ProtocolId(protocol):
        case ProtocolId.ONE_RESILIENT:
            return make_one_resilient(g)
        case ProtocolId.WAIT_FREE_BRIDGED:
            return make_wait_free_bridged(g)


def protocol_metadata(p: ProtocolSpec) -> JSONDict:
    return {
        "protocol": str(p.id),
        "graph": p.graph.name,
        "diameter": p.diameter,
        "num_objects": p.num_objects,
        "wait_rule": str(p.wait_rule),
        "formula": p.formula,
    }
