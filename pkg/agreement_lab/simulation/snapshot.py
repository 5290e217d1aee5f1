"""Replay a protocol against one canonical schedule."""
from __future__ import annotations

import logging

from collections.abc import Sequence
from typing import TYPE_CHECKING

from agreement_lab.errors import ScheduleError
from agreement_lab.graphs.core import Graph
from agreement_lab.simulation.schedules import ScheduleOutcome, validate_schedule
from agreement_lab.simulation.trace import ExecutionTrace, Iteration

if TYPE_CHECKING:
    from agreement_lab.protocols.agreement import ProtocolSpec


__all__ = [
    'SnapshotObject',
    'run',
]


log = logging.getLogger(__name__)


class SnapshotObject:
    """`n` single-writer components, each written at most once."""

    def __init__(self, n: int):
        self._components: list[int | None] = [None] * n

    def update(self, process: int, value: int) -> None:
        if self._components[process] is not None:
            raise ScheduleError(f"process {process} wrote its component twice")
        self._components[process] = value

    def component(self, process: int) -> int | None:
        return self._components[process]

    def scan(self, writers: Sequence[int]) -> frozenset[int]:
        """Values of the given components, which must all be written."""
        values = [self._components[p] for p in writers]
        if any(v is None for v in values):
            raise ScheduleError("scan reads an empty component as written")
        return frozenset(v for v in values if v is not None)


def run(
    protocol: ProtocolSpec,
    g: Graph,
    inputs: Sequence[int],
    schedule: ScheduleOutcome,
    seed: int | None = None
) -> ExecutionTrace:
    """Deterministically execute `protocol` under `schedule`.

    Raises:
        `ScheduleError` if the schedule breaks the protocol's wait
        rule or crash bound, or has the wrong number of objects.
    """
    n = len(inputs)
    for x in inputs:
        if not 0 <= x < g.n:
            raise ValueError(f"input {x} is not a vertex of {g!r}")
    if schedule.num_objects != protocol.num_objects:
        raise ScheduleError(
            f"schedule has {schedule.num_objects} objects,"
            f" {protocol.id} needs {protocol.num_objects}")
    validate_schedule(schedule, n, protocol.wait_rule, protocol.max_crashes(n))

    current: list[int | None] = list(inputs)
    iterations: list[Iteration] = []
    for t, outcome in enumerate(schedule.objects):
        obj = SnapshotObject(n)
        for p in outcome.update_order:
            value = current[p]
            assert value is not None
            obj.update(p, value)
        views: list[frozenset[int] | None] = [None] * n
        chosen: list[int | None] = [None] * n
        for p, k in outcome.view_cuts:
            own = current[p]
            assert own is not None
            view = obj.scan(outcome.update_order[:k])
            views[p] = view
            chosen[p] = protocol.step(t, own, view)
        iterations.append(Iteration(t, protocol.phase(t), tuple(views), tuple(chosen)))
        current = chosen

    trace = ExecutionTrace(
        graph=g,
        protocol=str(protocol.id),
        model="async",
        inputs=tuple(inputs),
        iterations=tuple(iterations),
        outputs=tuple(current),
        schedule=schedule,
        seed=seed,
        resilience=protocol.max_crashes(n),
    )
    log.debug("outputs %s", trace.outputs)
    return trace
