"""2-set agreement on `{0, 1, 2}` from approximate agreement.

Given a lower-bound labelling with witness cycle `C` through
`v0 - v1 - v2`:

* processes with input 0 or 2 first run protocol A on the path
  `C - v1`, entering at `v0` or `v2`;
* everyone then runs protocol B on `G`, entering with their A output
  or, for input 1, with `v1`;
* each process outputs the label of its B output.

A process that crashes during A never reaches B.
"""
from __future__ import annotations

import itertools
import logging

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import LabellingError, ProtocolError, ScheduleError
from agreement_lab.graphs.core import Graph
from agreement_lab.graphs.fixtures import path_graph
from agreement_lab.graphs.labelling import Labelling, verify_lower_bound_labelling
from agreement_lab.protocols.agreement import ProtocolId, ProtocolSpec, make_protocol
from agreement_lab.simulation.schedules import (
    CrashPhase,
    CrashPoint,
    ScheduleOutcome,
    enumerate_schedules,
    random_schedule,
)
from agreement_lab.simulation.snapshot import run
from agreement_lab.simulation.trace import ExecutionTrace


__all__ = [
    'WitnessPath',
    'Reduction',
    'ReductionSchedule',
    'ReductionResult',
    'witness_path',
    'make_reduction',
    'reduction_two_set',
    'enumerate_reduction_schedules',
    'random_reduction_schedule',
]


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessPath:
    """`C - v1` as a path graph; path vertex `j` is `to_graph[j]` in `G`."""

    path: Graph
    to_graph: tuple[int, ...]

    @property
    def start(self) -> int:
        return 0

    @property
    def end(self) -> int:
        return self.path.n - 1


def witness_path(g: Graph, lab: Labelling) -> WitnessPath:
    """The path from `v0` to `v2` around the cycle, avoiding `v1`.

    Raises:
        `LabellingError` unless `lab` is a valid lower-bound labelling.
    """
    if not verify_lower_bound_labelling(g, lab):
        raise LabellingError("not a lower-bound labelling of this graph")
    cycle = lab._require_cycle()
    v0, v1, v2 = lab.witness()
    i = cycle.index(v1)
    rotated = cycle[i + 1:] + cycle[:i]
    if rotated[0] != v0:
        rotated = rotated[::-1]
    assert rotated[0] == v0 and rotated[-1] == v2
    return WitnessPath(path_graph(len(rotated)), tuple(rotated))


@dataclass(frozen=True)
class Reduction:
    graph: Graph
    labelling: Labelling
    witness: WitnessPath
    alg_a: ProtocolSpec
    alg_b: ProtocolSpec


def make_reduction(
    g: Graph,
    lab: Labelling,
    protocol: ProtocolId | str = ProtocolId.ONE_RESILIENT
) -> Reduction:
    """Use the same protocol family for A (on the path) and B (on `G`)."""
    witness = witness_path(g, lab)
    return Reduction(
        graph=g,
        labelling=lab,
        witness=witness,
        alg_a=make_protocol(protocol, witness.path),
        alg_b=make_protocol(protocol, g),
    )


@dataclass(frozen=True)
class ReductionSchedule:
    a: ScheduleOutcome | None
    """Over the A participants, renumbered `0..n_A-1`; `None` if none."""
    b: ScheduleOutcome


@dataclass(frozen=True)
class ReductionResult:
    outputs: tuple[int | None, ...]
    """Labels decided, `None` for crashed processes."""
    trace_a: ExecutionTrace | None
    trace_b: ExecutionTrace


def _a_participants(inputs: Sequence[int]) -> list[int]:
    for x in inputs:
        if x not in (0, 1, 2):
            raise ProtocolError(f"2-set inputs must lie in {{0,1,2}}, got {x}")
    return [i for i, x in enumerate(inputs) if x != 1]


def _forced_b_crashes(
    a_schedule: ScheduleOutcome | None,
    participants: list[int]
) -> list[CrashPoint]:
    if a_schedule is None:
        return []
    return [
        CrashPoint(participants[c.process], 0, CrashPhase.BEFORE_UPDATE)
        for c in a_schedule.crashes]


def reduction_two_set(
    reduction: Reduction,
    inputs: Sequence[int],
    schedule: ReductionSchedule
) -> ReductionResult:
    """Run A then B and map B's decisions through the labelling.

    Raises:
        `ScheduleError` if B does not crash, before its first update,
        exactly the processes that crashed in A.
    """
    participants = _a_participants(inputs)
    witness = reduction.witness

    trace_a = None
    v1 = reduction.labelling.witness()[1]
    entry = [v1] * len(inputs)
    if participants:
        if schedule.a is None:
            raise ProtocolError("processes with inputs 0 or 2 need an A schedule")
        a_inputs = [
            witness.start if inputs[i] == 0 else witness.end for i in participants]
        trace_a = run(reduction.alg_a, witness.path, a_inputs, schedule.a)
        for j, i in enumerate(participants):
            out = trace_a.outputs[j]
            if out is not None:
                entry[i] = witness.to_graph[out]

    forced = _forced_b_crashes(schedule.a, participants)
    for crash in forced:
        b_crash = schedule.b.crash_of(crash.process)
        if b_crash != crash:
            raise ScheduleError(
                f"process {crash.process} crashed in A but not before B starts")

    # crashed A participants never update in B, so their entry is unused
    trace_b = run(reduction.alg_b, reduction.graph, entry, schedule.b)
    outputs = tuple(
        None if y is None else reduction.labelling[y] for y in trace_b.outputs)
    return ReductionResult(outputs, trace_a, trace_b)


def enumerate_reduction_schedules(
    reduction: Reduction,
    inputs: Sequence[int],
    max_crashes: int,
    budgets: Budgets = DEFAULT_BUDGETS
) -> Iterator[ReductionSchedule]:
    """Every pair of A and B schedules within `max_crashes` in total."""
    participants = _a_participants(inputs)
    n = len(inputs)
    alg_a, alg_b = reduction.alg_a, reduction.alg_b
    a_schedules: list[ScheduleOutcome | None]
    if participants:
        a_schedules = list(enumerate_schedules(
            len(participants), alg_a.num_objects, alg_a.wait_rule,
            min(max_crashes, alg_a.max_crashes(len(participants))),
            budgets=budgets))
    else:
        a_schedules = [None]
    b_schedules = list(enumerate_schedules(
        n, alg_b.num_objects, alg_b.wait_rule,
        min(max_crashes, alg_b.max_crashes(n)), budgets=budgets))

    for a, b in itertools.product(a_schedules, b_schedules):
        forced = set(_forced_b_crashes(a, participants))
        if forced <= set(b.crashes):
            yield ReductionSchedule(a, b)


def random_reduction_schedule(
    reduction: Reduction,
    inputs: Sequence[int],
    max_crashes: int,
    seed: int,
    crash_rate: float = 0.1
) -> ReductionSchedule:
    participants = _a_participants(inputs)
    n = len(inputs)
    alg_a, alg_b = reduction.alg_a, reduction.alg_b
    a = None
    if participants:
        a = random_schedule(
            len(participants), alg_a.num_objects, alg_a.wait_rule,
            min(max_crashes, alg_a.max_crashes(len(participants))),
            seed, crash_rate)
    forced = _forced_b_crashes(a, participants)
    b = random_schedule(
        n, alg_b.num_objects, alg_b.wait_rule,
        min(max_crashes, alg_b.max_crashes(n)),
        seed + 1, crash_rate, forced=forced)
    return ReductionSchedule(a, b)
