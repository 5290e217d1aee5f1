"""Batches of executions, their verdicts and an order-insensitive summary.

A batch is a numbered stream of schedules (or synchronous adversaries).
Each one is executed and checked independently, optionally on a process
pool; results always come back in schedule order.
"""
from __future__ import annotations

import itertools
import json
import logging

from collections import Counter, deque
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from functools import partial
from pathlib import Path
from typing import Any, Final, TypeVar

import numpy as np

from agreement_lab.annotations import JSONDict
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import ScheduleError
from agreement_lab.graphs.core import Graph
from agreement_lab.graphs.labelling import Labelling
from agreement_lab.protocols.agreement import ProtocolId, make_protocol
from agreement_lab.protocols.reduction import (
    ReductionSchedule,
    enumerate_reduction_schedules,
    make_reduction,
    random_reduction_schedule,
    reduction_two_set,
)
from agreement_lab.simulation.adversary import (
    RoundAdversary,
    enumerate_adversaries,
    random_adversary,
)
from agreement_lab.simulation.schedules import (
    ScheduleOutcome,
    enumerate_schedules,
    random_schedule,
)
from agreement_lab.simulation.snapshot import run
from agreement_lab.simulation.sync import SYNC_PROTOCOL, run_sync, sync_rounds
from agreement_lab.simulation.trace import ExecutionTrace, trace_to_json
from agreement_lab.verify import Verdict, VerdictBundle, check_trace, check_two_set


__all__ = [
    'Model',
    'ScheduleMode',
    'Experiment',
    'RunRecord',
    'BatchSummary',
    'sample_seeds',
    'load_schedules',
    'run_batch',
    'summarize',
    'run_reduction_batch',
]


log = logging.getLogger(__name__)


T = TypeVar('T')
R = TypeVar('R')


CHUNK_SIZE: Final = 256
"""Runs per task handed to a worker process."""


class Model(StrEnum):
    ASYNC = "async"
    SYNC = "sync"


class ScheduleMode(StrEnum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"
    FILE = "file"


Plan = ScheduleOutcome | RoundAdversary


def sample_seeds(seed: int, samples: int) -> list[int]:
    """`samples` independent per-run seeds derived from one seed."""
    state = np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint64)
    return [int(s) for s in state]


@dataclass(frozen=True)
class Experiment:
    """One graph, one input vector and one protocol family."""

    graph: Graph
    inputs: tuple[int, ...]
    protocol: str = str(ProtocolId.ONE_RESILIENT)
    model: Model = Model.ASYNC
    crashes: int | None = None
    """Crash bound; defaults to the protocol's own resilience, 0 for sync."""
    budgets: Budgets = DEFAULT_BUDGETS

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def family(self) -> str:
        return SYNC_PROTOCOL if self.model is Model.SYNC else self.protocol

    def crash_bound(self) -> int:
        if self.model is Model.SYNC:
            return self.crashes or 0
        spec = make_protocol(self.protocol, self.graph)
        limit = spec.max_crashes(self.n)
        if self.crashes is None:
            return limit
        if self.crashes > limit:
            raise ScheduleError(
                f"{spec.id} tolerates at most {limit} crashes, asked for {self.crashes}")
        return self.crashes

    def exhaustive(self) -> Iterator[Plan]:
        f = self.crash_bound()
        if self.model is Model.SYNC:
            rounds = sync_rounds(self.graph, f)
            yield from enumerate_adversaries(self.n, f, rounds, self.budgets)
            return
        spec = make_protocol(self.protocol, self.graph)
        yield from enumerate_schedules(
            self.n, spec.num_objects, spec.wait_rule, f, budgets=self.budgets)

    def sampled(self, seed: int, samples: int) -> Iterator[tuple[int, Plan]]:
        """`(seed, plan)` pairs drawn from per-run seeds."""
        f = self.crash_bound()
        if self.model is Model.SYNC:
            rounds = sync_rounds(self.graph, f)
            for s in sample_seeds(seed, samples):
                yield s, random_adversary(self.n, f, rounds, s)
            return
        spec = make_protocol(self.protocol, self.graph)
        for s in sample_seeds(seed, samples):
            yield s, random_schedule(self.n, spec.num_objects, spec.wait_rule, f, s)

    def execute(self, plan: Plan, seed: int | None = None) -> ExecutionTrace:
        if self.model is Model.SYNC:
            if not isinstance(plan, RoundAdversary):
                raise ScheduleError("synchronous runs need a round adversary")
            return run_sync(self.graph, self.inputs, self.crash_bound(), plan, seed)
        if not isinstance(plan, ScheduleOutcome):
            raise ScheduleError("asynchronous runs need a snapshot schedule")
        spec = make_protocol(self.protocol, self.graph)
        return run(spec, self.graph, self.inputs, plan, seed)

    def describe(self) -> JSONDict:
        return {
            "graph": self.graph.name,
            "protocol": self.family,
            "model": str(self.model),
            "inputs": list(self.inputs),
            "crashes": self.crash_bound(),
        }


def load_schedules(path: Path | str, model: Model) -> list[Plan]:
    """Read one schedule, or `{"schedules": [...]}`, from a JSON file."""
    with open(path, "r", encoding="utf-8") as f:
        document: Any = json.load(f)
    if isinstance(document, dict) and "schedules" in document:
        raw = document["schedules"]
    else:
        raw = [document]
    try:
        if model is Model.SYNC:
            return [RoundAdversary.from_json(d) for d in raw]
        return [ScheduleOutcome.from_json(d) for d in raw]
    except (KeyError, TypeError) as e:
        raise ScheduleError(f"malformed schedule file {str(path)!r}: {e!r}") from e


@dataclass(frozen=True)
class RunRecord:
    index: int
    trace: ExecutionTrace
    verdicts: VerdictBundle

    @property
    def passed(self) -> bool:
        return self.verdicts.passed


def _apply_all(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    return [fn(item) for item in items]


def _ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int,
    chunk: int = CHUNK_SIZE
) -> Iterator[R]:
    """`map` over a process pool holding at most `2 * workers` chunks.

    `items` is consumed lazily, so sample streams of any length run in
    bounded memory. `fn` must pickle.
    """
    if workers <= 1:
        yield from map(fn, items)
        return
    pending: deque[Future[list[R]]] = deque()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in itertools.batched(items, chunk):
            pending.append(pool.submit(_apply_all, fn, batch))
            if len(pending) >= 2 * workers:
                yield from pending.popleft().result()
        while pending:
            yield from pending.popleft().result()


def _run_one(
    experiment: Experiment,
    job: tuple[int, tuple[int | None, Plan]]
) -> RunRecord:
    index, (seed, plan) = job
    trace = experiment.execute(plan, seed)
    bundle = check_trace(
        experiment.graph, trace, experiment.family, experiment.budgets)
    return RunRecord(index, trace, bundle)


def run_batch(
    experiment: Experiment,
    plans: Iterable[tuple[int | None, Plan]],
    workers: int = 1
) -> Iterator[RunRecord]:
    """Execute and check each `(seed, plan)`, yielding in input order."""
    yield from _ordered_map(partial(_run_one, experiment), enumerate(plans), workers)


@dataclass
class BatchSummary:
    """Counts that do not depend on the order runs finish in."""

    runs: int = 0
    passes: int = 0
    failures: int = 0
    first_failure: JSONDict | None = None
    failure_counts: Counter[str] = field(default_factory=Counter)
    details: JSONDict = field(default_factory=dict)

    def add(self, record: RunRecord, trace_path: Path | None = None) -> None:
        self.runs += 1
        if record.passed:
            self.passes += 1
            return
        self.failures += 1
        self.failure_counts.update(record.verdicts.failure_counts)
        current = self.first_failure
        if current is None or record.index < current["index"]:
            lemma, t = record.verdicts.first_failure or (None, None)
            self.first_failure = {
                "index": record.index,
                "lemma": lemma,
                "t": t,
                "trace": None if trace_path is None else str(trace_path),
            }

    def to_json(self) -> JSONDict:
        return {
            **self.details,
            "runs": self.runs,
            "passes": self.passes,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "failure_counts": dict(sorted(self.failure_counts.items())),
        }


def write_trace(out_dir: Path, record: RunRecord) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"trace-{record.index}.json"
    path.write_text(trace_to_json(record.trace) + "\n", encoding="utf-8")
    return path


def summarize(
    records: Iterable[RunRecord],
    out_dir: Path | None = None,
    details: JSONDict | None = None
) -> BatchSummary:
    """Fold records into a summary, writing failing traces to `out_dir`."""
    summary = BatchSummary(details=dict(details or {}))
    for record in records:
        path = None
        if not record.passed and out_dir is not None:
            path = write_trace(out_dir, record)
        summary.add(record, path)
    log.info(
        "%d runs: %d passed, %d failed", summary.runs, summary.passes, summary.failures)
    return summary


@dataclass(frozen=True)
class ReductionRecord:
    index: int
    outputs: tuple[int | None, ...]
    verdict: Verdict

    def to_json(self) -> JSONDict:
        return {
            "index": self.index,
            "outputs": list(self.outputs),
            "verdict": self.verdict.to_json(),
        }


def run_reduction_batch(
    g: Graph,
    labelling: Labelling,
    inputs: Sequence[int],
    mode: ScheduleMode = ScheduleMode.EXHAUSTIVE,
    seed: int | None = None,
    samples: int = 1,
    max_crashes: int = 1,
    protocol: str = str(ProtocolId.ONE_RESILIENT),
    budgets: Budgets = DEFAULT_BUDGETS
) -> Iterator[ReductionRecord]:
    """2-set agreement through the labelling, checked run by run.

    Raises:
        `LabellingError` if `labelling` is not a lower bound labelling.
        `ScheduleError` for file mode, which the reduction lacks.
    """
    reduction = make_reduction(g, labelling, protocol)
    schedules: Iterable[ReductionSchedule]
    match mode:
        case ScheduleMode.EXHAUSTIVE:
            schedules = enumerate_reduction_schedules(
                reduction, inputs, max_crashes, budgets)
        case ScheduleMode.RANDOM:
            if seed is None:
                raise ScheduleError("random schedules need an explicit seed")
            schedules = (
                random_reduction_schedule(reduction, inputs, max_crashes, s)
                for s in sample_seeds(seed, samples))
        case _:
            raise ScheduleError(f"the reduction does not read {mode} schedules")
    for index, schedule in enumerate(schedules):
        result = reduction_two_set(reduction, inputs, schedule)
        yield ReductionRecord(index, result.outputs, check_two_set(inputs, result.outputs))
