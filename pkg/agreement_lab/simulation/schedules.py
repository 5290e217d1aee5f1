"""Canonical schedules for single-writer snapshot objects.

All accesses to one snapshot object happen before any access to the
next, so a schedule is one `ObjectOutcome` per object: the order in
which participants update their component, and for each scanning
process how long a prefix of that order its scan returned.

| Name                  | Description                                        |
|-----------------------|----------------------------------------------------|
| `WaitRule`            | Wait-free single scan, or wait for `n - 1` values  |
| `CrashPoint`          | Process, object and before/after its update        |
| `ScheduleOutcome`     | Per-object orders and cuts plus crash points       |
| `enumerate_schedules` | Every distinct view-vector outcome, exhaustively   |
| `random_schedule`     | Seeded sample of a well-formed outcome             |
| `naive_view_outcomes` | Step-interleaving oracle for one object            |
"""
from __future__ import annotations

import itertools
import logging
import random

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

from agreement_lab.annotations import JSONDict, ProcessId
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import ScheduleError


__all__ = [
    'WaitRule',
    'CrashPhase',
    'CrashPoint',
    'ObjectOutcome',
    'ScheduleOutcome',
    'ViewVector',
    'validate_schedule',
    'view_vector',
    'enumerate_schedules',
    'count_schedules',
    'random_schedule',
    'naive_view_outcomes',
    'ordered_set_partitions',
]


log = logging.getLogger(__name__)


ViewVector = tuple[frozenset[int] | None, ...]
"""Per process id, the ids whose update it saw (`None`: no scan)."""


class WaitRule(StrEnum):
    WAIT_FREE = "wait-free"
    """One scan after the own update."""

    WAIT_N_MINUS_ONE = "wait-n-1"
    """Scan repeatedly until at most one component is empty."""

    def min_view(self, n: int) -> int:
        if self is WaitRule.WAIT_FREE:
            return 1
        return max(n - 1, 1)


class CrashPhase(StrEnum):
    BEFORE_UPDATE = "before-update"
    AFTER_UPDATE = "after-update"


@dataclass(frozen=True, order=True)
class CrashPoint:
    """`process` stops at object `object_index`.

    Crashing after the update leaves the written value visible to
    later scans of that object but skips the scan itself.
    """

    process: ProcessId
    object_index: int
    phase: CrashPhase

    def to_json(self) -> JSONDict:
        return {
            "process": self.process,
            "object": self.object_index,
            "phase": str(self.phase),
        }

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> CrashPoint:
        try:
            return cls(
                int(document["process"]),
                int(document["object"]),
                CrashPhase(document["phase"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ScheduleError(f"malformed crash point {document!r}: {e}") from e


@dataclass(frozen=True)
class ObjectOutcome:
    update_order: tuple[ProcessId, ...]
    view_cuts: tuple[tuple[ProcessId, int], ...]
    """`(process, k)` sorted by process: its scan saw `update_order[:k]`."""

    def cut_of(self, process: ProcessId) -> int | None:
        for p, k in self.view_cuts:
            if p == process:
                return k
        return None

    def view_ids(self, process: ProcessId) -> frozenset[int] | None:
        k = self.cut_of(process)
        return None if k is None else frozenset(self.update_order[:k])

    def to_json(self) -> JSONDict:
        return {
            "update_order": list(self.update_order),
            "view_cuts": {str(p): k for p, k in self.view_cuts},
        }

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> ObjectOutcome:
        try:
            order = tuple(int(p) for p in document["update_order"])
            cuts = tuple(sorted(
                (int(p), int(k)) for p, k in document["view_cuts"].items()))
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ScheduleError(f"malformed object outcome: {e}") from e
        return cls(order, cuts)


@dataclass(frozen=True)
class ScheduleOutcome:
    objects: tuple[ObjectOutcome, ...]
    crashes: tuple[CrashPoint, ...] = ()

    @property
    def num_objects(self) -> int:
        return len(self.objects)

    def crash_of(self, process: ProcessId) -> CrashPoint | None:
        for crash in self.crashes:
            if crash.process == process:
                return crash
        return None

    def crashed(self) -> frozenset[int]:
        return frozenset(c.process for c in self.crashes)

    def to_json(self) -> JSONDict:
        return {
            "objects": [o.to_json() for o in self.objects],
            "crashes": [c.to_json() for c in self.crashes],
        }

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> ScheduleOutcome:
        try:
            objects = tuple(ObjectOutcome.from_json(o) for o in document["objects"])
            crashes = tuple(sorted(
                CrashPoint.from_json(c) for c in document.get("crashes", ())))
        except (KeyError, TypeError) as e:
            raise ScheduleError(f"malformed schedule: {e}") from e
        return cls(objects, crashes)


def _participants(
    n: int,
    t: int,
    crashes: Iterable[CrashPoint]
) -> tuple[list[int], list[int]]:
    """Processes updating and processes scanning object `t`."""
    gone: set[int] = set()
    skip_update: set[int] = set()
    skip_scan: set[int] = set()
    for c in crashes:
        if c.object_index < t:
            gone.add(c.process)
        elif c.object_index == t:
            skip_scan.add(c.process)
            if c.phase is CrashPhase.BEFORE_UPDATE:
                skip_update.add(c.process)
    updaters = [p for p in range(n) if p not in gone and p not in skip_update]
    scanners = [p for p in range(n) if p not in gone and p not in skip_scan]
    return updaters, scanners


def validate_schedule(
    schedule: ScheduleOutcome,
    n: int,
    wait_rule: WaitRule,
    max_crashes: int | None = None
) -> None:
    """Raise `ScheduleError` unless `schedule` is well-formed.

    Each object's update order must be a permutation of the processes
    still alive and not crashing before that update. Each scan must
    see the scanner's own update and at least `wait_rule.min_view(n)`
    values.
    """
    crashed = [c.process for c in schedule.crashes]
    if len(crashed) != len(set(crashed)):
        raise ScheduleError("a process crashes more than once")
    for c in schedule.crashes:
        if not 0 <= c.process < n:
            raise ScheduleError(f"crash of unknown process {c.process}")
        if not 0 <= c.object_index < schedule.num_objects:
            raise ScheduleError(f"crash at unknown object {c.object_index}")
    if max_crashes is not None and len(crashed) > max_crashes:
        raise ScheduleError(
            f"{len(crashed)} crashes exceed the bound of {max_crashes}")

    floor = wait_rule.min_view(n)
    for t, outcome in enumerate(schedule.objects):
        updaters, scanners = _participants(n, t, schedule.crashes)
        if sorted(outcome.update_order) != updaters:
            raise ScheduleError(
                f"update order {list(outcome.update_order)} is not a"
                f" permutation of {updaters}", t)
        scanned = [p for p, _ in outcome.view_cuts]
        if scanned != scanners:
            raise ScheduleError(
                f"scans by {scanned}, expected exactly {scanners}", t)
        position = {p: i for i, p in enumerate(outcome.update_order)}
        for p, k in outcome.view_cuts:
            if k < position[p] + 1:
                raise ScheduleError(f"process {p} scans before its own update", t)
            if k > len(outcome.update_order):
                raise ScheduleError(f"process {p} cut {k} past the last update", t)
            if k < floor:
                raise ScheduleError(
                    f"process {p} sees {k} values, {wait_rule} needs {floor}", t)


def view_vector(outcome: ObjectOutcome, n: int) -> ViewVector:
    return tuple(outcome.view_ids(p) for p in range(n))


def ordered_set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    """Every ordered partition of `items` into nonempty blocks."""
    if not items:
        yield []
        return
    rest = items[1:]
    first = items[0]
    for partition in ordered_set_partitions(rest):
        # join an existing block, or open a new one in any slot
        for i in range(len(partition)):
            yield partition[:i] + [[first, *partition[i]]] + partition[i + 1:]
        for i in range(len(partition) + 1):
            yield partition[:i] + [[first]] + partition[i:]


def _immediate_outcome(blocks: list[list[int]], scanners: set[int]) -> ObjectOutcome:
    order: list[int] = []
    cuts: list[tuple[int, int]] = []
    for block in blocks:
        order.extend(sorted(block))
        cuts.extend((p, len(order)) for p in block if p in scanners)
    return ObjectOutcome(tuple(order), tuple(sorted(cuts)))


def _object_outcomes(
    updaters: list[int],
    scanners: list[int],
    floor: int,
    immediate: bool
) -> Iterator[ObjectOutcome]:
    """Every legal outcome for one object, possibly with repeats."""
    if immediate:
        scanning = set(scanners)
        for blocks in ordered_set_partitions(updaters):
            yield _immediate_outcome(blocks, scanning)
        return
    for order in itertools.permutations(updaters):
        position = {p: i for i, p in enumerate(order)}
        ranges = [
            range(max(position[p] + 1, floor), len(order) + 1)
            for p in scanners]
        for ks in itertools.product(*ranges):
            yield ObjectOutcome(order, tuple(zip(scanners, ks)))


def _crash_choices(
    alive: list[int],
    t: int,
    spare: int
) -> Iterator[tuple[CrashPoint, ...]]:
    for size in range(min(spare, len(alive)) + 1):
        for victims in itertools.combinations(alive, size):
            for phases in itertools.product(CrashPhase, repeat=size):
                yield tuple(
                    CrashPoint(p, t, phase) for p, phase in zip(victims, phases))


def _check_rule(n: int, wait_rule: WaitRule, max_crashes: int, immediate: bool) -> None:
    if n < 1:
        raise ScheduleError(f"need at least one process, got {n}")
    if wait_rule is WaitRule.WAIT_N_MINUS_ONE and max_crashes > 1:
        raise ScheduleError("waiting for n-1 values tolerates at most one crash")
    if immediate and wait_rule is not WaitRule.WAIT_FREE:
        raise ScheduleError("immediate snapshots are only modelled wait-free")


def enumerate_schedules(
    n: int,
    num_objects: int,
    wait_rule: WaitRule,
    max_crashes: int = 0,
    immediate: bool = False,
    budgets: Budgets = DEFAULT_BUDGETS
) -> Iterator[ScheduleOutcome]:
    """Yield each distinct canonical outcome once.

    Two outcomes of one object are the same when they crash the same
    processes and hand every process the same view; the first one
    generated is kept. With `immediate`, views are restricted to
    unions of whole concurrency blocks.

    Raises:
        `UndecidedError` past the enumeration budgets.
        `ScheduleError` for a wait rule the crash bound cannot meet.
    """
    hint = "use randomized mode"
    budgets.check("enumeration_processes", n, hint)
    budgets.check("enumeration_objects", num_objects, hint)
    _check_rule(n, wait_rule, max_crashes, immediate)
    floor = wait_rule.min_view(n)

    def per_object(
        t: int,
        crashes: tuple[CrashPoint, ...]
    ) -> Iterator[tuple[ObjectOutcome, tuple[CrashPoint, ...]]]:
        gone = {c.process for c in crashes}
        alive = [p for p in range(n) if p not in gone]
        seen: set[tuple[frozenset[int], ViewVector]] = set()
        for new in _crash_choices(alive, t, max_crashes - len(crashes)):
            all_crashes = crashes + new
            updaters, scanners = _participants(n, t, all_crashes)
            if len(updaters) < floor and scanners:
                continue
            for outcome in _object_outcomes(updaters, scanners, floor, immediate):
                key = (frozenset(c.process for c in new), view_vector(outcome, n))
                if key in seen:
                    continue
                seen.add(key)
                yield outcome, new

    def walk(
        t: int,
        objects: tuple[ObjectOutcome, ...],
        crashes: tuple[CrashPoint, ...]
    ) -> Iterator[ScheduleOutcome]:
        if t == num_objects:
            yield ScheduleOutcome(objects, tuple(sorted(crashes)))
            return
        for outcome, new in per_object(t, crashes):
            yield from walk(t + 1, objects + (outcome,), crashes + new)

    yield from walk(0, (), ())


def count_schedules(*args: Any, **kwargs: Any) -> int:
    """Size of `enumerate_schedules(*args, **kwargs)`."""
    total = sum(1 for _ in enumerate_schedules(*args, **kwargs))
    log.info("enumerated %d schedules", total)
    return total


def random_schedule(
    n: int,
    num_objects: int,
    wait_rule: WaitRule,
    max_crashes: int,
    seed: int,
    crash_rate: float = 0.1,
    immediate: bool = False,
    forced: Iterable[CrashPoint] = ()
) -> ScheduleOutcome:
    """A well-formed outcome drawn from `random.Random(seed)`.

    Each live process crashes at each object with probability
    `crash_rate` while the crash bound allows; orders are uniform
    permutations and cuts uniform over their legal range. `forced`
    crashes are placed first and count against `max_crashes`.
    """
    _check_rule(n, wait_rule, max_crashes, immediate)
    rng = random.Random(seed)
    floor = wait_rule.min_view(n)
    crashes: list[CrashPoint] = list(forced)
    if len(crashes) > max_crashes:
        raise ScheduleError(f"{len(crashes)} forced crashes exceed {max_crashes}")
    objects: list[ObjectOutcome] = []

    for t in range(num_objects):
        gone = {c.process for c in crashes}
        for p in range(n):
            if p in gone or len(crashes) >= max_crashes:
                continue
            if crash_rate > 0 and rng.random() < crash_rate:
                crashes.append(CrashPoint(p, t, rng.choice(list(CrashPhase))))
        updaters, scanners = _participants(n, t, crashes)

        if immediate:
            order = updaters[:]
            rng.shuffle(order)
            blocks: list[list[int]] = []
            for p in order:
                if blocks and rng.random() < 0.5:
                    blocks[-1].append(p)
                else:
                    blocks.append([p])
            objects.append(_immediate_outcome(blocks, set(scanners)))
            continue

        order = updaters[:]
        rng.shuffle(order)
        position = {p: i for i, p in enumerate(order)}
        cuts = tuple(
            (p, rng.randint(max(position[p] + 1, floor), len(order)))
            for p in scanners)
        objects.append(ObjectOutcome(tuple(order), cuts))

    return ScheduleOutcome(tuple(objects), tuple(sorted(crashes)))


def naive_view_outcomes(n: int, wait_rule: WaitRule) -> set[ViewVector]:
    """View vectors of one object under every update/scan interleaving.

    Each process updates, then scans; a scan seeing fewer than
    `wait_rule.min_view(n)` values is retried, which is the same as
    placing the successful scan later, so such interleavings drop out.
    """
    steps = [(p, step) for p in range(n) for step in ("update", "scan")]
    floor = wait_rule.min_view(n)
    outcomes: set[ViewVector] = set()
    for interleaving in itertools.permutations(steps):
        written: set[int] = set()
        views: dict[int, frozenset[int]] = {}
        for p, step in interleaving:
            if step == "update":
                written.add(p)
            elif p not in written or len(written) < floor:
                break
            else:
                views[p] = frozenset(written)
        else:
            outcomes.add(tuple(views[p] for p in range(n)))
    return outcomes
