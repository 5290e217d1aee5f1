import itertools

import pytest

from agreement_lab.errors import LabellingError, ProtocolError, ScheduleError
from agreement_lab.graphs.fixtures import cycle_graph, path_graph
from agreement_lab.graphs.labelling import Labelling
from agreement_lab.harness import ScheduleMode, run_reduction_batch
from agreement_lab.protocols.reduction import (
    ReductionSchedule,
    enumerate_reduction_schedules,
    make_reduction,
    random_reduction_schedule,
    reduction_two_set,
    witness_path,
)
from agreement_lab.simulation.schedules import ObjectOutcome, ScheduleOutcome
from agreement_lab.verify import check_two_set


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def c4_labelling():
    return Labelling((0, 1, 2, 2), cycle=(0, 1, 2, 3))


def test_witness_path_avoids_v1(c4, c4_labelling):
    witness = witness_path(c4, c4_labelling)
    assert witness.to_graph == (0, 3, 2)
    assert witness.path == path_graph(3)
    assert (witness.start, witness.end) == (0, 2)


def test_witness_path_needs_a_valid_labelling(c4):
    with pytest.raises(LabellingError):
        witness_path(c4, Labelling((0, 1, 1, 2), cycle=(0, 1, 2, 3)))


def full_visibility(n: int, objects: int) -> ScheduleOutcome:
    everyone = tuple(range(n))
    outcome = ObjectOutcome(everyone, tuple((p, n) for p in everyone))
    return ScheduleOutcome((outcome,) * objects)


def test_failure_free_reduction(c4, c4_labelling):
    reduction = make_reduction(c4, c4_labelling)
    schedule = ReductionSchedule(
        a=full_visibility(2, reduction.alg_a.num_objects),
        b=full_visibility(3, reduction.alg_b.num_objects))
    result = reduction_two_set(reduction, (0, 1, 2), schedule)
    assert result.trace_a is not None
    assert result.trace_a.outputs == (0, 0)
    assert check_two_set((0, 1, 2), result.outputs).passed


def test_only_ones_skip_protocol_a(c4, c4_labelling):
    reduction = make_reduction(c4, c4_labelling)
    schedule = ReductionSchedule(None, full_visibility(3, reduction.alg_b.num_objects))
    result = reduction_two_set(reduction, (1, 1, 1), schedule)
    assert result.trace_a is None
    assert result.outputs == (1, 1, 1)


def test_inputs_outside_three_labels(c4, c4_labelling):
    reduction = make_reduction(c4, c4_labelling)
    schedule = ReductionSchedule(None, full_visibility(3, reduction.alg_b.num_objects))
    with pytest.raises(ProtocolError):
        reduction_two_set(reduction, (0, 3, 1), schedule)


def test_a_crash_must_carry_into_b(c4, c4_labelling):
    reduction = make_reduction(c4, c4_labelling)
    inputs = (0, 1, 2)
    crashing = next(
        s for s in enumerate_reduction_schedules(reduction, inputs, 1)
        if s.a is not None and s.a.crashes)
    schedule = ReductionSchedule(crashing.a, full_visibility(3, reduction.alg_b.num_objects))
    with pytest.raises(ScheduleError):
        reduction_two_set(reduction, inputs, schedule)


@pytest.mark.parametrize("inputs", [(0, 1, 2), (0, 2, 2), (2, 1, 1)])
def test_every_schedule_solves_two_set(c4, c4_labelling, inputs):
    reduction = make_reduction(c4, c4_labelling)
    runs = 0
    for schedule in enumerate_reduction_schedules(reduction, inputs, 1):
        outputs = reduction_two_set(reduction, inputs, schedule).outputs
        assert check_two_set(inputs, outputs).passed, outputs
        runs += 1
    assert runs > 0


def test_random_reduction_schedules_are_seeded(c4, c4_labelling):
    reduction = make_reduction(c4, c4_labelling)
    a = random_reduction_schedule(reduction, (0, 1, 2), 1, seed=8, crash_rate=0.4)
    b = random_reduction_schedule(reduction, (0, 1, 2), 1, seed=8, crash_rate=0.4)
    assert a == b
    reduction_two_set(reduction, (0, 1, 2), a)


def test_reduction_batch(c4, c4_labelling):
    records = list(run_reduction_batch(
        c4, c4_labelling, (0, 1, 2), ScheduleMode.RANDOM, seed=3, samples=50))
    assert len(records) == 50
    assert all(r.verdict.passed for r in records)
    assert [r.index for r in records] == list(range(50))


def test_reduction_batch_has_no_file_mode(c4, c4_labelling):
    with pytest.raises(ScheduleError):
        list(run_reduction_batch(c4, c4_labelling, (0, 1, 2), ScheduleMode.FILE))


def test_two_set_checker():
    assert check_two_set((0, 1, 2), (0, None, 2)).passed
    assert not check_two_set((0, 1, 2), (0, 1, 2)).passed
    assert not check_two_set((0, 0, 2), (0, 1, 1)).passed
    assert check_two_set(tuple(itertools.repeat(1, 3)), (1, 1, None)).passed
