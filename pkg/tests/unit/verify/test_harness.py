import itertools
import json

import pytest

from agreement_lab.errors import ScheduleError
from agreement_lab.graphs.fixtures import cycle_graph, path_graph
from agreement_lab.harness import (
    Experiment,
    Model,
    _ordered_map,
    load_schedules,
    run_batch,
    sample_seeds,
    summarize,
)
from agreement_lab.simulation.adversary import RoundAdversary
from agreement_lab.simulation.schedules import ObjectOutcome, ScheduleOutcome


@pytest.fixture
def p3_experiment():
    return Experiment(path_graph(3), (0, 2, 1))


def test_sample_seeds_are_reproducible():
    assert sample_seeds(7, 5) == sample_seeds(7, 5)
    assert sample_seeds(7, 5) != sample_seeds(8, 5)
    assert len(set(sample_seeds(7, 100))) == 100


def test_crash_bounds():
    assert Experiment(path_graph(3), (0, 2, 1)).crash_bound() == 1
    assert Experiment(path_graph(3), (0, 2, 1), model=Model.SYNC).crash_bound() == 0
    assert Experiment(
        path_graph(3), (0, 2, 1), "wait-free-bridged").crash_bound() == 2
    with pytest.raises(ScheduleError):
        Experiment(path_graph(3), (0, 2, 1), crashes=2).crash_bound()


def test_exhaustive_batch_passes(p3_experiment):
    plans = [(None, plan) for plan in p3_experiment.exhaustive()]
    summary = summarize(run_batch(p3_experiment, plans))
    assert summary.runs == len(plans)
    assert summary.failures == 0
    assert summary.first_failure is None


def test_workers_do_not_change_results(p3_experiment):
    plans = list(p3_experiment.sampled(seed=4, samples=40))
    serial = summarize(run_batch(p3_experiment, plans)).to_json()
    pooled = summarize(run_batch(p3_experiment, plans, workers=4)).to_json()
    assert serial == pooled
    indices = [r.index for r in run_batch(p3_experiment, plans, workers=4)]
    assert indices == list(range(40))


def test_pool_consumes_plans_lazily():
    # an endless stream must still yield its head
    head = itertools.islice(_ordered_map(abs, itertools.count(), workers=2, chunk=4), 10)
    assert list(head) == list(range(10))


def test_sync_experiment():
    experiment = Experiment(path_graph(5), (0, 4, 2), model=Model.SYNC, crashes=1)
    plans = [(None, plan) for plan in experiment.exhaustive()]
    summary = summarize(run_batch(experiment, plans))
    assert summary.passes == summary.runs == len(plans)
    assert experiment.describe()["protocol"] == "sync-path"


def test_plan_kind_must_match_the_model(p3_experiment):
    with pytest.raises(ScheduleError):
        p3_experiment.execute(RoundAdversary())


def failing_batch():
    g = cycle_graph(4)
    experiment = Experiment(g, (0, 2), "wait-free-bridged")
    solo_first = ObjectOutcome((1, 0), ((0, 2), (1, 1)))
    together = ObjectOutcome((0, 1), ((0, 2), (1, 2)))
    bad = ScheduleOutcome((solo_first,) * 5)
    good = ScheduleOutcome((together,) * 5)
    return experiment, [(None, good), (None, bad), (None, bad)]


def test_failures_are_summarized_and_written(tmp_path):
    experiment, plans = failing_batch()
    summary = summarize(run_batch(experiment, plans), tmp_path, experiment.describe())
    assert (summary.runs, summary.passes, summary.failures) == (3, 1, 2)
    assert summary.first_failure is not None
    assert summary.first_failure["index"] == 1
    assert summary.first_failure["lemma"] == "agreement"
    assert summary.failure_counts["agreement"] == 2
    written = tmp_path / "trace-1.json"
    assert summary.first_failure["trace"] == str(written)
    assert json.loads(written.read_text())["outputs"] == [0, 2]
    assert summary.to_json()["graph"] == "cycle4"


def test_schedule_file_shapes(tmp_path):
    experiment, plans = failing_batch()
    schedules = [plan.to_json() for _, plan in plans]
    many = tmp_path / "many.json"
    many.write_text(json.dumps({"schedules": schedules}))
    one = tmp_path / "one.json"
    one.write_text(json.dumps(schedules[1]))
    assert load_schedules(many, Model.ASYNC) == [plan for _, plan in plans]
    assert load_schedules(one, Model.ASYNC) == [plans[1][1]]


def test_malformed_schedule_file(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"schedules": [{"crashes": []}]}))
    with pytest.raises(ScheduleError):
        load_schedules(broken, Model.ASYNC)
