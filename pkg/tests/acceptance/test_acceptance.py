"""End-to-end suites; slow, so they only run with `--run-acceptance`."""
import itertools

import networkx as nx
import pytest
from hypothesis import given, settings

from agreement_lab.graphs.classify import (
    classify,
    is_bridged,
    is_nicely_bridged_exact,
    sufficient_conditions,
)
from agreement_lab.graphs.core import convex_hull, interval
from agreement_lab.graphs.fixtures import fixture
from agreement_lab.graphs.labelling import Labelling, verify_lower_bound_labelling
from agreement_lab.harness import Experiment, Model, run_batch, run_reduction_batch
from agreement_lab.protocols.agreement import make_one_resilient
from agreement_lab.simulation.schedules import (
    WaitRule,
    count_schedules,
    enumerate_schedules,
    naive_view_outcomes,
    view_vector,
)
from agreement_lab.simulation.snapshot import run
from agreement_lab.simulation.sync import sync_rounds
from agreement_lab.topology.complex import build_H, standard_triangle, subdivide
from agreement_lab.topology.search import search_protocol
from agreement_lab.topology.sperner import (
    boundary_pair_parity,
    find_trichromatic,
    random_sperner_labelling,
)
from agreement_lab.verify import check_trace
from tests.strategies import graphs_with_vertices
from tests.unit.graphs.test_classify import EXPECTED


pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("name", ["path4", "cycle5", "cycle6", "sun3"])
def test_one_resilient_exhaustive(name):
    g = fixture(name)
    protocol = make_one_resilient(g)
    schedules = list(enumerate_schedules(3, protocol.num_objects, protocol.wait_rule, 1))
    for inputs in itertools.product(g.vertices, repeat=3):
        for schedule in schedules:
            bundle = check_trace(g, run(protocol, g, inputs, schedule))
            assert bundle.passed, (inputs, bundle.to_json())


# chordal graphs with room to shrink, plus two of radius one
WAIT_FREE_GRAPHS = ["path4", "sun3", "strip7", "strip8", "star4", "complete4"]


@pytest.mark.parametrize("name", WAIT_FREE_GRAPHS)
def test_wait_free_randomized(name):
    g = fixture(name)
    triples = list(itertools.product(g.vertices, repeat=3))
    per_triple = 100_000 // len(triples)
    for index, inputs in enumerate(triples):
        experiment = Experiment(g, inputs, "wait-free-bridged")
        plans = experiment.sampled(seed=2024 + index, samples=per_triple)
        for record in run_batch(experiment, plans, workers=4):
            assert record.passed, (inputs, record.verdicts.to_json())


def test_wait_free_fails_out_of_class():
    # 3 and 0 are antipodal and the hull of both is the whole cycle, whose
    # chosen center is 0; a solo 3 keeps the pair apart
    experiment = Experiment(fixture("cycle6"), (0, 3, 3), "wait-free-bridged")
    records = run_batch(experiment, experiment.sampled(seed=1, samples=1_000_000))
    failure = next(r for r in records if not r.passed)
    assert not failure.verdicts["agreement"].passed
    assert failure.verdicts["hull-validity"].passed


@pytest.mark.parametrize("n, f", [(3, 0), (3, 1), (4, 2)])
@pytest.mark.parametrize("name", ["path5", "cycle6"])
def test_synchronous_bounds(name, n, f):
    g = fixture(name)
    expected_rounds = f // 2 + sync_rounds(g, 0)
    for inputs in itertools.islice(itertools.product(g.vertices, repeat=n), 0, None, 37):
        experiment = Experiment(g, inputs, model=Model.SYNC, crashes=f)
        plans = [(None, plan) for plan in experiment.exhaustive()]
        for record in run_batch(experiment, plans):
            assert len(record.trace.iterations) == expected_rounds
            assert record.passed, record.verdicts.to_json()


@pytest.mark.parametrize("rounds", [1, 2])
@pytest.mark.parametrize("c", range(4, 9))
def test_sperner_suite(c, rounds):
    cx = subdivide(build_H(c), rounds)
    for seed in range(200):
        labels = random_sperner_labelling(cx, seed)
        result = find_trichromatic(cx, labels)
        assert result.triangles
        assert result.doors % 2 == 1
        assert boundary_pair_parity(cx, labels)[(0, 1)] % 2 == 1


def test_sperner_identity_case():
    assert find_trichromatic(standard_triangle(), [0, 1, 2]).triangles == ((0, 1, 2),)


@pytest.mark.parametrize("rounds", [1, 2])
def test_impossibility_search(rounds):
    assert not search_protocol(4, rounds).satisfiable
    assert search_protocol(4, rounds, corner_conditions=False).satisfiable


def test_interior_search_refutes_without_parity():
    result = search_protocol(4, 1, use_parity=False)
    assert not result.satisfiable
    assert result.stats.interior_nodes > 0


def test_classification_fixtures():
    for name, (chordal, bridged, nicely, labelled) in EXPECTED.items():
        g = fixture(name)
        report = classify(g)
        assert (report.chordal, report.bridged, report.nicely_bridged) == \
            (chordal, bridged, nicely), name
        if labelled is not None:
            assert (report.lower_bound_labelling is not None) is labelled, name
        if report.lower_bound_labelling is not None:
            assert verify_lower_bound_labelling(g, report.lower_bound_labelling), name
        if is_bridged(g) and sufficient_conditions(g).any():
            assert is_nicely_bridged_exact(g), name


def test_reduction_round_trip():
    g = fixture("cycle4")
    lab = Labelling((0, 1, 2, 2), cycle=(0, 1, 2, 3))
    for inputs in itertools.product((0, 1, 2), repeat=3):
        records = list(run_reduction_batch(g, lab, inputs))
        assert records
        for record in records:
            assert record.verdict.passed, (inputs, record.to_json())


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("wait_rule", list(WaitRule))
def test_schedule_oracle(n, wait_rule):
    enumerated = {
        view_vector(s.objects[0], n) for s in enumerate_schedules(n, 1, wait_rule)}
    assert enumerated == naive_view_outcomes(n, wait_rule)
    assert count_schedules(n, 1, wait_rule) == len(enumerated)


def _hull_by_paths(nxg: nx.Graph, members: set[int]) -> set[int]:
    hull = set(members)
    while True:
        grown = set(hull)
        for u, v in itertools.combinations(sorted(hull), 2):
            grown.update(w for path in nx.all_shortest_paths(nxg, u, v) for w in path)
        if grown == hull:
            return hull
        hull = grown


@settings(max_examples=500, deadline=None)
@given(graphs_with_vertices(size=3))
def test_hull_and_interval_oracle(case):
    g, members = case
    nxg = g.to_networkx()
    u, v = members[0], members[1]
    on_paths = {w for path in nx.all_shortest_paths(nxg, u, v) for w in path}
    assert interval(g, u, v) == on_paths
    assert convex_hull(g, members) == _hull_by_paths(nxg, set(members))


@pytest.mark.parametrize("c", range(4, 13))
def test_input_subcomplex_counts(c):
    cx = build_H(c)
    assert (len(cx.vertices), len(cx.triangles)) == (c, c - 2)
    assert len(subdivide(standard_triangle(), 1).triangles) == 13
