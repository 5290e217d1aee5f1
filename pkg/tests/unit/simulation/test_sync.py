import pytest

from agreement_lab.errors import AdversaryError
from agreement_lab.graphs.core import convex_hull, set_diameter
from agreement_lab.graphs.fixtures import path_graph
from agreement_lab.simulation.adversary import (
    RoundAdversary,
    RoundCrash,
    enumerate_adversaries,
    random_adversary,
    validate_adversary,
)
from agreement_lab.simulation.sync import (
    SYNC_PROTOCOL,
    run_sync,
    sync_rounds,
    sync_two_set,
    two_set_rounds,
)
from agreement_lab.simulation.trace import trace_from_json, trace_to_json


@pytest.fixture
def p5():
    return path_graph(5)


def test_round_counts(p5):
    assert [two_set_rounds(f) for f in range(5)] == [1, 1, 2, 2, 3]
    assert sync_rounds(p5, 1) == 3
    assert sync_rounds(path_graph(2), 0) == 1


def test_failure_free_run(p5):
    trace = run_sync(p5, (0, 4, 2), 1)
    assert trace.outputs == (0, 0, 0)
    assert len(trace.iterations) == 3
    assert trace.protocol == SYNC_PROTOCOL
    assert [it.phase for it in trace.iterations] == ["two-set", "path", "path"]


def test_crash_reaches_only_its_recipients():
    crash = RoundCrash(0, 0, frozenset({1}))
    assert sync_two_set([0, 5, 9], 1, RoundAdversary((crash,))) == (None, 0, 5)


def test_every_one_crash_plan_reaches_agreement(p5):
    inputs = (0, 4, 2)
    hull = convex_hull(p5, inputs)
    for adversary in enumerate_adversaries(3, 1, sync_rounds(p5, 1)):
        decided = run_sync(p5, inputs, 1, adversary).decided()
        assert decided <= hull
        assert set_diameter(p5, decided) <= 1


def test_random_two_crash_plans_reach_agreement():
    g = path_graph(9)
    inputs = (0, 8, 3, 6, 1)
    rounds = sync_rounds(g, 2)
    for seed in range(50):
        adversary = random_adversary(5, 2, rounds, seed)
        validate_adversary(adversary, 5, 2, rounds)
        decided = run_sync(g, inputs, 2, adversary).decided()
        assert set_diameter(g, decided) <= 1


def test_adversary_count():
    assert len(list(enumerate_adversaries(2, 1, 1))) == 5
    assert next(iter(enumerate_adversaries(3, 2, 2))) == RoundAdversary()


def test_f_must_be_below_n():
    with pytest.raises(AdversaryError):
        run_sync(path_graph(3), (0, 2), 2)


@pytest.mark.parametrize("crashes", [
    (RoundCrash(0, 0, frozenset()), RoundCrash(0, 1, frozenset())),
    (RoundCrash(0, 0, frozenset()), RoundCrash(1, 0, frozenset())),
    (RoundCrash(5, 0, frozenset()),),
    (RoundCrash(0, 9, frozenset()),),
    (RoundCrash(0, 0, frozenset({0})),),
])
def test_validate_rejects_bad_plans(crashes):
    with pytest.raises(AdversaryError):
        validate_adversary(RoundAdversary(crashes), 3, 1, 3)


def test_adversary_json_shapes():
    expected = RoundAdversary((RoundCrash(1, 0, frozenset({2})),))
    assert RoundAdversary.from_json(
        {"crashes": [{"proc": 1, "round": 0, "recipients": [2]}]}) == expected
    assert RoundAdversary.from_json(
        [{"process": 1, "round": 0, "recipients": [2]}]) == expected
    assert RoundAdversary.from_json(expected.to_json()) == expected
    with pytest.raises(AdversaryError):
        RoundAdversary.from_json({"crashes": [{"round": 0}]})


def test_sync_trace_json(p5):
    adversary = RoundAdversary((RoundCrash(2, 1, frozenset({0})),))
    trace = run_sync(p5, (0, 4, 2), 1, adversary, seed=4)
    parsed = trace_from_json(trace_to_json(trace))
    assert parsed == trace
    assert parsed.outputs[2] is None
