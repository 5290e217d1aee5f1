import pytest

from agreement_lab.errors import EmptyVertexSetError, ProtocolError
from agreement_lab.graphs.core import convex_hull, is_clique, set_diameter
from agreement_lab.graphs.fixtures import cycle_graph, fixture, path_graph, star_graph, sun3
from agreement_lab.protocols.agreement import (
    ProtocolId,
    ceil_log2,
    ceil_log_three_halves,
    make_one_resilient,
    make_protocol,
    make_wait_free_bridged,
    protocol_metadata,
    psi_center,
    psi_path,
)
from agreement_lab.simulation.schedules import (
    ObjectOutcome,
    ScheduleOutcome,
    WaitRule,
    enumerate_schedules,
    random_schedule,
)
from agreement_lab.simulation.snapshot import run


@pytest.mark.parametrize("d, expected", [(0, 0), (1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3)])
def test_ceil_log2(d, expected):
    assert ceil_log2(d) == expected


@pytest.mark.parametrize("d, expected", [(1, 0), (2, 2), (3, 3), (4, 4)])
def test_ceil_log_three_halves(d, expected):
    assert ceil_log_three_halves(d) == expected


def test_psi_path():
    p5 = path_graph(5)
    assert psi_path(p5, {3}) == 3
    assert psi_path(p5, {0, 4}) == 2
    with pytest.raises(ProtocolError):
        psi_path(p5, {0, 2, 4})


def test_psi_center_prefers_non_simplicial_vertices():
    assert psi_center(star_graph(4), {1, 2}) == 0
    # every vertex of the 3-sun is central; the corners are simplicial
    assert psi_center(sun3(), {0, 1, 2}) == 3
    assert psi_center(path_graph(4), {0, 3}) == 1


def test_psi_center_of_nothing():
    with pytest.raises(EmptyVertexSetError):
        psi_center(path_graph(3), set())


def test_one_resilient_iterations():
    protocol = make_one_resilient(cycle_graph(6))
    assert protocol.iterations == 2
    assert protocol.num_objects == 3
    assert protocol.wait_rule is WaitRule.WAIT_N_MINUS_ONE
    assert protocol.max_crashes(5) == 1


def test_wait_free_iterations():
    protocol = make_wait_free_bridged(path_graph(4))
    assert protocol.t_star == 4
    assert protocol.num_objects == 5
    assert protocol.max_crashes(3) == 2
    assert make_wait_free_bridged(fixture("wheel6")).iterations == 7


def test_make_protocol_by_name():
    g = path_graph(3)
    assert make_protocol("one-resilient", g) == make_one_resilient(g)
    assert make_protocol(ProtocolId.WAIT_FREE_BRIDGED, g).id is ProtocolId.WAIT_FREE_BRIDGED
    with pytest.raises(ValueError):
        make_protocol("bogus", g)


def test_metadata():
    document = protocol_metadata(make_one_resilient(cycle_graph(6)))
    assert document["num_objects"] == 3
    assert document["wait_rule"] == "wait-n-1"
    assert document["formula"] == "T = ceil(log2 3) = 2"


def test_full_visibility_pair_settles_on_the_minimum():
    # the min phase on object 0 hands both processes the smaller input
    g = path_graph(3)
    protocol = make_one_resilient(g)
    both = ObjectOutcome((0, 1), ((0, 2), (1, 2)))
    trace = run(protocol, g, (0, 2), ScheduleOutcome((both,) * protocol.num_objects))
    assert trace.outputs == (0, 0)


@pytest.mark.parametrize("inputs", [(0, 3, 1), (3, 3, 0), (0, 1, 2)])
def test_one_resilient_under_every_schedule(inputs):
    g = path_graph(4)
    protocol = make_one_resilient(g)
    hull = convex_hull(g, inputs)
    for schedule in enumerate_schedules(3, protocol.num_objects, protocol.wait_rule, 1):
        decided = run(protocol, g, inputs, schedule).decided()
        assert decided <= hull
        assert set_diameter(g, decided) <= 1


@pytest.fixture(params=range(40))
def seed(request):
    return request.param


def test_wait_free_on_bridged_graphs(seed):
    for g, inputs in ((sun3(), (0, 1, 2)), (fixture("wheel6"), (0, 2, 4, 3))):
        protocol = make_wait_free_bridged(g)
        n = len(inputs)
        schedule = random_schedule(
            n, protocol.num_objects, protocol.wait_rule, n - 1, seed, crash_rate=0.2)
        decided = run(protocol, g, inputs, schedule).decided()
        assert decided <= convex_hull(g, inputs)
        assert is_clique(g, decided)
