import pytest

from agreement_lab.config import DEFAULT_BUDGETS
from agreement_lab.errors import UndecidedError
from agreement_lab.topology.complex import Complex, build_H, standard_triangle, subdivide
from agreement_lab.topology.search import search_labelling, search_protocol
from agreement_lab.topology.sperner import allowed_boundary_labels


def rainbow_free(cx: Complex, labels) -> bool:
    return all(len({labels[v] for v in t}) < 3 for t in cx.triangles)


def test_one_round_four_cycle_is_impossible():
    result = search_protocol(4, 1)
    assert not result.satisfiable
    assert result.labelling is None
    assert result.stats.vertices == 20
    assert result.stats.boundary_length == 12
    assert result.to_json()["result"] == "UNSAT"


def test_interior_search_alone_refutes_one_round():
    result = search_protocol(4, 1, use_parity=False)
    assert not result.satisfiable
    # corners are pinned, the other 8 boundary vertices pick from 2 labels
    assert result.stats.boundary_nodes == 2 ** 8
    assert result.stats.interior_nodes > 0
    assert result.to_json()["parity_pruning"] is False


@pytest.fixture(params=[True, False])
def use_parity(request):
    return request.param


def test_dropping_corner_conditions_is_satisfiable(use_parity):
    result = search_protocol(4, 1, corner_conditions=False, use_parity=use_parity)
    assert result.satisfiable
    assert result.labelling == (0,) * 20
    assert result.stats.interior_nodes == 8
    assert result.to_json()["corner_conditions"] is False
    assert rainbow_free(subdivide(build_H(4), 1), result.labelling)


def test_two_rounds_without_corner_conditions():
    cx = subdivide(build_H(4), 2)
    result = search_protocol(4, 2, corner_conditions=False)
    assert result.satisfiable
    assert rainbow_free(cx, result.labelling)


def test_interior_is_forced_off_the_first_label():
    cx = subdivide(standard_triangle(), 1)
    half = len(cx.boundary) // 2
    pinned = {v: 1 if i < half else 2 for i, v in enumerate(cx.boundary)}
    labelling, stats = search_labelling(cx, corner_conditions=False, fixed=pinned)
    assert labelling is not None
    assert all(labelling[v] == x for v, x in pinned.items())
    assert rainbow_free(cx, labelling)
    assert stats.interior_nodes >= len(cx.interior)


def test_pinning_outside_the_corner_domain_is_unsatisfiable():
    cx = subdivide(build_H(4), 1)
    corner = cx.corners[0]
    wrong = next(x for x in range(4) if x not in allowed_boundary_labels(cx, corner))
    labelling, _ = search_labelling(cx, fixed={corner: wrong})
    assert labelling is None


def test_sperner_triangle_has_no_decision_map(use_parity):
    labelling, stats = search_labelling(
        subdivide(standard_triangle(), 1), use_parity=use_parity)
    assert labelling is None
    assert stats.triangles == 13


def test_search_budget():
    with pytest.raises(UndecidedError):
        search_protocol(4, 3)
    with pytest.raises(UndecidedError):
        search_protocol(5, 1, DEFAULT_BUDGETS.override(topology_cycle=4))
