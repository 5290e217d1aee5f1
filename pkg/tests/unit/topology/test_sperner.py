import pytest

from agreement_lab.errors import LabellingError
from agreement_lab.topology.complex import build_H, standard_triangle, subdivide
from agreement_lab.topology.sperner import (
    allowed_boundary_labels,
    boundary_pair_parity,
    door_path,
    find_trichromatic,
    random_sperner_labelling,
    validate_sperner,
)


def test_single_triangle_is_its_own_witness():
    result = find_trichromatic(standard_triangle(), [0, 1, 2])
    assert result.triangles == ((0, 1, 2),)
    assert result.doors == 1


def test_allowed_boundary_labels():
    cx = subdivide(standard_triangle(), 1)
    for k, corner in enumerate(cx.corners):
        assert allowed_boundary_labels(cx, corner) == (k,)
    assert all(
        len(allowed_boundary_labels(cx, v)) == 2
        for v in cx.boundary if v not in cx.corners)


def test_corner_must_keep_its_label():
    cx = subdivide(standard_triangle(), 1)
    labels = random_sperner_labelling(cx, seed=0)
    labels[cx.corners[0]] = 1
    with pytest.raises(LabellingError) as info:
        validate_sperner(cx, labels)
    assert cx.corners[0] in info.value.vertices


def test_label_count_must_match():
    with pytest.raises(LabellingError):
        validate_sperner(standard_triangle(), [0, 1])


@pytest.fixture(params=[(c, rounds) for c in (4, 5, 6) for rounds in (1,)] + [(3, 2)])
def triangulation(request):
    c, rounds = request.param
    base = standard_triangle() if c == 3 else build_H(c)
    return subdivide(base, rounds)


@pytest.fixture(params=range(20))
def seed(request):
    return request.param


def test_random_labellings_have_trichromatic_triangles(triangulation, seed):
    labels = random_sperner_labelling(triangulation, seed)
    validate_sperner(triangulation, labels)
    result = find_trichromatic(triangulation, labels)
    assert result.triangles
    assert result.doors % 2 == 1
    assert boundary_pair_parity(triangulation, labels)[(0, 1)] % 2 == 1


def test_door_path_ends_at_a_trichromatic_triangle(triangulation, seed):
    labels = random_sperner_labelling(triangulation, seed)
    path = door_path(triangulation, labels)
    last = path[-1]
    assert {0, 1} <= {labels[v] for v in last}
    assert len({labels[v] for v in last}) == 3
    assert last in find_trichromatic(triangulation, labels).triangles
