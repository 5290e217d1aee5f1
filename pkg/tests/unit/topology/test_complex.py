from collections import Counter

import pytest

from agreement_lab.errors import ComplexError
from agreement_lab.topology.complex import (
    Complex,
    ComplexVertex,
    build_H,
    input_configurations,
    standard_triangle,
    subdivide,
    subdivide_once,
    triangle_edges,
)


def test_standard_triangle():
    cx = standard_triangle()
    assert cx.triangles == ((0, 1, 2),)
    assert cx.boundary == (0, 1, 2)
    assert cx.euler_characteristic() == 1


def test_triangle_edges_pair_each_vertex_once():
    assert triangle_edges((1, 4, 7)) == ((1, 4), (1, 7), (4, 7))
    cx = subdivide_once(standard_triangle())
    uses = Counter(e for t in cx.triangles for e in triangle_edges(t))
    assert set(uses.values()) == {1, 2}


def test_one_round_subdivision_of_a_triangle():
    cx = subdivide_once(standard_triangle())
    assert len(cx.triangles) == 13
    assert len(cx.vertices) == 12
    assert len(cx.edges) == 24
    assert len(cx.boundary) == 9
    assert len(cx.interior) == 3
    assert cx.euler_characteristic() == 1


def test_corners_survive_subdivision():
    cx = subdivide_once(standard_triangle())
    assert [cx.vertices[c].colour for c in cx.corners] == [0, 1, 2]
    assert all(cx.segments[c] == k for k, c in enumerate(cx.corners))


@pytest.fixture(params=range(4, 13))
def c(request):
    return request.param


def test_input_subcomplex_counts(c):
    cx = build_H(c)
    assert len(cx.vertices) == c
    assert len(cx.triangles) == c - 2
    assert len(input_configurations(c)) == c - 2
    assert cx.boundary == tuple(range(c))
    assert cx.euler_characteristic() == 1


def test_input_subcomplex_after_one_round():
    cx = subdivide(build_H(4), 1)
    assert len(cx.vertices) == 20
    assert len(cx.triangles) == 26
    assert len(cx.boundary) == 12
    assert cx.euler_characteristic() == 1


def test_subdivided_boundary_triples(c):
    cx = subdivide_once(build_H(c))
    assert len(cx.boundary) == 3 * c
    assert len(cx.corners) == c


def test_two_rounds_multiply_triangles():
    cx = subdivide(standard_triangle(), 2)
    assert len(cx.triangles) == 13 * 13
    assert cx.euler_characteristic() == 1


def test_small_cycles_are_rejected():
    with pytest.raises(ComplexError):
        build_H(3)


def test_triangles_must_be_properly_coloured():
    vertices = (ComplexVertex(0, "a"), ComplexVertex(0, "b"), ComplexVertex(1, "c"))
    with pytest.raises(ComplexError):
        Complex(vertices, ((0, 1, 2),), (0, 1, 2), (0, 1, 2))


def test_corners_must_follow_the_boundary():
    cx = standard_triangle()
    with pytest.raises(ComplexError):
        Complex(cx.vertices, cx.triangles, cx.boundary, (0, 2, 1))
