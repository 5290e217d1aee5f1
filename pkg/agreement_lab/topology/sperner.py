"""Sperner labellings of triangulated polygons.

Corner `k` of a `c`-gon is labelled `k`; a boundary vertex between
corners `k` and `k + 1 (mod c)` takes one of those two labels; interior
labels are free. Any such labelling has a triangle with three distinct
labels.
"""
from __future__ import annotations

import logging
import random

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from agreement_lab.annotations import Edge, Triangle
from agreement_lab.errors import LabellingError
from agreement_lab.topology.complex import Complex, triangle_edges


__all__ = [
    'TrichromaticResult',
    'allowed_boundary_labels',
    'validate_sperner',
    'find_trichromatic',
    'boundary_pair_parity',
    'door_path',
    'random_sperner_labelling',
]


log = logging.getLogger(__name__)


def allowed_boundary_labels(tri: Complex, v: int) -> tuple[int, ...]:
    """Labels a Sperner labelling may put on boundary vertex `v`."""
    c = len(tri.corners)
    k = tri.segments[v]
    if tri.corners[k] == v:
        return (k,)
    return tuple(sorted({k, (k + 1) % c}))


def validate_sperner(tri: Complex, labels: Sequence[int]) -> None:
    """Raise `LabellingError` naming every vertex that breaks the rules."""
    c = len(tri.corners)
    if len(labels) != len(tri.vertices):
        raise LabellingError(
            f"expected {len(tri.vertices)} labels, got {len(labels)}")
    bad = [v for v, x in enumerate(labels) if not 0 <= x < c]
    bad.extend(
        v for v in tri.boundary
        if labels[v] not in allowed_boundary_labels(tri, v))
    if bad:
        raise LabellingError("not a Sperner labelling", sorted(set(bad)))


@dataclass(frozen=True)
class TrichromaticResult:
    triangles: tuple[Triangle, ...]
    doors: int
    """How many returned triangles carry both labels 0 and 1; always odd."""


def _is_rainbow(labels: Sequence[int], triangle: Triangle) -> bool:
    return len({labels[v] for v in triangle}) == 3


def find_trichromatic(tri: Complex, labels: Sequence[int]) -> TrichromaticResult:
    validate_sperner(tri, labels)
    found = tuple(t for t in tri.triangles if _is_rainbow(labels, t))
    doors = sum(1 for t in found if {0, 1} <= {labels[v] for v in t})
    return TrichromaticResult(found, doors)


def boundary_pair_parity(tri: Complex, labels: Sequence[int]) -> Counter[tuple[int, int]]:
    """Boundary edges per unordered pair of distinct labels.

    When no triangle is trichromatic every count is even: each
    triangle has zero or two edges of any given pair.
    """
    counts: Counter[tuple[int, int]] = Counter()
    for u, v in tri.boundary_edges:
        a, b = labels[u], labels[v]
        if a != b:
            counts[(min(a, b), max(a, b))] += 1
    return counts


def _is_door(labels: Sequence[int], edge: Edge) -> bool:
    return {labels[edge[0]], labels[edge[1]]} == {0, 1}


def door_path(tri: Complex, labels: Sequence[int]) -> list[Triangle]:
    """Follow `{0, 1}` doors in from the boundary to a trichromatic triangle.

    Walks that leave through another boundary door use up both doors;
    since boundary doors are odd in number, some walk ends inside.

    Raises:
        `LabellingError` if `labels` is not a Sperner labelling.
    """
    validate_sperner(tri, labels)
    used: set[Edge] = set()
    entry_doors = sorted(
        e for e in tri.boundary_edges if _is_door(labels, e))
    for door in entry_doors:
        if door in used:
            continue
        used.add(door)
        path: list[Triangle] = []
        edge = door
        (index,) = tri.edge_triangles[edge]
        while True:
            triangle = tri.triangles[index]
            path.append(triangle)
            exits = [
                e for e in triangle_edges(triangle)
                if e != edge and _is_door(labels, e)]
            if not exits:
                log.debug("door walk reached %s after %d steps", triangle, len(path))
                return path
            (edge,) = exits
            onward = [i for i in tri.edge_triangles[edge] if i != index]
            if not onward:
                used.add(edge)
                break
            (index,) = onward
    raise LabellingError("no door walk ended inside; labelling is not Sperner")


def random_sperner_labelling(tri: Complex, seed: int) -> list[int]:
    """Uniform over each vertex's allowed labels."""
    rng = random.Random(seed)
    c = len(tri.corners)
    labels = [rng.randrange(c) for _ in tri.vertices]
    for v in tri.boundary:
        labels[v] = rng.choice(allowed_boundary_labels(tri, v))
    return labels
