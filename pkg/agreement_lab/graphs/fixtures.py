"""Named graphs used by the tests, the acceptance suite and the CLI.

Parametric families are addressed as `<family><size>` (`path5`,
`cycle6`, `wheel6`, `wheel6-minus-spoke`, `complete4`, `star3`,
`strip7`); fixed graphs by name (`sun3`, `hub-triangle-ring`).
"""
import re

from collections.abc import Callable
from typing import Final

from agreement_lab.graphs.core import Graph


__all__ = [
    'path_graph',
    'cycle_graph',
    'complete_graph',
    'star_graph',
    'strip_graph',
    'wheel_graph',
    'wheel_minus_spoke',
    'sun3',
    'hub_triangle_ring',
    'FAMILIES',
    'FIXED',
    'fixture',
    'fixture_names',
]


def path_graph(n: int) -> Graph:
    """`P_n` with `n` vertices `0 - 1 - ... - n-1`."""
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)), f"path{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), f"cycle{n}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(
        n, ((u, v) for u in range(n) for v in range(u + 1, n)), f"complete{n}")


def star_graph(leaves: int) -> Graph:
    """Hub `0` joined to `leaves` leaves."""
    return Graph.from_edges(
        leaves + 1, ((0, i) for i in range(1, leaves + 1)), f"star{leaves}")


def strip_graph(n: int) -> Graph:
    """The triangle strip on `0..n-1`: `i` is joined to `i+1` and `i+2`.

    A chordal 2-tree of diameter `ceil((n - 1) / 2)`.
    """
    edges = [(i, j) for i in range(n) for j in (i + 1, i + 2) if j < n]
    return Graph.from_edges(n, edges, f"strip{n}")


def _wheel_edges(k: int) -> list[tuple[int, int]]:
    if k < 3:
        raise ValueError(f"a wheel rim needs at least 3 vertices, got {k}")
    rim = [(i, (i + 1) % k) for i in range(k)]
    spokes = [(i, k) for i in range(k)]
    return rim + spokes


def wheel_graph(k: int) -> Graph:
    """Rim `C_k` on `0..k-1` with hub `k`."""
    return Graph.from_edges(k + 1, _wheel_edges(k), f"wheel{k}")


def wheel_minus_spoke(k: int) -> Graph:
    """The wheel with the spoke hub-`0` removed."""
    edges = [e for e in _wheel_edges(k) if e != (0, k)]
    return Graph.from_edges(k + 1, edges, f"wheel{k}-minus-spoke")


def sun3() -> Graph:
    """The 3-sun: corners `0, 1, 2` around the inner triangle `3, 4, 5`."""
    edges = [
        (0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0),
        (3, 4), (4, 5), (3, 5),
    ]
    return Graph.from_edges(6, edges, "sun3")


def hub_triangle_ring() -> Graph:
    """A 2-self-centered bridged graph without simplicial vertices.

    A reconstruction, not a published edge list. The rim is `C_12` on
    `0..11`; hubs `12, 13, 14` form a triangle and hub `12 + k` sees
    the whole rim except `4k, 4k+1, 4k+2`. Any two rim vertices share
    a hub and every hub misses three rim vertices, so all
    eccentricities are 2. The hubs of two different windows cover the
    rim between them, which leaves no induced 4- or 5-cycle. Hubs and
    rim vertices both have non-adjacent neighbours. The graph is its
    own convex hull and is not chordal, so it is bridged without being
    nicely bridged.
    """
    rim = [(i, (i + 1) % 12) for i in range(12)]
    hubs = [(12, 13), (12, 14), (13, 14)]
    spokes = [
        (12 + k, i) for k in range(3) for i in range(12)
        if i not in (4 * k, 4 * k + 1, 4 * k + 2)]
    return Graph.from_edges(15, rim + hubs + spokes, "hub-triangle-ring")


FAMILIES: Final[dict[str, Callable[[int], Graph]]] = {
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "star": star_graph,
    "strip": strip_graph,
    "wheel": wheel_graph,
}


FIXED: Final[dict[str, Callable[[], Graph]]] = {
    "sun3": sun3,
    "hub-triangle-ring": hub_triangle_ring,
}


_FAMILY_NAME = re.compile(r"(?P<family>[a-z]+)(?P<size>\d+)(?P<minus>-minus-spoke)?")


def fixture(name: str) -> Graph:
    """Look up a fixture by name.

    Raises:
        `KeyError` listing the accepted names.
    """
    if name in FIXED:
        return FIXED[name]()
    match = _FAMILY_NAME.fullmatch(name)
    if match and match["family"] in FAMILIES:
        size = int(match["size"])
        if match["minus"]:
            if match["family"] != "wheel":
                raise KeyError(f"only wheels have a minus-spoke variant: {name!r}")
            return wheel_minus_spoke(size)
        return FAMILIES[match["family"]](size)
    raise KeyError(
        f"unknown fixture {name!r}; expected one of {', '.join(fixture_names())}")


def fixture_names() -> list[str]:
    families = [f"{family}<n>" for family in FAMILIES]
    return sorted(FIXED) + families + ["wheel<n>-minus-spoke"]
