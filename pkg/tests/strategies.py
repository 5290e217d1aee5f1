"""Hypothesis strategies shared by the unit tests."""
from hypothesis import strategies as st

from agreement_lab.graphs.core import Graph


@st.composite
def connected_graphs(draw, min_n: int = 1, max_n: int = 8) -> Graph:
    """A random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    if n > 1:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges.update(draw(st.lists(st.sampled_from(pairs), max_size=2 * n)))
    return Graph.from_edges(n, sorted(edges))


@st.composite
def graphs_with_vertices(draw, size: int = 3, max_n: int = 8):
    """A connected graph and `size` of its vertices (repeats allowed)."""
    g = draw(connected_graphs(max_n=max_n))
    chosen = draw(st.lists(st.integers(0, g.n - 1), min_size=size, max_size=size))
    return g, chosen
