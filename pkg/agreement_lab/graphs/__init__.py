from .core import (
    Graph,
    DistanceMatrix,
    distances,
    eccentricities,
    eccentricity,
    diameter,
    radius,
    center,
    set_diameter,
    interval,
    convex_hull,
    is_clique,
    simplicial_vertices,
    induced_subgraph,
    midpoint_g,
)
from .io import read_graph, write_graph, load_graph
from .labelling import (
    Labelling,
    find_lower_bound_labelling,
    verify_lower_bound_labelling,
)
from .classify import ClassReport, classify

__all__ = [
    'Graph',
    'DistanceMatrix',
    'distances',
    'eccentricities',
    'eccentricity',
    'diameter',
    'radius',
    'center',
    'set_diameter',
    'interval',
    'convex_hull',
    'is_clique',
    'simplicial_vertices',
    'induced_subgraph',
    'midpoint_g',
    'read_graph',
    'write_graph',
    'load_graph',
    'Labelling',
    'find_lower_bound_labelling',
    'verify_lower_bound_labelling',
    'ClassReport',
    'classify',
]
