from .complex import (
    ComplexVertex,
    Complex,
    standard_triangle,
    build_H,
    subdivide_once,
    subdivide,
)
from .sperner import (
    TrichromaticResult,
    validate_sperner,
    find_trichromatic,
    boundary_pair_parity,
    door_path,
    random_sperner_labelling,
)
from .search import SearchResult, search_protocol

__all__ = [
    'ComplexVertex',
    'Complex',
    'standard_triangle',
    'build_H',
    'subdivide_once',
    'subdivide',
    'TrichromaticResult',
    'validate_sperner',
    'find_trichromatic',
    'boundary_pair_parity',
    'door_path',
    'random_sperner_labelling',
    'SearchResult',
    'search_protocol',
]
