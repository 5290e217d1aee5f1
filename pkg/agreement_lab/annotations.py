"""Annotation types used throughout the project.

**IMPORTANT:** MUST NOT contain agreement_lab imports!

This module must be usable at any time without circular imports.
"""
from typing_extensions import TypeAlias

__all__ = [
    'Vertex',
    'VertexSet',
    'Edge',
    'ProcessId',
    'Triangle',
    'JSONDict',
]

Vertex: TypeAlias = int
"""Graph vertices are dense integer ids `0..n-1`."""

VertexSet: TypeAlias = frozenset[int]

Edge: TypeAlias = tuple[int, int]
"""Always stored as `(smaller, larger)`."""

ProcessId: TypeAlias = int

Triangle: TypeAlias = tuple[int, int, int]
"""Sorted vertex ids of a complex triangle."""

JSONDict: TypeAlias = dict[str, object]

