"""Top-cell complexes with face hashing, adjacency and configuration extraction."""

from src.complex.top_cells import (
    CubicalTopComplex,
    SimplicialTopComplex,
    TopCellComplex,
    build,
    cubical_face_key,
    cubical_vertex_id,
)

__all__ = [
    "CubicalTopComplex",
    "SimplicialTopComplex",
    "TopCellComplex",
    "build",
    "cubical_face_key",
    "cubical_vertex_id",
]
