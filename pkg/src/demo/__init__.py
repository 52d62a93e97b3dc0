"""Demo meshes with known homology."""

from src.demo.meshes import EXPECTED_BETTI, SHAPES, make_shape

__all__ = ["EXPECTED_BETTI", "SHAPES", "make_shape"]
