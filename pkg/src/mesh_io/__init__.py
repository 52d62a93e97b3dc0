"""Mesh, voxel, skeleton, anchor and VTK file formats."""

from src.mesh_io.skeleton import read_anchors, read_skeleton, write_skeleton
from src.mesh_io.tetgen import read_simplicial, write_simplicial
from src.mesh_io.voxels import read_voxels, write_voxels
from src.mesh_io.vtk import write_vtk

__all__ = [
    "read_anchors",
    "read_simplicial",
    "read_skeleton",
    "read_voxels",
    "write_simplicial",
    "write_skeleton",
    "write_voxels",
    "write_vtk",
]
