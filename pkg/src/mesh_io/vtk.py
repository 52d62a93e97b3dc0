"""VTK legacy ASCII export for viewing input and skeleton together."""

from pathlib import Path
from typing import Sequence

import structlog

from src.complex.top_cells import cubical_vertex_id
from src.errors import UnsupportedKindError
from src.models.cells import CUBE_EMBEDDINGS, ModelKind, cell_vertex_ids
from src.models.mesh import Mesh

logger = structlog.get_logger()

VTK_CELL_TYPES = {
    ModelKind.SIMPLEX2: 5,
    ModelKind.SIMPLEX3: 10,
    ModelKind.CUBE2: 9,
    ModelKind.CUBE3: 12,
}

# Model labels in VTK point order. Quads run counter-clockwise; the voxel labels
# already follow the hexahedron order.
VTK_POINT_ORDER = {
    ModelKind.SIMPLEX2: (0, 1, 2),
    ModelKind.SIMPLEX3: (0, 1, 2, 3),
    ModelKind.CUBE2: (0, 1, 3, 2),
    ModelKind.CUBE3: (0, 1, 2, 3, 4, 5, 6, 7),
}


def _points_and_connectivity(mesh: Mesh) -> tuple[list[tuple[float, ...]], list[list[int]]]:
    order = VTK_POINT_ORDER[mesh.kind]
    if mesh.kind.is_cubical:
        shape = mesh.grid_shape or tuple(
            max((c[a] for c in mesh.cells), default=0) + 1 for a in range(mesh.kind.dim)
        )
        positions: dict[int, tuple[float, ...]] = {}
        raw = []
        for cell in mesh.cells:
            ids = cell_vertex_ids(mesh.kind, cell, lambda p: cubical_vertex_id(p, shape))
            for vertex_id, offset in zip(ids, CUBE_EMBEDDINGS[mesh.kind]):
                point = tuple(float(c + o) for c, o in zip(cell, offset))
                positions[vertex_id] = point + (0.0,) * (3 - len(point))
            raw.append([ids[label] for label in order])
    else:
        positions = {
            v: tuple(mesh.points.get(v, ())) + (0.0,) * (3 - len(mesh.points.get(v, ())))
            for cell in mesh.cells
            for v in cell
        }
        raw = [[cell[label] for label in order] for cell in mesh.cells]
    ids = sorted(positions)
    index = {v: i for i, v in enumerate(ids)}
    return [positions[v] for v in ids], [[index[v] for v in cell] for cell in raw]


def write_vtk(
    mesh: Mesh,
    kept: Sequence[bool],
    path: str | Path,
    removal_pass: Sequence[int] | None = None,
) -> None:
    """Write an UNSTRUCTURED_GRID with per-cell 'kept' and 'removal_pass' scalars.

    Raises:
        UnsupportedKindError: 4-simplices have no VTK cell type
    """
    if mesh.kind not in VTK_CELL_TYPES:
        raise UnsupportedKindError(f"{mesh.kind.value} cells have no VTK cell type")
    points, connectivity = _points_and_connectivity(mesh)
    cell_type = VTK_CELL_TYPES[mesh.kind]
    arity = len(VTK_POINT_ORDER[mesh.kind])
    passes = list(removal_pass) if removal_pass is not None else [-1] * len(mesh.cells)

    lines = [
        "# vtk DataFile Version 3.0",
        f"skeleton of {len(mesh.cells)} {mesh.kind.value} cells",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {len(points)} double",
    ]
    lines += [" ".join(f"{c:.9g}" for c in point) for point in points]
    lines.append(f"CELLS {len(connectivity)} {len(connectivity) * (arity + 1)}")
    lines += [f"{arity} " + " ".join(map(str, cell)) for cell in connectivity]
    lines.append(f"CELL_TYPES {len(connectivity)}")
    lines += [str(cell_type)] * len(connectivity)
    lines += [f"CELL_DATA {len(connectivity)}", "SCALARS kept int 1", "LOOKUP_TABLE default"]
    lines += ["1" if flag else "0" for flag in kept]
    lines += ["SCALARS removal_pass int 1", "LOOKUP_TABLE default"]
    lines += [str(p) for p in passes]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("vtk_written", path=str(path), cells=len(connectivity), points=len(points))
