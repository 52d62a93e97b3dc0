"""VOX occupancy grids.

Header "VOX nx ny nz", then nx*ny*nz values of 0 or 1 with x varying fastest,
then y, then z. nz = 1 reads as pixels.
"""

from pathlib import Path

import numpy as np
import structlog

from src.errors import MeshParseError
from src.mesh_io._lines import data_lines
from src.models.cells import ModelKind
from src.models.mesh import Mesh

logger = structlog.get_logger()


def read_voxels(path: str | Path) -> Mesh:
    """Read a VOX file into one top cell per occupied position.

    Raises:
        MeshParseError: Bad header, a token other than 0/1, or a value count mismatch
    """
    lines = data_lines(path)
    try:
        number, header = next(lines)
    except StopIteration:
        raise MeshParseError(path, None, "empty voxel file") from None
    if len(header) != 4 or header[0] != "VOX":
        raise MeshParseError(path, number, "header must be 'VOX nx ny nz'")
    try:
        nx, ny, nz = (int(t) for t in header[1:])
    except ValueError as exc:
        raise MeshParseError(path, number, "grid extents must be integers") from exc
    if min(nx, ny, nz) < 1:
        raise MeshParseError(path, number, "grid extents must be positive")

    values: list[int] = []
    for number, tokens in lines:
        for token in tokens:
            if token not in ("0", "1"):
                raise MeshParseError(path, number, f"voxel values must be 0 or 1, got {token!r}")
            values.append(token == "1")
    expected = nx * ny * nz
    if len(values) != expected:
        raise MeshParseError(path, None, f"expected {expected} values, found {len(values)}")

    occupied = np.flatnonzero(np.asarray(values, dtype=bool))
    z, y, x = np.unravel_index(occupied, (nz, ny, nx))
    if nz == 1:
        kind, grid_shape = ModelKind.CUBE2, (nx, ny)
        cells = list(zip(x.tolist(), y.tolist()))
    else:
        kind, grid_shape = ModelKind.CUBE3, (nx, ny, nz)
        cells = list(zip(x.tolist(), y.tolist(), z.tolist()))
    logger.info("voxels_loaded", kind=kind.value, cells=len(cells), grid=grid_shape)
    return Mesh(kind=kind, cells=cells, grid_shape=grid_shape)


def write_voxels(mesh: Mesh, path: str | Path) -> None:
    shape = mesh.grid_shape or tuple(
        max((c[a] for c in mesh.cells), default=0) + 1 for a in range(mesh.kind.dim)
    )
    nx, ny = shape[0], shape[1]
    nz = shape[2] if len(shape) > 2 else 1
    grid = np.zeros((nz, ny, nx), dtype=np.uint8)
    for cell in mesh.cells:
        z = cell[2] if len(cell) > 2 else 0
        grid[z, cell[1], cell[0]] = 1
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"VOX {nx} {ny} {nz}\n")
        for plane in grid:
            for row in plane:
                handle.write(" ".join(str(v) for v in row.tolist()) + "\n")
