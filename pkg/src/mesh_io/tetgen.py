"""TetGen-style .node/.ele reader and writer.

.node: header "count dim nattr nbound", then "id x y [z] ..." lines.
.ele:  header "count arity nattr", then "id v1 .. v_arity ..." lines.
Arity 3, 4 and 5 select triangles, tetrahedra and 4-simplices. Cell ids are the
0-based positions of the .ele lines.
"""

from pathlib import Path

import structlog

from src.errors import MeshParseError
from src.mesh_io._lines import data_lines
from src.models.cells import ModelKind
from src.models.mesh import Mesh

logger = structlog.get_logger()

KIND_BY_ARITY = {3: ModelKind.SIMPLEX2, 4: ModelKind.SIMPLEX3, 5: ModelKind.SIMPLEX4}


def _ints(path, number: int, tokens: list[str]) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise MeshParseError(path, number, f"expected integers, got {' '.join(tokens)}") from exc


def read_nodes(path: str | Path) -> dict[int, tuple[float, ...]]:
    lines = data_lines(path)
    try:
        number, header = next(lines)
    except StopIteration:
        raise MeshParseError(path, None, "empty node file") from None
    if len(header) < 2:
        raise MeshParseError(path, number, "header must start with count and dim")
    count, dim = _ints(path, number, header[:2])
    points: dict[int, tuple[float, ...]] = {}
    for number, tokens in lines:
        if len(tokens) < dim + 1:
            raise MeshParseError(path, number, f"node line needs an id and {dim} coordinates")
        node_id = _ints(path, number, tokens[:1])[0]
        if node_id in points:
            raise MeshParseError(path, number, f"duplicate node id {node_id}")
        try:
            points[node_id] = tuple(float(t) for t in tokens[1 : dim + 1])
        except ValueError as exc:
            raise MeshParseError(path, number, "node coordinates must be numbers") from exc
    if len(points) != count:
        raise MeshParseError(path, None, f"header announces {count} nodes, found {len(points)}")
    return points


def read_simplicial(node_path: str | Path, ele_path: str | Path) -> Mesh:
    """Read a TetGen mesh.

    Raises:
        MeshParseError: Bad header, arity mismatch, unknown vertex, repeated vertex,
            duplicate cell or count mismatch, with the offending line number
    """
    points = read_nodes(node_path)
    lines = data_lines(ele_path)
    try:
        number, header = next(lines)
    except StopIteration:
        raise MeshParseError(ele_path, None, "empty element file") from None
    if len(header) < 2:
        raise MeshParseError(ele_path, number, "header must start with count and arity")
    count, arity = _ints(ele_path, number, header[:2])
    kind = KIND_BY_ARITY.get(arity)
    if kind is None:
        raise MeshParseError(ele_path, number, f"unsupported arity {arity}, expected 3, 4 or 5")

    cells: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for number, tokens in lines:
        if len(tokens) < arity + 1:
            raise MeshParseError(ele_path, number, f"element needs {arity} vertex ids")
        vertices = _ints(ele_path, number, tokens[1 : arity + 1])
        for v in vertices:
            if v not in points:
                raise MeshParseError(ele_path, number, f"unknown vertex id {v}")
        cell = tuple(sorted(vertices))
        if len(set(cell)) != arity:
            raise MeshParseError(ele_path, number, f"element repeats a vertex: {vertices}")
        if cell in seen:
            raise MeshParseError(ele_path, number, f"duplicate of cell {seen[cell]}: {cell}")
        seen[cell] = len(cells)
        cells.append(cell)
    if len(cells) != count:
        raise MeshParseError(ele_path, None, f"header announces {count} elements, found {len(cells)}")

    logger.info("mesh_loaded", kind=kind.value, cells=len(cells), nodes=len(points))
    return Mesh(kind=kind, cells=cells, points=points)


def write_simplicial(mesh: Mesh, node_path: str | Path, ele_path: str | Path) -> None:
    vertex_ids = sorted({v for cell in mesh.cells for v in cell} | set(mesh.points))
    dim = max((len(p) for p in mesh.points.values()), default=3)
    with open(node_path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(vertex_ids)} {dim} 0 0\n")
        for v in vertex_ids:
            coords = mesh.points.get(v, (0.0,) * dim)
            handle.write(f"{v} " + " ".join(f"{c:.17g}" for c in coords) + "\n")
    with open(ele_path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(mesh.cells)} {mesh.kind.vertex_count} 0\n")
        for i, cell in enumerate(mesh.cells):
            handle.write(f"{i} " + " ".join(str(v) for v in cell) + "\n")
