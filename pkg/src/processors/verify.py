"""Independent homology check on the full face complex of a set of top cells.

This path enumerates every face of every dimension and runs the Smith normal
form on sparse boundary matrices. It shares only the model cells' sign
conventions with the thinning engine.
"""

import time
from typing import Sequence

import numpy as np
import structlog
from scipy import sparse

from src.complex.top_cells import TopCellComplex, cubical_vertex_id
from src.config.settings import get_settings
from src.errors import InvariantViolationError, MalformedCellError, SizeLimitError
from src.homology.chain_complex import ChainComplex, homology_summary
from src.models.cells import ModelKind, concrete_elements, get_model_cell
from src.models.schemas import CertificationReport, HomologySummary

logger = structlog.get_logger()


def _infer_grid(cells: Sequence[Sequence[int]], kind: ModelKind) -> tuple[int, ...]:
    return tuple(max((int(c[a]) for c in cells), default=0) + 1 for a in range(kind.dim))


def _cubical_vertex_ids(cells: Sequence[Sequence[int]], kind: ModelKind, grid_shape: Sequence[int] | None):
    if not kind.is_cubical:
        return None
    shape = tuple(grid_shape) if grid_shape is not None else _infer_grid(cells, kind)

    def vertex_id(point):
        return cubical_vertex_id(point, shape)

    return vertex_id


def face_counts(
    cells: Sequence[Sequence[int]],
    kind: ModelKind,
    grid_shape: Sequence[int] | None = None,
) -> list[int]:
    """Number of distinct faces per dimension. No boundary matrices, no size limit."""
    model = get_model_cell(kind)
    vertex_id = _cubical_vertex_ids(cells, kind, grid_shape)
    seen: list[set[tuple[int, ...]]] = [set() for _ in range(kind.dim + 1)]
    elements = [model.element(ordinal) for ordinal in range(model.n + 1)]
    for cell in cells:
        keys = concrete_elements(kind, cell, vertex_id)
        for element in elements:
            seen[element.dim].add(keys[element.ordinal])
    return [len(keys) for keys in seen]


def full_complex(
    cells: Sequence[Sequence[int]],
    kind: ModelKind,
    grid_shape: Sequence[int] | None = None,
) -> ChainComplex:
    """Chain complex of the top cells and all of their faces.

    Faces shared between cells appear once. A shared face keeps the orientation of
    its first occurrence, which every cell induces identically.

    Raises:
        SizeLimitError: More cells than verify_max_cells
    """
    limit = get_settings().verify_max_cells
    if len(cells) > limit:
        raise SizeLimitError(f"full-complex verification accepts at most {limit} cells, got {len(cells)}")
    model = get_model_cell(kind)
    vertex_id = _cubical_vertex_ids(cells, kind, grid_shape)
    index: list[dict[tuple[int, ...], int]] = [{} for _ in range(kind.dim + 1)]
    entries: list[tuple[list[int], list[int], list[int]]] = [([], [], []) for _ in range(kind.dim + 1)]
    # Top element last: faces precede cofaces.
    order = [model.element(ordinal) for ordinal in (*range(1, model.n + 1), 0)]
    for cell in cells:
        keys = concrete_elements(kind, cell, vertex_id)
        for element in order:
            key = keys[element.ordinal]
            column_index = index[element.dim]
            if key in column_index:
                continue
            column = column_index[key] = len(column_index)
            if element.dim == 0:
                continue
            rows, cols, values = entries[element.dim]
            lower = index[element.dim - 1]
            for face, sign in model.boundary_of(element.ordinal):
                rows.append(lower[keys[face]])
                cols.append(column)
                values.append(sign)

    counts = [len(i) for i in index]
    boundary = {}
    for d in range(1, kind.dim + 1):
        rows, cols, values = entries[d]
        boundary[d] = sparse.csc_matrix(
            (np.asarray(values, dtype=np.int64), (np.asarray(rows), np.asarray(cols))),
            shape=(counts[d - 1], counts[d]),
        )
    return ChainComplex(cells_per_dim=counts, boundary=boundary)


def betti_of_cells(
    cells: Sequence[Sequence[int]], kind: ModelKind, grid_shape: Sequence[int] | None = None
) -> HomologySummary:
    summary = homology_summary(full_complex(cells, kind, grid_shape))
    if summary.euler_characteristic != sum((-1) ** d * b for d, b in enumerate(summary.betti)):
        raise InvariantViolationError(
            f"Euler characteristic {summary.euler_characteristic} disagrees with betti {summary.betti}"
        )
    return summary


def betti_of_complex(complex_: TopCellComplex) -> list[int]:
    """Betti numbers of the alive cells of a complex."""
    cells = [complex_.cells[t] for t in complex_.alive_cells()]
    return betti_of_cells(cells, complex_.kind, complex_.grid_shape).betti


def certify(
    input_cells: Sequence[Sequence[int]],
    kept_cells: Sequence[Sequence[int]],
    kind: ModelKind,
    grid_shape: Sequence[int] | None = None,
) -> CertificationReport:
    """Compare the homology of the input with the homology of the kept cells.

    Raises:
        MalformedCellError: A kept cell is not an input cell
        SizeLimitError: Input larger than verify_max_cells
    """
    def normalize(cell):
        values = [int(v) for v in cell]
        return tuple(values if kind.is_cubical else sorted(values))

    original = {normalize(c) for c in input_cells}
    stray = [normalize(c) for c in kept_cells if normalize(c) not in original]
    if stray:
        raise MalformedCellError(f"{len(stray)} kept cells are not input cells, first {stray[0]}")
    if kind.is_cubical and grid_shape is None:
        grid_shape = _infer_grid(input_cells, kind)

    started = time.perf_counter()
    logger.info("pipeline_start", stage="certify", kind=kind.value, cells=len(input_cells), kept=len(kept_cells))
    before = betti_of_cells(input_cells, kind, grid_shape)
    after = betti_of_cells(kept_cells, kind, grid_shape)
    report = CertificationReport(
        betti_in=before.betti,
        betti_out=after.betti,
        torsion_free_in=before.torsion_free,
        torsion_free_out=after.torsion_free,
        euler_in=before.euler_characteristic,
        euler_out=after.euler_characteristic,
    )
    logger.info(
        "pipeline_complete",
        stage="certify",
        betti_in=report.betti_in,
        betti_out=report.betti_out,
        isomorphic=report.isomorphic,
        seconds=round(time.perf_counter() - started, 3),
    )
    return report
