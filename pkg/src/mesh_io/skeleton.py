"""Skeleton files and anchor files.

A skeleton file starts with '#' header lines (kind, cell counts, passes and one
"# removed <id> <pass>" line per removal in removal order), followed by one kept
cell id per line.
"""

from pathlib import Path
from typing import Sequence

import structlog

from src.complex.top_cells import FaceKey, cubical_face_key
from src.errors import InvariantViolationError, MeshParseError
from src.mesh_io._lines import data_lines
from src.models.cells import ModelKind
from src.models.schemas import ThinningOutcome

logger = structlog.get_logger()

AXES = "xyz"


def write_skeleton(outcome: ThinningOutcome, path: str | Path) -> None:
    """Write kept ids with a commented header.

    Raises:
        InvariantViolationError: Nonempty input with an empty kept set
    """
    if outcome.stats.initial_count and not outcome.kept:
        raise InvariantViolationError("thinning removed every cell of a nonempty input")
    lines = [
        f"# kind {outcome.kind}",
        f"# algorithm {outcome.algorithm}",
        f"# cells {outcome.stats.initial_count}",
        f"# kept {len(outcome.kept)}",
        f"# passes {outcome.passes}",
    ]
    lines += [f"# removed {cell} {pass_number}" for cell, pass_number in outcome.removed_order]
    lines += [str(cell) for cell in outcome.kept]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("skeleton_written", path=str(path), kept=len(outcome.kept))


def read_skeleton(path: str | Path) -> list[int]:
    """Kept cell ids of a skeleton file; comment lines are ignored."""
    kept = []
    for number, tokens in data_lines(path):
        if len(tokens) != 1 or not tokens[0].isdigit():
            raise MeshParseError(path, number, f"expected one cell id, got {' '.join(tokens)}")
        kept.append(int(tokens[0]))
    return kept


def read_anchors(
    path: str | Path, kind: ModelKind, grid_shape: Sequence[int] | None = None
) -> list[FaceKey]:
    """Anchor facets, one per line.

    Simplicial: the facet's vertex ids. Cubical: "axis x y [z]", the facet
    perpendicular to axis whose minimal corner is the given lattice vertex.
    """
    anchors: list[FaceKey] = []
    for number, tokens in data_lines(path):
        if kind.is_cubical:
            axes = AXES[: kind.dim]
            if len(tokens) != kind.dim + 1 or tokens[0] not in tuple(axes):
                raise MeshParseError(
                    path, number, f"expected an axis ({'|'.join(axes)}) and {kind.dim} corner coordinates"
                )
            if grid_shape is None:
                raise MeshParseError(path, number, "cubical anchors need the grid shape")
            corner = _parse_ints(path, number, tokens[1:])
            anchors.append(cubical_face_key(axes.index(tokens[0]), corner, grid_shape))
        else:
            if len(tokens) != kind.dim:
                raise MeshParseError(path, number, f"a {kind.value} facet has {kind.dim} vertex ids")
            anchors.append(tuple(sorted(_parse_ints(path, number, tokens))))
    return anchors


def _parse_ints(path, number: int, tokens: list[str]) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise MeshParseError(path, number, f"expected integers, got {' '.join(tokens)}") from exc
