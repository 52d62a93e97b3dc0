"""Top-cell complexes: the thinnable object.

Only top-dimensional cells are stored. Lower faces are identified on demand by
the sorted tuple of their global vertex ids, which works for simplices and for
lattice cubes alike (a cube vertex (X, Y, Z) gets id X + (nx+1)(Y + (ny+1)Z)).

Simplicity of a cell T is decided from two configurations of its boundary:
    C(T)  elements of T in the closure of the complement, where the complement is
          the removed cells plus the exterior of the original mesh minus anchors
    X(T)  elements of T shared with the other alive cells
T is simple when both are acyclic.
"""

from abc import ABC, abstractmethod
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np
import structlog

from src.config.settings import get_settings
from src.errors import AnchorError, InvariantViolationError, MalformedCellError
from src.models.cells import (
    CUBE_EMBEDDINGS,
    Configuration,
    ModelKind,
    cell_vertex_ids,
    decode_index,
    get_model_cell,
)
from src.tables.acyclicity import AcyclicityLookup

logger = structlog.get_logger()

FaceKey = tuple[int, ...]


class TopCellComplex(ABC):
    """Shared bookkeeping for simplicial and cubical top-cell complexes."""

    grid_shape: tuple[int, ...] | None = None

    def __init__(
        self,
        kind: ModelKind,
        cells: list[tuple[int, ...]],
        anchors: Iterable[FaceKey] = (),
        check_invariants: bool | None = None,
    ):
        self.kind = kind
        self.model = get_model_cell(kind)
        self.cells = cells
        self.alive = [True] * len(cells)
        self.alive_count = len(cells)
        self.anchors = frozenset(tuple(sorted(a)) for a in anchors)
        self.check_invariants = (
            get_settings().check_invariants if check_invariants is None else check_invariants
        )
        self.pinned: set[int] = set()
        self._anchored_facets: dict[int, set[int]] = {}

    def __len__(self) -> int:
        return len(self.cells)

    # Geometry-specific parts

    @abstractmethod
    def cell_vertices(self, t: int) -> tuple[int, ...]:
        """Global vertex ids of cell t in model label order."""

    @abstractmethod
    def contacts(self, t: int) -> Iterator[tuple[int, int]]:
        """Original cells sharing a vertex with t, as (cell id, shared label bits)."""

    @abstractmethod
    def _exterior_masks(self) -> list[int]:
        """Per-cell mask of elements in the closure of the unanchored exterior."""

    # Faces

    def facet_key(self, t: int, label_bits: int) -> FaceKey:
        vertices = self.cell_vertices(t)
        return tuple(sorted(v for label, v in enumerate(vertices) if label_bits >> label & 1))

    def facets(self, t: int) -> list[tuple[int, FaceKey]]:
        """(facet ordinal, facet key) for each facet of cell t."""
        return [(ordinal, self.facet_key(t, bits)) for ordinal, bits in self.model.facet_label_bits]

    @cached_property
    def face_index(self) -> dict[FaceKey, list[int]]:
        index: dict[FaceKey, list[int]] = {}
        for t in range(len(self.cells)):
            for _, key in self.facets(t):
                index.setdefault(key, []).append(t)
        return index

    def boundary_faces(self) -> list[FaceKey]:
        """Facets of the original complex with exactly one coface."""
        return [key for key, cofaces in self.face_index.items() if len(cofaces) == 1]

    def max_neighbor_count(self) -> int:
        return max((sum(1 for _ in self.contacts(t)) for t in range(len(self.cells))), default=0)

    def _setup_boundary(self) -> None:
        """Validate anchors, pin their cofaces and compute exterior masks."""
        if self.anchors:
            index = self.face_index
            for key in sorted(self.anchors):
                cofaces = index.get(key, [])
                if len(cofaces) != 1:
                    raise AnchorError(f"anchor face {key} is not on the external boundary")
                owner = cofaces[0]
                self.pinned.add(owner)
                for ordinal, facet in self.facets(owner):
                    if facet == key:
                        self._anchored_facets.setdefault(owner, set()).add(ordinal)
        self._exterior = self._exterior_masks()

    def _generic_exterior_masks(self) -> list[int]:
        """Exterior masks through the face index.

        Pass one collects each cell's unanchored boundary facets. Pass two ORs, for
        every such facet F on T or a neighbor of T, the elements of T lying in F.
        """
        index = self.face_index
        free_facets: list[list[frozenset[int]]] = []
        for t in range(len(self.cells)):
            free_facets.append(
                [
                    frozenset(key)
                    for _, key in self.facets(t)
                    if len(index[key]) == 1 and key not in self.anchors
                ]
            )
        subset_masks = self.model.subset_masks
        masks = []
        for t in range(len(self.cells)):
            vertices = self.cell_vertices(t)
            mask = 0
            for other in (t, *(n for n, _ in self.contacts(t))):
                for facet in free_facets[other]:
                    bits = sum(1 << label for label, v in enumerate(vertices) if v in facet)
                    mask |= subset_masks[bits]
            masks.append(mask)
        return masks

    # Configurations

    def _require_alive(self, t: int) -> None:
        if not self.alive[t]:
            raise InvariantViolationError(f"cell {t} has already been removed")

    def configuration_masks(self, t: int) -> tuple[int, int]:
        """(C(T), X(T)) as canonical masks."""
        subset_masks = self.model.subset_masks
        complement = self._exterior[t]
        attachment = 0
        alive = self.alive
        for n, bits in self.contacts(t):
            if alive[n]:
                attachment |= subset_masks[bits]
            else:
                complement |= subset_masks[bits]
        if self.check_invariants and not self.model.is_closed_mask(complement):
            raise InvariantViolationError(f"configuration of cell {t} is not closed")
        return complement, attachment

    def extract_configuration(self, t: int) -> Configuration:
        """Elements of cell t in the closure of the complement.

        Raises:
            InvariantViolationError: Cell t is dead, or the configuration is not closed
        """
        self._require_alive(t)
        return decode_index(self.kind, self.configuration_masks(t)[0])

    def attachment_configuration(self, t: int) -> Configuration:
        """Elements of cell t shared with the other alive cells."""
        self._require_alive(t)
        return decode_index(self.kind, self.configuration_masks(t)[1])

    def is_simple(self, t: int, table: AcyclicityLookup) -> bool:
        """True when removing t preserves homology and t meets the complement acyclically.

        Cells owning an anchored facet are never simple.

        Raises:
            KindMismatchError: Table built for another kind
        """
        table.require_kind(self.kind)
        self._require_alive(t)
        if t in self.pinned:
            return False
        complement, attachment = self.configuration_masks(t)
        return table.lookup(complement) and table.lookup(attachment)

    def remove(self, t: int) -> None:
        self._require_alive(t)
        self.alive[t] = False
        self.alive_count -= 1

    def neighbors(self, t: int) -> list[int]:
        """Alive cells sharing at least one vertex with t, excluding t."""
        alive = self.alive
        return [n for n, _ in self.contacts(t) if alive[n]]

    def alive_cells(self) -> list[int]:
        return [t for t, flag in enumerate(self.alive) if flag]

    def touches_current_boundary(self, t: int) -> bool:
        """Some unanchored facet of t has no alive coface other than t."""
        anchored = self._anchored_facets.get(t, ())
        alive = self.alive
        for ordinal, key in self.facets(t):
            if ordinal in anchored:
                continue
            if not any(alive[c] for c in self.face_index[key] if c != t):
                return True
        return False


class SimplicialTopComplex(TopCellComplex):
    """Top simplices given as sorted global vertex-id tuples."""

    def __init__(self, kind, cells, anchors=(), check_invariants=None):
        super().__init__(kind, cells, anchors, check_invariants)
        self._contacts = self._build_contacts()
        self._setup_boundary()

    def cell_vertices(self, t: int) -> tuple[int, ...]:
        return self.cells[t]

    @cached_property
    def vertex_index(self) -> dict[int, list[int]]:
        index: dict[int, list[int]] = {}
        for t, cell in enumerate(self.cells):
            for v in cell:
                index.setdefault(v, []).append(t)
        return index

    def _build_contacts(self) -> list[tuple[tuple[int, int], ...]]:
        index = self.vertex_index
        contacts = []
        for t, cell in enumerate(self.cells):
            shared: dict[int, int] = {}
            for label, v in enumerate(cell):
                for n in index[v]:
                    if n != t:
                        shared[n] = shared.get(n, 0) | 1 << label
            contacts.append(tuple(sorted(shared.items())))
        return contacts

    def contacts(self, t: int) -> Iterator[tuple[int, int]]:
        return iter(self._contacts[t])

    def max_neighbor_count(self) -> int:
        return max((len(c) for c in self._contacts), default=0)

    def _exterior_masks(self) -> list[int]:
        return self._generic_exterior_masks()


def cubical_vertex_id(point: Sequence[int], grid_shape: Sequence[int]) -> int:
    """Lattice vertex id: X + (nx+1)(Y + (ny+1)Z)."""
    vertex_id = 0
    for coordinate, extent in zip(reversed(point), reversed(grid_shape)):
        vertex_id = vertex_id * (extent + 1) + coordinate
    return vertex_id


def cubical_face_key(axis: int, corner: Sequence[int], grid_shape: Sequence[int]) -> FaceKey:
    """Key of the lattice facet perpendicular to axis with the given minimal corner."""
    free = [a for a in range(len(grid_shape)) if a != axis]
    points = []
    for steps in product((0, 1), repeat=len(free)):
        point = list(corner)
        for a, step in zip(free, steps):
            point[a] += step
        points.append(cubical_vertex_id(point, grid_shape))
    return tuple(sorted(points))


class CubicalTopComplex(TopCellComplex):
    """Pixels or voxels on a lattice, backed by a padded occupancy grid.

    Positions outside the grid are exterior.
    """

    def __init__(self, kind, cells, grid_shape, anchors=(), check_invariants=None):
        super().__init__(kind, cells, anchors, check_invariants)
        self.grid_shape = tuple(int(s) for s in grid_shape)
        dim = kind.dim
        coords = np.asarray(cells, dtype=np.int64).reshape(len(cells), dim)
        self._padded = tuple(s + 2 for s in self.grid_shape)

        strides = [1]
        for extent in self._padded[:-1]:
            strides.append(strides[-1] * extent)
        self._positions = (coords + 1) @ np.asarray(strides, dtype=np.int64)
        grid = np.zeros(int(np.prod(self._padded)), dtype=np.int64)
        grid[self._positions] = np.arange(1, len(cells) + 1)
        self._grid = grid.tolist()
        self._positions_list = self._positions.tolist()

        embedding = CUBE_EMBEDDINGS[kind]
        self._offsets: list[tuple[int, int]] = []
        self._facet_offsets: dict[int, int] = {}
        facet_by_bits = {bits: ordinal for ordinal, bits in self.model.facet_label_bits}
        for offset in product((-1, 0, 1), repeat=dim):
            if not any(offset):
                continue
            bits = sum(
                1 << label
                for label, corner in enumerate(embedding)
                if all(o == 0 or (o == 1) == (c == 1) for o, c in zip(offset, corner))
            )
            delta = int(np.dot(offset, strides))
            self._offsets.append((delta, bits))
            if sum(map(abs, offset)) == 1:
                self._facet_offsets[facet_by_bits[bits]] = delta
        self._setup_boundary()

    def cell_vertices(self, t: int) -> tuple[int, ...]:
        return cell_vertex_ids(self.kind, self.cells[t], self._vertex_id)

    def _vertex_id(self, point: tuple[int, ...]) -> int:
        return cubical_vertex_id(point, self.grid_shape)

    def contacts(self, t: int) -> Iterator[tuple[int, int]]:
        grid = self._grid
        position = self._positions_list[t]
        for delta, bits in self._offsets:
            occupant = grid[position + delta]
            if occupant:
                yield occupant - 1, bits

    def _exterior_masks(self) -> list[int]:
        if self.anchors:
            return self._generic_exterior_masks()
        grid = np.asarray(self._grid, dtype=np.int64)
        masks = np.zeros(len(self.cells), dtype=np.int64)
        subset_masks = self.model.subset_masks
        for delta, bits in self._offsets:
            empty = grid[self._positions + delta] == 0
            masks[empty] |= subset_masks[bits]
        return masks.tolist()

    def touches_current_boundary(self, t: int) -> bool:
        anchored = self._anchored_facets.get(t, ())
        grid = self._grid
        alive = self.alive
        position = self._positions_list[t]
        for ordinal, delta in self._facet_offsets.items():
            if ordinal in anchored:
                continue
            occupant = grid[position + delta]
            if not occupant or not alive[occupant - 1]:
                return True
        return False

    def boundary_faces(self) -> list[FaceKey]:
        grid = self._grid
        facet_bits = dict(self.model.facet_label_bits)
        faces = []
        for t, position in enumerate(self._positions_list):
            for ordinal, delta in self._facet_offsets.items():
                if not grid[position + delta]:
                    faces.append(self.facet_key(t, facet_bits[ordinal]))
        return faces


def _check_simplicial(kind: ModelKind, cells: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    normalized = []
    seen: dict[tuple[int, ...], int] = {}
    for i, cell in enumerate(cells):
        if len(cell) != kind.vertex_count:
            raise MalformedCellError(
                f"cell {i} has {len(cell)} vertices, {kind.value} needs {kind.vertex_count}"
            )
        key = tuple(sorted(int(v) for v in cell))
        if len(set(key)) != len(key):
            raise MalformedCellError(f"cell {i} {tuple(cell)} repeats a vertex id")
        if key in seen:
            raise MalformedCellError(f"cell {i} duplicates cell {seen[key]}: {key}")
        seen[key] = i
        normalized.append(key)
    return normalized


def _check_cubical(
    kind: ModelKind, cells: Sequence[Sequence[int]], grid_shape: Sequence[int] | None
) -> tuple[list[tuple[int, ...]], tuple[int, ...]]:
    normalized = [tuple(int(c) for c in cell) for cell in cells]
    for i, cell in enumerate(normalized):
        if len(cell) != kind.dim or any(c < 0 for c in cell):
            raise MalformedCellError(f"cell {i} {cell} is not a lattice coordinate for {kind.value}")
    if grid_shape is None:
        grid_shape = tuple(
            max((cell[a] for cell in normalized), default=0) + 1 for a in range(kind.dim)
        )
    grid_shape = tuple(int(s) for s in grid_shape)[: kind.dim]
    seen: dict[tuple[int, ...], int] = {}
    for i, cell in enumerate(normalized):
        if any(c >= s for c, s in zip(cell, grid_shape)):
            raise MalformedCellError(f"cell {i} {cell} lies outside grid {grid_shape}")
        if cell in seen:
            raise MalformedCellError(f"cell {i} duplicates cell {seen[cell]}: {cell}")
        seen[cell] = i
    return normalized, grid_shape


def build(
    cells: Sequence[Sequence[int]],
    kind: ModelKind,
    anchors: Iterable[FaceKey] = (),
    grid_shape: Sequence[int] | None = None,
    check_invariants: bool | None = None,
) -> TopCellComplex:
    """Index a list of top cells.

    Args:
        cells: Vertex-id tuples (simplices) or lattice coordinates (cubes)
        kind: Model kind of every cell
        anchors: Boundary facet keys treated as part of the object
        grid_shape: Lattice extent for cubes, inferred from the cells when omitted
        check_invariants: Assert closedness of every extracted configuration

    Raises:
        MalformedCellError: Wrong arity, repeated vertex, duplicate cell or bad coordinate
        AnchorError: An anchor is not an original external boundary facet
    """
    if kind.is_cubical:
        normalized, shape = _check_cubical(kind, cells, grid_shape)
        complex_ = CubicalTopComplex(kind, normalized, shape, anchors, check_invariants)
    else:
        normalized = _check_simplicial(kind, cells)
        complex_ = SimplicialTopComplex(kind, normalized, anchors, check_invariants)
    logger.debug(
        "complex_built", kind=kind.value, cells=len(normalized), anchors=len(complex_.anchors)
    )
    return complex_
