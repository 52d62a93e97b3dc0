"""Model cells: the five reference cells, their boundary orderings and configurations.

A model cell fixes the order of the boundary elements of a triangle, tetrahedron,
4-simplex, pixel or voxel. A configuration is a subset of those boundary elements.
It is addressed in acyclicity tables by the bitmask of its members: bit l-1 is set
for the element with ordinal l.
"""

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from src.errors import InvariantViolationError, MalformedCellError


class ModelKind(Enum):
    """Reference cell kinds. Values are the names used on the command line."""

    SIMPLEX2 = "tri"
    SIMPLEX3 = "tet"
    SIMPLEX4 = "simp4"
    CUBE2 = "pixel"
    CUBE3 = "voxel"

    @property
    def tag(self) -> int:
        return _KIND_TAGS[self]

    @classmethod
    def from_tag(cls, tag: int) -> "ModelKind":
        for kind, value in _KIND_TAGS.items():
            if value == tag:
                return kind
        raise ValueError(f"unknown model kind tag {tag}")

    @property
    def dim(self) -> int:
        return _KIND_DIMS[self]

    @property
    def is_cubical(self) -> bool:
        return self in (ModelKind.CUBE2, ModelKind.CUBE3)

    @property
    def vertex_count(self) -> int:
        return len(_TOP_LABELS[self])

    @property
    def element_count(self) -> int:
        return len(_ORDERINGS[self].split())


_KIND_TAGS = {
    ModelKind.SIMPLEX2: 1,
    ModelKind.SIMPLEX3: 2,
    ModelKind.SIMPLEX4: 3,
    ModelKind.CUBE2: 4,
    ModelKind.CUBE3: 5,
}

_KIND_DIMS = {
    ModelKind.SIMPLEX2: 2,
    ModelKind.SIMPLEX3: 3,
    ModelKind.SIMPLEX4: 4,
    ModelKind.CUBE2: 2,
    ModelKind.CUBE3: 3,
}

# Boundary-element orderings, element ordinal = position + 1.
_ORDERINGS = {
    ModelKind.SIMPLEX2: "0 1 2 01 02 12",
    ModelKind.SIMPLEX3: "0 1 2 3 01 02 03 12 13 23 012 013 023 123",
    ModelKind.SIMPLEX4: (
        "0 1 2 3 4 01 02 03 04 12 13 14 23 24 34 "
        "012 013 014 023 024 034 123 124 134 234 0123 0124 0134 0234 1234"
    ),
    ModelKind.CUBE2: "0 1 2 3 01 02 13 23",
    ModelKind.CUBE3: (
        "0 1 2 3 4 5 6 7 01 03 04 12 15 23 26 37 45 47 56 67 "
        "0123 0145 0347 1256 2367 4567"
    ),
}

_TOP_LABELS = {
    ModelKind.SIMPLEX2: "012",
    ModelKind.SIMPLEX3: "0123",
    ModelKind.SIMPLEX4: "01234",
    ModelKind.CUBE2: "0123",
    ModelKind.CUBE3: "01234567",
}

# Geometric position of each model vertex label for the cubical models.
CUBE_EMBEDDINGS: dict[ModelKind, tuple[tuple[int, ...], ...]] = {
    ModelKind.CUBE2: ((0, 0), (1, 0), (0, 1), (1, 1)),
    ModelKind.CUBE3: (
        (0, 0, 0),
        (1, 0, 0),
        (1, 1, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 0, 1),
        (1, 1, 1),
        (0, 1, 1),
    ),
}

TOP_ORDINAL = 0


@dataclass(frozen=True, slots=True)
class BoundaryElement:
    """One element of a model cell. The top cell itself uses ordinal 0."""

    ordinal: int
    dim: int
    vertices: tuple[int, ...]
    label: str

    @property
    def bit(self) -> int:
        return 1 << (self.ordinal - 1) if self.ordinal else 0


@dataclass(frozen=True)
class ModelCell:
    """Immutable reference cell with its boundary ordering and signed boundary."""

    kind: ModelKind
    elements: tuple[BoundaryElement, ...]
    top: BoundaryElement
    face_lattice: dict[int, frozenset[int]]
    signed_boundary: dict[int, np.ndarray]
    ordinals_by_dim: dict[int, tuple[int, ...]]
    subset_masks: tuple[int, ...]
    face_masks: tuple[int, ...]
    dim_masks: tuple[int, ...]
    facet_label_bits: tuple[tuple[int, int], ...]
    fingerprint: str = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def element(self, ordinal: int) -> BoundaryElement:
        return self.top if ordinal == TOP_ORDINAL else self.elements[ordinal - 1]

    def by_label(self, label: str) -> BoundaryElement:
        for element in (*self.elements, self.top):
            if element.label == label:
                return element
        raise KeyError(f"{self.kind.value} has no element {label!r}")

    def boundary_of(self, ordinal: int) -> list[tuple[int, int]]:
        """Signed faces (face ordinal, coefficient) of one element."""
        element = self.element(ordinal)
        if element.dim == 0:
            return []
        matrix = self.signed_boundary[element.dim]
        rows = self.ordinals_by_dim[element.dim - 1]
        col = self.ordinals_by_dim[element.dim].index(ordinal)
        return [(rows[i], int(matrix[i, col])) for i in np.flatnonzero(matrix[:, col])]

    def euler_characteristic(self, mask: int) -> int:
        return sum(
            (-1) ** d * (mask & dim_mask).bit_count() for d, dim_mask in enumerate(self.dim_masks)
        )

    def is_closed_mask(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            if self.face_masks[low.bit_length()] & ~mask:
                return False
            rest ^= low
        return True


@dataclass(frozen=True)
class Configuration:
    """A subset of a model cell's boundary elements, given by 1-based ordinals."""

    kind: ModelKind
    members: frozenset[int]

    def __post_init__(self):
        n = self.kind.element_count
        bad = [m for m in self.members if not 1 <= m <= n]
        if bad:
            raise MalformedCellError(
                f"configuration members {sorted(bad)} outside 1..{n} for {self.kind.value}"
            )

    @classmethod
    def from_labels(cls, kind: ModelKind, labels: Iterable[str]) -> "Configuration":
        model = get_model_cell(kind)
        return cls(kind, frozenset(model.by_label(label).ordinal for label in labels))

    @property
    def mask(self) -> int:
        return canonical_index(self)

    def labels(self) -> list[str]:
        model = get_model_cell(self.kind)
        return [model.element(m).label for m in sorted(self.members)]


def canonical_index(c: Configuration) -> int:
    """Table address of a configuration: sum of 2^(l-1) over member ordinals l."""
    return sum(1 << (ordinal - 1) for ordinal in c.members)


def paper_index(c: Configuration) -> int:
    """Index with 1-based shifts, sum of 2^l. Always twice the canonical index."""
    return sum(1 << ordinal for ordinal in c.members)


def decode_index(kind: ModelKind, index: int) -> Configuration:
    n = kind.element_count
    if not 0 <= index < 1 << n:
        raise MalformedCellError(f"index {index} outside 0..2^{n}-1 for {kind.value}")
    return Configuration(kind, frozenset(l + 1 for l in range(n) if index >> l & 1))


def is_closed(c: Configuration) -> bool:
    """True iff every member's faces are members too."""
    return get_model_cell(c.kind).is_closed_mask(c.mask)


def map_concrete_cell(kind: ModelKind, cell: Sequence[int]) -> dict:
    """Map the vertices of a concrete cell to model vertex labels.

    Simplices map ascending global vertex id to ascending label. Cubes are given by
    their minimal lattice corner and map each corner coordinate to the label of the
    fixed embedding.

    Args:
        kind: Model kind of the cell
        cell: Global vertex ids (simplices) or lattice coordinate (cubes)

    Returns:
        Dict from concrete vertex (id or lattice point tuple) to model label

    Raises:
        MalformedCellError: Wrong arity or repeated vertex ids
    """
    if kind.is_cubical:
        if len(cell) != kind.dim:
            raise MalformedCellError(f"{kind.value} cell needs {kind.dim} coordinates, got {cell!r}")
        return {
            tuple(int(c) + e for c, e in zip(cell, offset)): label
            for label, offset in enumerate(CUBE_EMBEDDINGS[kind])
        }
    if len(cell) != kind.vertex_count:
        raise MalformedCellError(
            f"{kind.value} cell needs {kind.vertex_count} vertices, got {len(cell)}"
        )
    ordered = sorted(int(v) for v in cell)
    if len(set(ordered)) != len(ordered):
        raise MalformedCellError(f"cell {tuple(cell)} repeats a vertex id")
    return {v: label for label, v in enumerate(ordered)}


def cell_vertex_ids(
    kind: ModelKind,
    cell: Sequence[int],
    vertex_id: Callable[[tuple[int, ...]], int] | None = None,
) -> tuple[int, ...]:
    """Global vertex ids of a concrete cell listed in model-label order."""
    mapping = map_concrete_cell(kind, cell)
    by_label = sorted(mapping.items(), key=lambda item: item[1])
    if kind.is_cubical:
        if vertex_id is None:
            raise ValueError("cubical cells need a lattice vertex_id function")
        return tuple(vertex_id(point) for point, _ in by_label)
    return tuple(v for v, _ in by_label)


def concrete_elements(
    kind: ModelKind,
    cell: Sequence[int],
    vertex_id: Callable[[tuple[int, ...]], int] | None = None,
) -> list[tuple[int, ...]]:
    """Concrete keys (sorted vertex-id tuples) of the top element and all boundary elements.

    Index 0 holds the top element, index l the element with ordinal l.
    """
    ids = cell_vertex_ids(kind, cell, vertex_id)
    model = get_model_cell(kind)
    return [
        tuple(sorted(ids[label] for label in element.vertices))
        for element in (model.top, *model.elements)
    ]


def _parse_labels(text: str) -> tuple[int, ...]:
    return tuple(int(ch) for ch in text)


def _element_dim(kind: ModelKind, vertices: tuple[int, ...]) -> int:
    if not kind.is_cubical:
        return len(vertices) - 1
    coords = [CUBE_EMBEDDINGS[kind][v] for v in vertices]
    free = [axis for axis in range(kind.dim) if len({c[axis] for c in coords}) == 2]
    # A cube element is the full product of its free axes at fixed other coordinates.
    if len(vertices) != 2 ** len(free):
        raise InvariantViolationError(f"{kind.value} element {vertices} is not a lattice box")
    return len(free)


def _cube_boundary(
    kind: ModelKind, vertices: tuple[int, ...], ordinal_of: dict[frozenset, int]
) -> list[tuple[int, int]]:
    """Tensor-product boundary: sum over free axes j of (-1)^j (upper face - lower face)."""
    embedding = CUBE_EMBEDDINGS[kind]
    coords = {v: embedding[v] for v in vertices}
    free = [axis for axis in range(kind.dim) if len({c[axis] for c in coords.values()}) == 2]
    terms = []
    for j, axis in enumerate(free):
        for side, sign in ((0, -1), (1, 1)):
            face = frozenset(v for v, c in coords.items() if c[axis] == side)
            terms.append((ordinal_of[face], sign * (-1) ** j))
    return terms


def _simplex_boundary(
    vertices: tuple[int, ...], ordinal_of: dict[frozenset, int]
) -> list[tuple[int, int]]:
    return [
        (ordinal_of[frozenset(vertices[:i] + vertices[i + 1 :])], (-1) ** i)
        for i in range(len(vertices))
    ]


def _build_model(kind: ModelKind) -> ModelCell:
    labels = _ORDERINGS[kind].split()
    elements = tuple(
        BoundaryElement(
            ordinal=i + 1,
            dim=_element_dim(kind, _parse_labels(text)),
            vertices=_parse_labels(text),
            label=text,
        )
        for i, text in enumerate(labels)
    )
    top_vertices = _parse_labels(_TOP_LABELS[kind])
    top = BoundaryElement(TOP_ORDINAL, kind.dim, top_vertices, _TOP_LABELS[kind])
    everything = (*elements, top)
    ordinal_of = {frozenset(e.vertices): e.ordinal for e in everything}

    dims = [e.dim for e in elements]
    if dims != sorted(dims):
        raise InvariantViolationError(f"{kind.value} ordering lists a coface before a face")
    if not kind.is_cubical:
        derived = [
            "".join(map(str, combo))
            for d in range(kind.dim)
            for combo in combinations(range(kind.vertex_count), d + 1)
        ]
        if derived != labels:
            raise InvariantViolationError(f"{kind.value} ordering differs from vertex subsets")

    ordinals_by_dim: dict[int, tuple[int, ...]] = {}
    for e in everything:
        ordinals_by_dim.setdefault(e.dim, ())
        ordinals_by_dim[e.dim] += (e.ordinal,)

    face_lattice: dict[int, frozenset[int]] = {}
    for e in everything:
        face_lattice[e.ordinal] = frozenset(
            f.ordinal
            for f in elements
            if f.dim == e.dim - 1 and set(f.vertices) <= set(e.vertices)
        )

    signed_boundary: dict[int, np.ndarray] = {}
    for d in range(1, kind.dim + 1):
        rows, cols = ordinals_by_dim[d - 1], ordinals_by_dim[d]
        matrix = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, ordinal in enumerate(cols):
            vertices = everything[ordinal - 1].vertices if ordinal else top_vertices
            terms = (
                _cube_boundary(kind, vertices, ordinal_of)
                if kind.is_cubical
                else _simplex_boundary(vertices, ordinal_of)
            )
            for face, sign in terms:
                matrix[rows.index(face), j] = sign
            if {face for face, _ in terms} != face_lattice[ordinal]:
                raise InvariantViolationError(
                    f"{kind.value} element {everything[ordinal - 1].label if ordinal else top.label}: "
                    "signed boundary disagrees with the face lattice"
                )
        signed_boundary[d] = matrix
    for d in range(2, kind.dim + 1):
        if np.any(signed_boundary[d - 1] @ signed_boundary[d]):
            raise InvariantViolationError(f"{kind.value}: boundary of boundary is not zero in dim {d}")

    subset_masks = tuple(
        sum(e.bit for e in elements if all(s >> v & 1 for v in e.vertices))
        for s in range(1 << kind.vertex_count)
    )
    face_masks = (0,) + tuple(sum(1 << (f - 1) for f in face_lattice[e.ordinal]) for e in elements)
    dim_masks = tuple(
        sum(e.bit for e in elements if e.dim == d) for d in range(kind.dim)
    )
    facet_label_bits = tuple(
        (e.ordinal, sum(1 << v for v in e.vertices)) for e in elements if e.dim == kind.dim - 1
    )

    digest = hashlib.blake2b(digest_size=8)
    digest.update(kind.value.encode())
    digest.update(_ORDERINGS[kind].encode())
    for d in sorted(signed_boundary):
        digest.update(signed_boundary[d].tobytes())

    return ModelCell(
        kind=kind,
        elements=elements,
        top=top,
        face_lattice=face_lattice,
        signed_boundary=signed_boundary,
        ordinals_by_dim=ordinals_by_dim,
        subset_masks=subset_masks,
        face_masks=face_masks,
        dim_masks=dim_masks,
        facet_label_bits=facet_label_bits,
        fingerprint=digest.hexdigest(),
    )


@lru_cache(maxsize=None)
def get_model_cell(kind: ModelKind) -> ModelCell:
    return _build_model(kind)


def cube_edges_from_embedding(kind: ModelKind) -> list[str]:
    """Unit-distance vertex pairs of a cube embedding, as sorted labels."""
    embedding = CUBE_EMBEDDINGS[kind]
    return sorted(
        f"{a}{b}"
        for a, b in combinations(range(len(embedding)), 2)
        if sum(abs(x - y) for x, y in zip(embedding[a], embedding[b])) == 1
    )
