"""In-memory mesh as read from or written to disk."""

from dataclasses import dataclass, field

from src.models.cells import ModelKind


@dataclass
class Mesh:
    """Top cells of one kind plus optional geometry.

    Simplicial cells are sorted vertex-id tuples and `points` maps vertex id to
    coordinates. Cubical cells are lattice coordinates inside `grid_shape`.
    """

    kind: ModelKind
    cells: list[tuple[int, ...]]
    points: dict[int, tuple[float, ...]] = field(default_factory=dict)
    grid_shape: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.cells)

