"""Chain complexes, Betti numbers and the configuration acyclicity oracle."""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from src.errors import InvariantViolationError, KindMismatchError
from src.homology.smith import rank_mod2, smith_normal_form
from src.models.cells import Configuration, ModelCell
from src.models.schemas import HomologySummary
from src.utils.union_find import count_components


@dataclass
class ChainComplex:
    """Integer chain complex given by its cell counts and boundary matrices.

    boundary[d] has shape (cells_per_dim[d-1], cells_per_dim[d]) for 1 <= d <= dims.
    Matrices are numpy arrays or scipy sparse matrices.
    """

    cells_per_dim: list[int]
    boundary: dict[int, object] = field(default_factory=dict)

    @property
    def dims(self) -> int:
        return len(self.cells_per_dim) - 1

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.cells_per_dim))

    def validate(self) -> None:
        """Check matrix shapes and that consecutive boundaries compose to zero.

        Raises:
            InvariantViolationError: Shape mismatch or a nonzero composite
        """
        for d in range(1, self.dims + 1):
            shape = self.boundary[d].shape
            expected = (self.cells_per_dim[d - 1], self.cells_per_dim[d])
            if tuple(shape) != expected:
                raise InvariantViolationError(
                    f"boundary[{d}] has shape {tuple(shape)}, expected {expected}"
                )
        for d in range(2, self.dims + 1):
            product = self.boundary[d - 1] @ self.boundary[d]
            nonzero = (
                product.count_nonzero() if sparse.issparse(product) else np.count_nonzero(product)
            )
            if nonzero:
                raise InvariantViolationError(f"boundary of boundary is nonzero in dimension {d}")


def homology_summary(cc: ChainComplex, validate: bool = True) -> HomologySummary:
    """Integer homology of a chain complex.

    b_d = n_d - rank(boundary_d) - rank(boundary_{d+1}). The complex is torsion-free
    iff every invariant factor of every boundary matrix is 1. A complex with no cells
    reports betti [0].

    Raises:
        InvariantViolationError: The complex is malformed
    """
    if validate:
        cc.validate()
    counts = cc.cells_per_dim
    if not any(counts):
        return HomologySummary(betti=[0], torsion_free=True, euler_characteristic=0)
    ranks = [0] * (len(counts) + 1)
    torsion_free = True
    for d in range(1, len(counts)):
        rank, diagonal = smith_normal_form(cc.boundary[d])
        ranks[d] = rank
        torsion_free = torsion_free and all(v == 1 for v in diagonal)
    betti = [counts[d] - ranks[d] - ranks[d + 1] for d in range(len(counts))]
    return HomologySummary(
        betti=betti, torsion_free=torsion_free, euler_characteristic=cc.euler_characteristic
    )


def betti_mod2(cc: ChainComplex) -> list[int]:
    """Betti numbers over GF(2)."""
    counts = cc.cells_per_dim
    if not any(counts):
        return [0]
    ranks = [0] * (len(counts) + 1)
    for d in range(1, len(counts)):
        ranks[d] = rank_mod2(cc.boundary[d])
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(len(counts))]


def mask_complex(model: ModelCell, mask: int) -> ChainComplex:
    """Sub-chain-complex of a model cell spanned by the elements in a canonical mask.

    The top dimension is the highest dimension among the members. Closedness of the
    mask is the caller's responsibility.
    """
    members: list[list[int]] = []
    for d in range(model.kind.dim):
        members.append(
            [p for p, ordinal in enumerate(model.ordinals_by_dim[d]) if mask >> (ordinal - 1) & 1]
        )
    while members and not members[-1]:
        members.pop()
    if not members:
        return ChainComplex(cells_per_dim=[0])
    boundary = {
        d: model.signed_boundary[d][np.ix_(members[d - 1], members[d])]
        for d in range(1, len(members))
    }
    return ChainComplex(cells_per_dim=[len(m) for m in members], boundary=boundary)


def configuration_complex(model: ModelCell, c: Configuration) -> ChainComplex:
    """Chain complex of a closed configuration.

    Raises:
        KindMismatchError: Configuration belongs to another model kind
        InvariantViolationError: Configuration is not closed
    """
    if c.kind is not model.kind:
        raise KindMismatchError(f"{c.kind.value} configuration used with {model.kind.value} model")
    if not model.is_closed_mask(c.mask):
        raise InvariantViolationError(
            f"configuration {c.labels()} of {model.kind.value} is not closed"
        )
    return mask_complex(model, c.mask)


def is_acyclic(model: ModelCell, c: Configuration) -> bool:
    return homology_summary(configuration_complex(model, c)).reduced_acyclic


def mask_components(model: ModelCell, mask: int) -> int:
    """Number of connected components of a closed mask, by union-find over its edges."""
    vertex_ordinals = [o for o in model.ordinals_by_dim[0] if mask >> (o - 1) & 1]
    if not vertex_ordinals:
        return 0
    position = {model.element(o).vertices[0]: i for i, o in enumerate(vertex_ordinals)}
    # Cube edges and simplex edges both have exactly two vertices.
    edges = (
        (position[model.element(o).vertices[0]], position[model.element(o).vertices[-1]])
        for o in model.ordinals_by_dim.get(1, ())
        if o and mask >> (o - 1) & 1
    )
    return count_components(len(vertex_ordinals), edges)


def mask_homology(model: ModelCell, mask: int) -> HomologySummary:
    return homology_summary(mask_complex(model, mask), validate=False)


def mask_is_acyclic(model: ModelCell, mask: int) -> bool:
    """Acyclicity of a closed mask with cheap early exits.

    Acyclic complexes have Euler characteristic 1 and one component, so anything
    else is rejected before the Smith normal form runs.
    """
    if not mask or model.euler_characteristic(mask) != 1:
        return False
    if mask_components(model, mask) != 1:
        return False
    return mask_homology(model, mask).reduced_acyclic
