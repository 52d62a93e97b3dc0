import numpy as np
import pytest
from scipy import sparse

from src.errors import InvariantViolationError, KindMismatchError
from src.homology import (
    ChainComplex,
    betti_mod2,
    configuration_complex,
    homology_summary,
    is_acyclic,
    mask_complex,
    mask_homology,
    mask_is_acyclic,
    rank_mod2,
    smith_normal_form,
)
from src.models.cells import Configuration, ModelKind, decode_index, get_model_cell
from src.tables import iter_closed_masks
from src.utils.union_find import UnionFind, count_components


def test_smith_normal_form_divisibility_chain():
    assert smith_normal_form(np.array([[2, 4], [6, 8]])) == (2, [2, 4])
    assert smith_normal_form(np.array([[2, 0], [0, 3]])) == (2, [1, 6])


def test_smith_normal_form_sparse_and_degenerate():
    assert smith_normal_form(np.zeros((3, 2), dtype=np.int64)) == (0, [])
    matrix = sparse.csc_matrix(np.array([[1, -1, 0], [-1, 0, 1], [0, 1, -1]]))
    rank, diagonal = smith_normal_form(matrix)
    assert rank == 2
    assert diagonal == [1, 1]


def test_rank_mod2():
    assert rank_mod2(np.array([[2]])) == 0
    assert rank_mod2(np.array([[1, 1], [1, 1]])) == 1


def test_torsion_is_reported():
    cc = ChainComplex(cells_per_dim=[1, 1], boundary={1: np.array([[2]])})
    summary = homology_summary(cc)
    assert summary.betti == [0, 0]
    assert not summary.torsion_free
    assert betti_mod2(cc) == [1, 1]


def test_validate_rejects_nonzero_composite():
    cc = ChainComplex(
        cells_per_dim=[1, 1, 1],
        boundary={1: np.array([[1]]), 2: np.array([[1]])},
    )
    with pytest.raises(InvariantViolationError):
        homology_summary(cc)


def test_validate_rejects_bad_shape():
    cc = ChainComplex(cells_per_dim=[2, 1], boundary={1: np.array([[1, -1]])})
    with pytest.raises(InvariantViolationError):
        cc.validate()


def test_circle_is_not_acyclic():
    model = get_model_cell(ModelKind.SIMPLEX2)
    circle = Configuration.from_labels(ModelKind.SIMPLEX2, ["0", "1", "2", "01", "02", "12"])
    summary = homology_summary(configuration_complex(model, circle))
    assert summary.betti == [1, 1]
    assert summary.torsion_free
    assert not is_acyclic(model, circle)


def test_single_vertex_and_empty():
    model = get_model_cell(ModelKind.SIMPLEX3)
    vertex = Configuration.from_labels(ModelKind.SIMPLEX3, ["2"])
    assert homology_summary(configuration_complex(model, vertex)).betti == [1]
    assert is_acyclic(model, vertex)
    empty = Configuration(ModelKind.SIMPLEX3, frozenset())
    assert homology_summary(configuration_complex(model, empty)).betti == [0]
    assert not is_acyclic(model, empty)


def test_worked_example_has_two_components():
    model = get_model_cell(ModelKind.SIMPLEX3)
    c = Configuration(ModelKind.SIMPLEX3, frozenset({1, 2, 3, 4, 5, 6, 8, 11}))
    summary = homology_summary(configuration_complex(model, c))
    assert summary.betti == [2, 0, 0]
    assert not is_acyclic(model, c)


def test_open_configuration_is_refused():
    model = get_model_cell(ModelKind.SIMPLEX2)
    with pytest.raises(InvariantViolationError):
        is_acyclic(model, Configuration.from_labels(ModelKind.SIMPLEX2, ["01"]))


def test_kind_mismatch():
    model = get_model_cell(ModelKind.SIMPLEX3)
    with pytest.raises(KindMismatchError):
        configuration_complex(model, Configuration.from_labels(ModelKind.SIMPLEX2, ["0"]))


def test_pixel_square_boundary_is_a_circle():
    model = get_model_cell(ModelKind.CUBE2)
    assert mask_homology(model, model.full_mask).betti == [1, 1]


def test_voxel_full_boundary_is_a_sphere():
    model = get_model_cell(ModelKind.CUBE3)
    assert mask_homology(model, model.full_mask).betti == [1, 0, 1]


@pytest.mark.parametrize("kind", [ModelKind.SIMPLEX2, ModelKind.CUBE2, ModelKind.SIMPLEX3])
def test_shortcut_agrees_with_full_homology(kind):
    model = get_model_cell(kind)
    for mask in iter_closed_masks(model):
        assert mask_is_acyclic(model, mask) == mask_homology(model, mask).reduced_acyclic


def test_union_find():
    sets = UnionFind(4)
    assert sets.unite(0, 1)
    assert not sets.unite(1, 0)
    assert sets.components == 3
    assert count_components(5, [(0, 1), (2, 3)]) == 3


def _flip_orientation(model, mask, ordinal):
    """Sub-complex of a mask with the sign of one member element reversed."""
    cc = mask_complex(model, mask)
    d = model.element(ordinal).dim
    members = [o for o in model.ordinals_by_dim[d] if mask >> (o - 1) & 1]
    position = members.index(ordinal)
    boundary = {k: np.array(v, copy=True) for k, v in cc.boundary.items()}
    if d in boundary:
        boundary[d][:, position] *= -1
    if d + 1 in boundary:
        boundary[d + 1][position, :] *= -1
    return ChainComplex(cells_per_dim=list(cc.cells_per_dim), boundary=boundary)


@pytest.mark.parametrize("kind", [ModelKind.SIMPLEX2, ModelKind.CUBE2])
def test_acyclicity_ignores_element_orientation(kind):
    model = get_model_cell(kind)
    for mask in iter_closed_masks(model):
        expected = mask_homology(model, mask).reduced_acyclic
        for ordinal in range(1, model.n + 1):
            if mask >> (ordinal - 1) & 1:
                flipped = homology_summary(_flip_orientation(model, mask, ordinal))
                assert flipped.reduced_acyclic == expected, (mask, ordinal)


@pytest.mark.parametrize(
    "kind", [ModelKind.SIMPLEX2, ModelKind.SIMPLEX3, ModelKind.CUBE2, ModelKind.CUBE3]
)
def test_mod2_betti_matches_integer_betti(kind):
    model = get_model_cell(kind)
    for mask in iter_closed_masks(model):
        cc = mask_complex(model, mask)
        summary = homology_summary(cc, validate=False)
        assert summary.torsion_free, mask
        assert betti_mod2(cc) == summary.betti, mask


def test_random_tetrahedron_configurations_against_graph_oracle():
    model = get_model_cell(ModelKind.SIMPLEX3)
    closed = list(iter_closed_masks(model))
    rng = np.random.default_rng(11)
    for mask in rng.choice(closed, size=100):
        c = decode_index(ModelKind.SIMPLEX3, int(mask))
        labels = c.labels()
        vertices = sorted(label for label in labels if len(label) == 1)
        position = {label: i for i, label in enumerate(vertices)}
        edges = [(position[label[0]], position[label[1]]) for label in labels if len(label) == 2]
        chi = sum((-1) ** (len(label) - 1) for label in labels)
        summary = homology_summary(configuration_complex(model, c))
        assert summary.betti[0] == count_components(len(vertices), edges)
        assert sum((-1) ** d * b for d, b in enumerate(summary.betti)) == chi
