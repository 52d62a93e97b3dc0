import numpy as np
import pytest

from src.errors import MalformedCellError
from src.models.cells import (
    Configuration,
    ModelKind,
    canonical_index,
    cell_vertex_ids,
    concrete_elements,
    cube_edges_from_embedding,
    decode_index,
    get_model_cell,
    is_closed,
    map_concrete_cell,
    paper_index,
)


def test_element_counts():
    counts = {kind: get_model_cell(kind).n for kind in ModelKind}
    assert counts == {
        ModelKind.SIMPLEX2: 6,
        ModelKind.SIMPLEX3: 14,
        ModelKind.SIMPLEX4: 30,
        ModelKind.CUBE2: 8,
        ModelKind.CUBE3: 26,
    }


def test_orderings_are_verbatim():
    labels = [e.label for e in get_model_cell(ModelKind.SIMPLEX3).elements]
    assert labels == "0 1 2 3 01 02 03 12 13 23 012 013 023 123".split()
    voxel = [e.label for e in get_model_cell(ModelKind.CUBE3).elements]
    assert voxel[8:20] == "01 03 04 12 15 23 26 37 45 47 56 67".split()
    assert voxel[20:] == "0123 0145 0347 1256 2367 4567".split()
    simp4 = [e.label for e in get_model_cell(ModelKind.SIMPLEX4).elements]
    assert simp4[-2:] == ["0234", "1234"]


def test_cube_embeddings_make_printed_edges_unit_edges():
    assert cube_edges_from_embedding(ModelKind.CUBE2) == ["01", "02", "13", "23"]
    voxel_edges = [e.label for e in get_model_cell(ModelKind.CUBE3).elements if e.dim == 1]
    assert cube_edges_from_embedding(ModelKind.CUBE3) == sorted(voxel_edges)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_boundary_of_boundary_vanishes(kind):
    model = get_model_cell(kind)
    for d in range(2, kind.dim + 1):
        assert not np.any(model.signed_boundary[d - 1] @ model.signed_boundary[d])


def test_worked_example_indices():
    c = Configuration(ModelKind.SIMPLEX3, frozenset({1, 2, 3, 4, 5, 6, 8, 11}))
    assert c.labels() == ["0", "1", "2", "3", "01", "02", "12", "012"]
    assert canonical_index(c) == 1215
    assert paper_index(c) == 2430
    assert is_closed(c)


def test_decode_index_inverts_canonical_index():
    c = decode_index(ModelKind.SIMPLEX3, 1215)
    assert c.members == frozenset({1, 2, 3, 4, 5, 6, 8, 11})
    with pytest.raises(MalformedCellError):
        decode_index(ModelKind.SIMPLEX2, 1 << 6)


@pytest.mark.parametrize("kind", [ModelKind.SIMPLEX2, ModelKind.CUBE2, ModelKind.SIMPLEX3])
def test_index_round_trip_is_exhaustive_for_small_kinds(kind):
    for index in range(1 << kind.element_count):
        c = decode_index(kind, index)
        assert canonical_index(c) == index
        assert paper_index(c) == 2 * index


@pytest.mark.parametrize("kind", [ModelKind.CUBE3, ModelKind.SIMPLEX4])
def test_index_round_trip_on_random_indices(kind):
    rng = np.random.default_rng(7)
    for index in rng.integers(0, 1 << kind.element_count, size=100_000):
        c = decode_index(kind, int(index))
        assert canonical_index(c) == index
        assert paper_index(c) == 2 * index


def test_closedness():
    assert is_closed(Configuration.from_labels(ModelKind.SIMPLEX2, ["0", "1", "01"]))
    assert not is_closed(Configuration.from_labels(ModelKind.SIMPLEX2, ["01"]))
    assert is_closed(Configuration(ModelKind.CUBE2, frozenset()))
    assert is_closed(Configuration.from_labels(ModelKind.CUBE2, ["0", "1", "3", "01", "13"]))
    assert not is_closed(Configuration.from_labels(ModelKind.CUBE2, ["0", "1", "13"]))


def test_configuration_rejects_out_of_range_members():
    with pytest.raises(MalformedCellError):
        Configuration(ModelKind.SIMPLEX2, frozenset({0}))
    with pytest.raises(MalformedCellError):
        Configuration(ModelKind.SIMPLEX2, frozenset({7}))


def test_subset_masks_cover_shared_faces():
    model = get_model_cell(ModelKind.SIMPLEX2)
    expected = Configuration.from_labels(ModelKind.SIMPLEX2, ["0", "1", "01"]).mask
    assert model.subset_masks[0b011] == expected
    assert model.subset_masks[0b111] == model.full_mask
    assert model.subset_masks[0] == 0


def test_map_concrete_simplex():
    assert map_concrete_cell(ModelKind.SIMPLEX2, (7, 3, 5)) == {3: 0, 5: 1, 7: 2}
    with pytest.raises(MalformedCellError):
        map_concrete_cell(ModelKind.SIMPLEX2, (1, 1, 2))
    with pytest.raises(MalformedCellError):
        map_concrete_cell(ModelKind.SIMPLEX3, (1, 2, 3))


def test_map_concrete_cube():
    mapping = map_concrete_cell(ModelKind.CUBE2, (2, 3))
    assert mapping == {(2, 3): 0, (3, 3): 1, (2, 4): 2, (3, 4): 3}
    with pytest.raises(MalformedCellError):
        map_concrete_cell(ModelKind.CUBE3, (0, 0))


def test_cube_vertex_ids_need_a_lattice_encoding():
    with pytest.raises(ValueError):
        cell_vertex_ids(ModelKind.CUBE2, (0, 0))


def test_concrete_elements_list_top_first():
    keys = concrete_elements(ModelKind.SIMPLEX2, (9, 4, 6))
    assert keys == [(4, 6, 9), (4,), (6,), (9,), (4, 6), (4, 9), (6, 9)]


def test_euler_characteristic_of_masks():
    model = get_model_cell(ModelKind.SIMPLEX2)
    circle = Configuration.from_labels(ModelKind.SIMPLEX2, ["0", "1", "2", "01", "02", "12"])
    assert model.euler_characteristic(circle.mask) == 0
    assert model.euler_characteristic(0b1) == 1
