import pytest

from src.complex import build
from src.config.settings import get_settings
from src.demo.meshes import EXPECTED_BETTI, fan_disk, make_shape, strip, voxel_block
from src.errors import KindMismatchError, SizeLimitError
from src.models.cells import ModelKind
from src.processors.thinning import simple_cells, thin_anchored, thin_shape, thin_topology
from src.processors.verify import betti_of_cells

SUITE = [
    "fan",
    "annulus",
    "mobius",
    "pixel-annulus",
    "tet-ball",
    "tet-torus",
    "voxel-ball",
    "voxel-torus",
]


def _complex(name, anchored=False):
    mesh = make_shape(name)
    anchors = ()
    if anchored:
        anchors = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape).boundary_faces()[:1]
    return mesh, build(mesh.cells, mesh.kind, anchors, grid_shape=mesh.grid_shape)


def _kept_betti(mesh, outcome):
    return betti_of_cells([mesh.cells[i] for i in outcome.kept], mesh.kind, mesh.grid_shape).betti


@pytest.mark.parametrize("name", SUITE)
def test_topology_thinning_preserves_homology(name, tables):
    mesh, complex_ = _complex(name)
    table = tables[mesh.kind]
    outcome = thin_topology(complex_, table, check_invariants=True)
    assert _kept_betti(mesh, outcome) == EXPECTED_BETTI[name]
    assert simple_cells(complex_, table) == []
    assert outcome.stats.queue_pushes <= (outcome.stats.max_neighbor_count + 1) * len(mesh.cells)


@pytest.mark.parametrize("name", SUITE)
def test_shape_thinning_preserves_homology(name, tables):
    mesh, complex_ = _complex(name)
    outcome = thin_shape(complex_, tables[mesh.kind], check_invariants=True)
    assert _kept_betti(mesh, outcome) == EXPECTED_BETTI[name]


@pytest.mark.parametrize("name", SUITE)
@pytest.mark.parametrize("mode", ["topology", "shape"])
def test_anchored_thinning_preserves_homology(name, mode, tables):
    mesh, complex_ = _complex(name, anchored=True)
    outcome = thin_anchored(complex_, tables[mesh.kind], mode=mode)
    assert _kept_betti(mesh, outcome) == EXPECTED_BETTI[name]
    assert complex_.pinned <= outcome.kept_set


def test_fan_collapses_to_one_triangle(tri_table):
    complex_ = build(fan_disk(6).cells, ModelKind.SIMPLEX2)
    outcome = thin_topology(complex_, tri_table)
    assert outcome.algorithm == "topo"
    assert outcome.stats.kept_count == 1
    assert len(outcome.removed_order) == 5
    assert outcome.removed_order[0][1] == 0


def test_shape_keeps_a_thin_fan(tri_table):
    complex_ = build(fan_disk(6).cells, ModelKind.SIMPLEX2)
    outcome = thin_shape(complex_, tri_table)
    assert outcome.algorithm == "shape"
    assert outcome.kept == list(range(6))
    assert outcome.removed_order == []
    assert outcome.passes == 0


def test_strip_anchored_at_both_ends_keeps_everything(tri_table):
    mesh = strip(4)
    complex_ = build(mesh.cells, mesh.kind, anchors=[(0, 5), (4, 9)])
    outcome = thin_topology(complex_, tri_table, check_invariants=True)
    assert outcome.kept == list(range(len(mesh.cells)))


def test_unanchored_strip_thins_to_one_cell(tri_table):
    mesh = strip(4)
    outcome = thin_topology(build(mesh.cells, mesh.kind), tri_table)
    assert outcome.stats.kept_count == 1


def test_pass_numbers_never_decrease(tet_table):
    _, complex_ = _complex("tet-ball")
    outcome = thin_topology(complex_, tet_table)
    passes = [p for _, p in outcome.removed_order]
    assert passes == sorted(passes)
    assert outcome.passes == passes[-1] + 1


def test_shape_keeps_more_of_a_solid_block(voxel_table):
    mesh = voxel_block(5)
    topo = thin_topology(build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape), voxel_table)
    shape = thin_shape(build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape), voxel_table)
    assert topo.stats.kept_count == 1
    assert shape.stats.kept_count > topo.stats.kept_count
    assert _kept_betti(mesh, topo) == [1, 0, 0, 0]
    assert _kept_betti(mesh, shape) == [1, 0, 0, 0]


def test_voxel_table_and_oracle_thin_alike(voxel_table, voxel_oracle):
    mesh = voxel_block(4)
    from_table = thin_topology(build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape), voxel_table)
    from_oracle = thin_topology(build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape), voxel_oracle)
    assert from_table.removed_order == from_oracle.removed_order


def test_thinning_is_deterministic(tet_table):
    first = thin_topology(_complex("tet-torus")[1], tet_table)
    second = thin_topology(_complex("tet-torus")[1], tet_table)
    assert first == second


def test_per_removal_check_on_small_inputs(tri_table):
    _, complex_ = _complex("annulus")
    outcome = thin_topology(complex_, tri_table, verify_steps=True)
    assert outcome.stats.kept_count < len(complex_)


def test_per_removal_check_refuses_large_inputs(monkeypatch, tri_table):
    monkeypatch.setenv("ACYTHIN_DEBUG_MV_MAX_CELLS", "5")
    get_settings.cache_clear()
    _, complex_ = _complex("annulus")
    with pytest.raises(SizeLimitError):
        thin_topology(complex_, tri_table, verify_steps=True)


def test_wrong_table_kind(tet_table):
    _, complex_ = _complex("fan")
    with pytest.raises(KindMismatchError):
        thin_topology(complex_, tet_table)


def test_unknown_mode(tri_table):
    _, complex_ = _complex("fan")
    with pytest.raises(ValueError):
        thin_anchored(complex_, tri_table, mode="sideways")


@pytest.mark.parametrize("name", ["annulus", "tet-ball", "voxel-ball"])
@pytest.mark.parametrize("mode", ["topology", "shape"])
def test_empty_anchor_set_matches_unanchored_run(name, mode, tables):
    mesh = make_shape(name)
    table = tables[mesh.kind]
    anchored = thin_anchored(build(mesh.cells, mesh.kind, (), grid_shape=mesh.grid_shape), table, mode=mode)
    plain_complex = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape)
    plain = thin_topology(plain_complex, table) if mode == "topology" else thin_shape(plain_complex, table)
    assert anchored == plain


@pytest.mark.parametrize("name", ["annulus", "tet-ball", "voxel-ball"])
@pytest.mark.parametrize("mode", ["topology", "shape"])
def test_anchoring_the_whole_boundary_keeps_every_cell(name, mode, tables):
    mesh = make_shape(name)
    boundary = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape).boundary_faces()
    complex_ = build(mesh.cells, mesh.kind, boundary, grid_shape=mesh.grid_shape)
    outcome = thin_anchored(complex_, tables[mesh.kind], mode=mode)
    assert outcome.kept == list(range(len(mesh.cells)))


@pytest.mark.parametrize("name", ["annulus", "pixel-annulus", "tet-ball"])
def test_anchored_facets_stay_out_of_every_configuration(name, tables):
    mesh = make_shape(name)
    table = tables[mesh.kind]
    anchors = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape).boundary_faces()[::3]
    complex_ = build(mesh.cells, mesh.kind, anchors, grid_shape=mesh.grid_shape)
    anchor_set = set(anchors)
    while True:
        for t in complex_.alive_cells():
            members = complex_.extract_configuration(t).members
            assert not any(o in members for o, key in complex_.facets(t) if key in anchor_set)
        candidates = simple_cells(complex_, table)
        if not candidates:
            break
        complex_.remove(candidates[0])
    assert complex_.pinned <= set(complex_.alive_cells())
    assert betti_of_cells(
        [mesh.cells[t] for t in complex_.alive_cells()], mesh.kind, mesh.grid_shape
    ).betti == EXPECTED_BETTI[name]
