import pytest

from src.config.settings import get_settings
from src.demo.meshes import EXPECTED_BETTI, make_shape
from src.errors import MalformedCellError, SizeLimitError
from src.models.cells import ModelKind
from src.processors.verify import betti_of_cells, certify, face_counts, full_complex


@pytest.mark.parametrize(
    "cells, kind, counts",
    [
        ([(0, 1, 2)], ModelKind.SIMPLEX2, [3, 3, 1]),
        ([(0, 1, 2, 3, 4)], ModelKind.SIMPLEX4, [5, 10, 10, 5, 1]),
        ([(0, 0), (1, 0), (0, 1), (1, 1)], ModelKind.CUBE2, [9, 12, 4]),
        ([(0, 0, 0)], ModelKind.CUBE3, [8, 12, 6, 1]),
    ],
)
def test_full_complex_counts(cells, kind, counts):
    cc = full_complex(cells, kind)
    assert cc.cells_per_dim == counts
    assert cc.euler_characteristic == 1
    cc.validate()


@pytest.mark.parametrize("name", ["annulus", "mobius", "pixel-annulus", "tet-torus", "voxel-torus"])
def test_suite_homology(name):
    mesh = make_shape(name)
    summary = betti_of_cells(mesh.cells, mesh.kind, mesh.grid_shape)
    assert summary.betti == EXPECTED_BETTI[name]
    assert summary.torsion_free


def test_two_cubes_meeting_at_a_vertex_are_connected():
    summary = betti_of_cells([(0, 0, 0), (1, 1, 1)], ModelKind.CUBE3)
    assert summary.betti == [1, 0, 0, 0]


def test_certify_detects_a_broken_ring():
    mesh = make_shape("annulus")
    inner_ring_without_one_quad = mesh.cells[2:16]
    report = certify(mesh.cells, inner_ring_without_one_quad, mesh.kind)
    assert report.betti_out == [1, 0, 0]
    assert report.betti_in == [1, 1, 0]
    assert not report.isomorphic


def test_certify_identity():
    mesh = make_shape("pixel-annulus")
    report = certify(mesh.cells, mesh.cells, mesh.kind, mesh.grid_shape)
    assert report.isomorphic
    assert report.euler_in == report.euler_out == 0


def test_certify_rejects_foreign_cells():
    mesh = make_shape("fan")
    with pytest.raises(MalformedCellError):
        certify(mesh.cells, [(0, 1, 99)], mesh.kind)


def test_size_limit(monkeypatch):
    monkeypatch.setenv("ACYTHIN_VERIFY_MAX_CELLS", "3")
    get_settings.cache_clear()
    mesh = make_shape("fan")
    with pytest.raises(SizeLimitError):
        full_complex(mesh.cells, mesh.kind)


@pytest.mark.parametrize("name", ["annulus", "pixel-annulus", "tet-torus", "voxel-ball"])
def test_face_counts_match_full_complex(name):
    mesh = make_shape(name)
    counts = face_counts(mesh.cells, mesh.kind, mesh.grid_shape)
    assert counts == full_complex(mesh.cells, mesh.kind, mesh.grid_shape).cells_per_dim


def test_face_counts_have_no_size_limit(monkeypatch):
    monkeypatch.setenv("ACYTHIN_VERIFY_MAX_CELLS", "3")
    get_settings.cache_clear()
    mesh = make_shape("fan")
    assert face_counts(mesh.cells, mesh.kind) == [7, 12, 6]
