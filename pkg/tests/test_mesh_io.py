import pytest

from src.complex import cubical_face_key
from src.demo.meshes import make_shape
from src.errors import InvariantViolationError, MeshParseError, UnsupportedKindError
from src.mesh_io import (
    read_anchors,
    read_simplicial,
    read_skeleton,
    read_voxels,
    write_simplicial,
    write_skeleton,
    write_voxels,
    write_vtk,
)
from src.models.cells import ModelKind
from src.models.mesh import Mesh
from src.models.schemas import ThinningOutcome, ThinningStats

NODES = """# unit square
4 2 0 0
0 0.0 0.0
1 1.0 0.0
2 0.0 1.0
3 1.0 1.0
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_read_simplicial(tmp_path):
    node = _write(tmp_path, "m.node", NODES)
    ele = _write(tmp_path, "m.ele", "2 3 0\n0 2 1 0  # reversed\n1 1 2 3\n")
    mesh = read_simplicial(node, ele)
    assert mesh.kind is ModelKind.SIMPLEX2
    assert mesh.cells == [(0, 1, 2), (1, 2, 3)]
    assert mesh.points[3] == (1.0, 1.0)


@pytest.mark.parametrize(
    "ele, line",
    [
        ("1 3 0\n0 0 1 9\n", 2),
        ("1 6 0\n0 0 1 2 3 0 1\n", 1),
        ("2 3 0\n0 0 1 2\n1 2 1 0\n", 3),
        ("1 3 0\n0 0 1 1\n", 2),
        ("1 3 0\n0 0 1\n", 2),
    ],
    ids=["unknown-vertex", "bad-arity", "duplicate", "repeated-vertex", "short-line"],
)
def test_simplicial_parse_errors_carry_line_numbers(tmp_path, ele, line):
    node = _write(tmp_path, "m.node", NODES)
    ele_path = _write(tmp_path, "m.ele", ele)
    with pytest.raises(MeshParseError) as excinfo:
        read_simplicial(node, ele_path)
    assert excinfo.value.line == line


def test_element_count_mismatch(tmp_path):
    node = _write(tmp_path, "m.node", NODES)
    ele = _write(tmp_path, "m.ele", "3 3 0\n0 0 1 2\n")
    with pytest.raises(MeshParseError):
        read_simplicial(node, ele)


def test_simplicial_writer_reads_back(tmp_path):
    mesh = make_shape("tet-torus")
    write_simplicial(mesh, tmp_path / "t.node", tmp_path / "t.ele")
    again = read_simplicial(tmp_path / "t.node", tmp_path / "t.ele")
    assert again.kind is ModelKind.SIMPLEX3
    assert again.cells == mesh.cells


def test_read_voxels(tmp_path):
    path = _write(tmp_path, "p.vox", "VOX 3 2 1\n1 0 1\n0 1 1\n")
    mesh = read_voxels(path)
    assert mesh.kind is ModelKind.CUBE2
    assert mesh.grid_shape == (3, 2)
    assert mesh.cells == [(0, 0), (2, 0), (1, 1), (2, 1)]


def test_voxel_writer_reads_back(tmp_path):
    mesh = make_shape("voxel-torus")
    write_voxels(mesh, tmp_path / "v.vox")
    again = read_voxels(tmp_path / "v.vox")
    assert again.kind is ModelKind.CUBE3
    assert again.grid_shape == mesh.grid_shape
    assert again.cells == mesh.cells


@pytest.mark.parametrize(
    "text",
    ["VOX 2 1\n1 1\n", "VOX 2 1 1\n1 2\n", "VOX 2 2 1\n1 1 1\n", "GRID 1 1 1\n1\n"],
)
def test_voxel_parse_errors(tmp_path, text):
    with pytest.raises(MeshParseError):
        read_voxels(_write(tmp_path, "bad.vox", text))


def _outcome(kept, removed, initial):
    return ThinningOutcome(
        algorithm="topo",
        kind="tri",
        kept=kept,
        removed_order=removed,
        passes=2,
        stats=ThinningStats(initial_count=initial, kept_count=len(kept), queue_pushes=3),
    )


def test_skeleton_file(tmp_path):
    path = tmp_path / "out.skel"
    write_skeleton(_outcome([1, 3], [(0, 0), (2, 1)], 4), path)
    text = path.read_text(encoding="utf-8")
    assert "# removed 0 0\n# removed 2 1\n" in text
    assert text.endswith("1\n3\n")
    assert read_skeleton(path) == [1, 3]


def test_empty_skeleton_of_nonempty_input_is_refused(tmp_path):
    with pytest.raises(InvariantViolationError):
        write_skeleton(_outcome([], [(0, 0)], 1), tmp_path / "out.skel")


def test_skeleton_parse_error(tmp_path):
    with pytest.raises(MeshParseError) as excinfo:
        read_skeleton(_write(tmp_path, "bad.skel", "# kind tri\n1\nx\n"))
    assert excinfo.value.line == 3


def test_read_anchors(tmp_path):
    simplicial = _write(tmp_path, "a.txt", "# ends\n5 0\n4 9\n")
    assert read_anchors(simplicial, ModelKind.SIMPLEX2) == [(0, 5), (4, 9)]
    cubical = _write(tmp_path, "c.txt", "x 0 0\ny 1 0\n")
    assert read_anchors(cubical, ModelKind.CUBE2, (2, 1)) == [
        cubical_face_key(0, (0, 0), (2, 1)),
        cubical_face_key(1, (1, 0), (2, 1)),
    ]
    with pytest.raises(MeshParseError):
        read_anchors(_write(tmp_path, "bad.txt", "z 0 0\n"), ModelKind.CUBE2, (2, 1))


def test_write_vtk_pixels(tmp_path):
    mesh = Mesh(ModelKind.CUBE2, [(0, 0), (1, 0)], grid_shape=(2, 1))
    path = tmp_path / "p.vtk"
    write_vtk(mesh, [True, False], path, removal_pass=[-1, 0])
    text = path.read_text(encoding="utf-8")
    assert "POINTS 6 double" in text
    assert "CELLS 2 10" in text
    assert "CELL_TYPES 2\n9\n9\n" in text
    assert "SCALARS kept int 1\nLOOKUP_TABLE default\n1\n0\n" in text
    assert "SCALARS removal_pass int 1\nLOOKUP_TABLE default\n-1\n0\n" in text


def test_write_vtk_refuses_simplex4(tmp_path):
    mesh = Mesh(ModelKind.SIMPLEX4, [(0, 1, 2, 3, 4)])
    with pytest.raises(UnsupportedKindError):
        write_vtk(mesh, [True], tmp_path / "s.vtk")
