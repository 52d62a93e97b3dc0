"""Small meshes with known homology, used by the demo command, tests and the acceptance script.

Every generator is deterministic and returns a Mesh. EXPECTED_BETTI records
the Betti numbers each shape must keep through thinning.
"""

import math
from itertools import permutations, product
from typing import Callable

from src.models.cells import ModelKind
from src.models.mesh import Mesh


def fan_disk(spokes: int = 6) -> Mesh:
    """Triangles around one center vertex (id 0)."""
    cells = [tuple(sorted((0, i, i % spokes + 1))) for i in range(1, spokes + 1)]
    points = {0: (0.0, 0.0)}
    for i in range(1, spokes + 1):
        angle = 2 * math.pi * (i - 1) / spokes
        points[i] = (math.cos(angle), math.sin(angle))
    return Mesh(ModelKind.SIMPLEX2, cells, points)


def annulus(segments: int = 8, layers: int = 2) -> Mesh:
    """Triangulated annulus with `layers` rings of quads, each split into two triangles."""
    def vid(ring: int, i: int) -> int:
        return ring * segments + i % segments

    cells = []
    for ring in range(layers):
        for i in range(segments):
            a, b = vid(ring, i), vid(ring, i + 1)
            c, d = vid(ring + 1, i), vid(ring + 1, i + 1)
            cells.append(tuple(sorted((a, b, c))))
            cells.append(tuple(sorted((b, d, c))))
    points = {}
    for ring in range(layers + 1):
        for i in range(segments):
            angle = 2 * math.pi * i / segments
            radius = 1.0 + ring
            points[vid(ring, i)] = (radius * math.cos(angle), radius * math.sin(angle))
    return Mesh(ModelKind.SIMPLEX2, cells, points)


def mobius(segments: int = 8) -> Mesh:
    """One-cell-wide Moebius band: top_i = i, bot_i = segments + i, glued with a twist."""
    if segments < 6:
        raise ValueError("a Moebius band needs at least 6 segments to stay simplicial")
    top = list(range(segments))
    bot = [segments + i for i in range(segments)]
    cells = []
    for i in range(segments):
        a, b = top[i], bot[i]
        if i + 1 < segments:
            c, d = top[i + 1], bot[i + 1]
        else:
            c, d = bot[0], top[0]
        cells.append(tuple(sorted((a, b, d))))
        cells.append(tuple(sorted((a, d, c))))
    points = {}
    for i in range(segments):
        angle = 2 * math.pi * i / segments
        for side, vertex in ((1.0, top[i]), (-1.0, bot[i])):
            radial = 2.0 + 0.5 * side * math.cos(angle / 2)
            points[vertex] = (
                radial * math.cos(angle),
                radial * math.sin(angle),
                0.5 * side * math.sin(angle / 2),
            )
    return Mesh(ModelKind.SIMPLEX2, cells, points)


def strip(length: int = 4) -> Mesh:
    """One-cell-thick strip of 2*length triangles; the end edges are (0, length+1) and (length, 2*length+1)."""
    upper = list(range(length + 1))
    lower = [length + 1 + i for i in range(length + 1)]
    cells = []
    for i in range(length):
        cells.append(tuple(sorted((upper[i], lower[i], upper[i + 1]))))
        cells.append(tuple(sorted((upper[i + 1], lower[i], lower[i + 1]))))
    points = {upper[i]: (float(i), 1.0) for i in range(length + 1)}
    points.update({lower[i]: (float(i), 0.0) for i in range(length + 1)})
    return Mesh(ModelKind.SIMPLEX2, cells, points)


def kuhn_tetrahedra(cubes: list[tuple[int, int, int]], extent: int) -> Mesh:
    """Split unit cubes into 6 tetrahedra each along the main diagonal.

    All cubes use the same split, so neighboring cubes agree on shared faces.
    """
    def vid(point) -> int:
        x, y, z = point
        return x + (extent + 1) * (y + (extent + 1) * z)

    cells = []
    for corner in cubes:
        for order in permutations(range(3)):
            point = list(corner)
            path = [vid(point)]
            for axis in order:
                point[axis] += 1
                path.append(vid(point))
            cells.append(tuple(sorted(path)))
    points = {
        vid(p): tuple(float(c) for c in p) for p in product(range(extent + 1), repeat=3)
    }
    used = {v for cell in cells for v in cell}
    return Mesh(ModelKind.SIMPLEX3, cells, {v: p for v, p in points.items() if v in used})


def tet_ball(size: int = 2) -> Mesh:
    """Solid block of size^3 cubes, 6 tetrahedra each."""
    cubes = [(x, y, z) for z in range(size) for y in range(size) for x in range(size)]
    return kuhn_tetrahedra(cubes, size)


def tet_torus() -> Mesh:
    """3x3x1 frame of cubes around a missing center cube, 6 tetrahedra each."""
    cubes = [(x, y, 0) for y in range(3) for x in range(3) if (x, y) != (1, 1)]
    return kuhn_tetrahedra(cubes, 3)


def voxel_block(size: int = 5) -> Mesh:
    cells = [(x, y, z) for z in range(size) for y in range(size) for x in range(size)]
    return Mesh(ModelKind.CUBE3, cells, grid_shape=(size, size, size))


def voxel_ball(size: int = 9, radius: float = 4.0) -> Mesh:
    """Digitized ball: voxels whose lattice position lies within radius of the grid center."""
    center = (size - 1) / 2
    cells = [
        (x, y, z)
        for z in range(size)
        for y in range(size)
        for x in range(size)
        if (x - center) ** 2 + (y - center) ** 2 + (z - center) ** 2 <= radius**2
    ]
    return Mesh(ModelKind.CUBE3, cells, grid_shape=(size, size, size))


def voxel_torus(size: int = 5, height: int = 2) -> Mesh:
    """Block with the center column removed through its full height."""
    middle = size // 2
    cells = [
        (x, y, z)
        for z in range(height)
        for y in range(size)
        for x in range(size)
        if (x, y) != (middle, middle)
    ]
    return Mesh(ModelKind.CUBE3, cells, grid_shape=(size, size, height))


def pixel_annulus(size: int = 4, hole: int = 2) -> Mesh:
    """Square of pixels with a centered square hole."""
    low = (size - hole) // 2
    cells = [
        (x, y)
        for y in range(size)
        for x in range(size)
        if not (low <= x < low + hole and low <= y < low + hole)
    ]
    return Mesh(ModelKind.CUBE2, cells, grid_shape=(size, size))


SHAPES: dict[str, Callable[[], Mesh]] = {
    "fan": fan_disk,
    "annulus": annulus,
    "mobius": mobius,
    "strip": strip,
    "pixel-annulus": pixel_annulus,
    "tet-ball": tet_ball,
    "tet-torus": tet_torus,
    "voxel-ball": voxel_ball,
    "voxel-torus": voxel_torus,
    "voxel-block": voxel_block,
}

EXPECTED_BETTI: dict[str, list[int]] = {
    "fan": [1, 0, 0],
    "annulus": [1, 1, 0],
    "mobius": [1, 1, 0],
    "strip": [1, 0, 0],
    "pixel-annulus": [1, 1, 0],
    "tet-ball": [1, 0, 0, 0],
    "tet-torus": [1, 1, 0, 0],
    "voxel-ball": [1, 0, 0, 0],
    "voxel-torus": [1, 1, 0, 0],
    "voxel-block": [1, 0, 0, 0],
}


def make_shape(name: str) -> Mesh:
    try:
        return SHAPES[name]()
    except KeyError:
        raise ValueError(f"unknown demo shape {name!r}, choose from {', '.join(SHAPES)}") from None
