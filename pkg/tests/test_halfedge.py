"""Halfedge mesh: construction invariants, ring walks, vertex surgery.

Frozen combinatorial oracles: the octahedron's dual is a cube (six quads),
the icosahedron's dual is a dodecahedron (twelve pentagons), and a
tetrahedron is self-dual.  Euler's formula V - E + F = 2 pins the counters
after every operation.
"""

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from hullpare.geometry import Sign, orient3
from hullpare.halfedge import (
    BoundaryMismatch,
    DeadVertex,
    EdgeConflict,
    HalfedgeHull,
    LocalTriangulation,
    MeshError,
    MinimalComplex,
    one_ring,
    remove_vertex,
    topological_dual,
)

TETRA_POINTS = np.array(
    [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float
)
# Outward-oriented faces of the tetrahedron above.
TETRA_FACES = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]

OCTA_POINTS = np.array(
    [
        [0, 0, 1],  # 0: north
        [1, 0, 0],  # 1
        [0, 1, 0],  # 2
        [-1, 0, 0],  # 3
        [0, -1, 0],  # 4
        [0, 0, -1],  # 5: south
    ],
    dtype=float,
)
OCTA_FACES = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
    (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4),
]


def oriented_hull_mesh(points):
    """Build a HalfedgeHull from scipy's hull with outward-oriented faces."""
    points = np.asarray(points, dtype=float)
    hull = ConvexHull(points)
    verts = points[hull.vertices]
    remap = {v: i for i, v in enumerate(hull.vertices)}
    centroid = verts.mean(axis=0)
    faces = []
    for simplex in hull.simplices:
        a, b, c = (points[i] for i in simplex)
        tri = [remap[i] for i in simplex]
        if np.dot(np.cross(b - a, c - a), centroid - a) > 0:
            tri = [tri[0], tri[2], tri[1]]
        faces.append(tuple(tri))
    return HalfedgeHull.from_triangles(verts, faces)


def face_vertices(mesh, face_id):
    """Vertex triple of one face, read through the halfedge links."""
    h0 = mesh.f_he[face_id]
    h1 = mesh.he_next[h0]
    h2 = mesh.he_next[h1]
    return (mesh.he_origin[h0], mesh.he_origin[h1], mesh.he_origin[h2])


def all_faces_see_interior(mesh):
    """Every face must have the interior centroid strictly below it."""
    pos = mesh.positions
    centroid = pos[mesh.alive_vertex_ids()].mean(axis=0)
    return all(
        orient3(pos[a], pos[b], pos[c], centroid) is Sign.NEGATIVE
        for a, b, c in mesh.triangle_list()
    )


def icosahedron_points():
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    pts = []
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            pts.append([0.0, s1, s2 * phi])
            pts.append([s1, s2 * phi, 0.0])
            pts.append([s1 * phi, 0.0, s2])
    return np.array(pts)


# -- construction ------------------------------------------------------------


def test_tetra_counts_and_validate():
    mesh = HalfedgeHull.from_triangles(TETRA_POINTS, TETRA_FACES)
    assert mesh.n_alive_vertices == 4
    assert mesh.n_alive_faces == 4
    assert mesh.n_alive_halfedges == 12
    mesh.validate()
    assert sorted(tuple(sorted(t)) for t in mesh.triangle_list()) == sorted(
        tuple(sorted(t)) for t in TETRA_FACES
    )


def test_octahedron_counts():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    assert mesh.n_alive_vertices == 6
    assert mesh.n_alive_faces == 8
    assert mesh.n_alive_halfedges == 24
    mesh.validate()
    assert all(mesh.valence(v) == 4 for v in mesh.alive_vertex_ids())


def test_duplicate_directed_edge_rejected():
    # Two faces traverse edge (0, 1) in the same direction: not a valid
    # oriented closed surface.
    faces = [(0, 1, 2), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    with pytest.raises(MeshError):
        HalfedgeHull.from_triangles(TETRA_POINTS, faces)


def test_open_surface_rejected():
    with pytest.raises(MeshError):
        HalfedgeHull.from_triangles(TETRA_POINTS, TETRA_FACES[:3])


def test_degenerate_triangle_rejected():
    faces = [(0, 0, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    with pytest.raises(MeshError):
        HalfedgeHull.from_triangles(TETRA_POINTS, faces)


# -- ring walks --------------------------------------------------------------


def test_one_ring_octahedron_north():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    ring = mesh.one_ring(0)
    assert ring.center == 0
    assert sorted(ring.neighbors) == [1, 2, 3, 4]
    assert len(ring.faces) == 4
    # Counterclockwise seen from outside (looking down +z at the north
    # pole) the equator reads 1 -> 2 -> 3 -> 4.
    start = ring.neighbors.index(1)
    cycle = ring.neighbors[start:] + ring.neighbors[:start]
    assert cycle == [1, 2, 3, 4]


def test_one_ring_faces_span_consecutive_neighbors():
    rng = np.random.default_rng(7)
    mesh = oriented_hull_mesh(rng.normal(size=(60, 3)))
    mesh.validate()
    total = 0
    for v in mesh.alive_vertex_ids():
        ring = mesh.one_ring(v)
        k = len(ring.neighbors)
        assert k == len(ring.faces) == mesh.valence(v)
        assert len(set(ring.neighbors)) == k
        total += k
        for j, f in enumerate(ring.faces):
            a = ring.neighbors[j]
            b = ring.neighbors[(j + 1) % k]
            assert {v, a, b} == set(face_vertices(mesh, f))
    # Every face is met exactly three times across all rings.
    assert total == 3 * mesh.n_alive_faces


def test_one_ring_dead_vertex_raises():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3), (1, 3, 4)]))
    with pytest.raises(DeadVertex):
        mesh.one_ring(0)
    with pytest.raises(DeadVertex):
        mesh.one_ring(17)


def test_edge_exists():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    assert mesh.edge_exists(0, 1)
    assert mesh.edge_exists(1, 0)
    assert not mesh.edge_exists(0, 5)
    assert not mesh.edge_exists(1, 3)


# -- vertex removal ----------------------------------------------------------


def test_remove_octahedron_north():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3), (1, 3, 4)]))
    assert mesh.n_alive_vertices == 5
    assert mesh.n_alive_faces == 6
    assert mesh.n_alive_halfedges == 18
    mesh.validate()
    assert not mesh.v_alive[0]
    assert mesh.edge_exists(1, 3)  # the new diagonal
    assert all_faces_see_interior(mesh)


def test_remove_requires_matching_boundary():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    # Patch traverses the ring the wrong way round.
    with pytest.raises(BoundaryMismatch):
        mesh.remove_vertex(0, LocalTriangulation([(3, 2, 1), (4, 3, 1)]))
    # Patch references a vertex outside the ring.
    with pytest.raises(BoundaryMismatch):
        mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3), (1, 3, 5)]))
    # Wrong triangle count for the ring size.
    with pytest.raises(BoundaryMismatch):
        mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3)]))
    # Failed attempts leave the mesh untouched.
    assert mesh.n_alive_vertices == 6
    assert mesh.n_alive_faces == 8
    mesh.validate()


def test_remove_with_existing_diagonal_conflicts():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3), (1, 3, 4)]))
    # Edge (1, 3) now exists, so the south removal cannot cut the same
    # diagonal: its patch faces the other way, which would create the
    # directed edges of (1, 3) a second time.
    ring = mesh.one_ring(5)
    assert sorted(ring.neighbors) == [1, 2, 3, 4]
    with pytest.raises(EdgeConflict):
        mesh.remove_vertex(5, LocalTriangulation([(1, 4, 3), (1, 3, 2)]))
    mesh.validate()
    assert mesh.n_alive_vertices == 5
    # The other diagonal works and leaves a tetrahedron.
    mesh.remove_vertex(5, LocalTriangulation([(2, 1, 4), (2, 4, 3)]))
    mesh.validate()
    assert mesh.n_alive_vertices == 4
    assert mesh.n_alive_faces == 4


def test_minimal_complex_refuses_tetra_removal():
    mesh = HalfedgeHull.from_triangles(TETRA_POINTS, TETRA_FACES)
    with pytest.raises(MinimalComplex):
        mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3)]))
    mesh.validate()
    assert mesh.n_alive_vertices == 4


def test_module_level_wrappers():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    ring = one_ring(mesh, 0)
    assert ring.center == 0
    remove_vertex(mesh, 0, LocalTriangulation([(1, 2, 3), (1, 3, 4)]))
    assert mesh.n_alive_vertices == 5
    mesh.validate()


def test_euler_formula_through_random_decimation():
    rng = np.random.default_rng(19)
    pts = rng.normal(size=(50, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]  # on the sphere: all extreme
    mesh = oriented_hull_mesh(pts)
    removed = 0
    for v in list(mesh.alive_vertex_ids()):
        if mesh.n_alive_vertices <= 5:
            break
        ring = mesh.one_ring(v)
        k = len(ring.neighbors)
        # Fan the ring from its first entry; skip when the fan would need a
        # diagonal that already exists (that case is exercised above).
        tri = LocalTriangulation(
            [(ring.neighbors[0], ring.neighbors[j], ring.neighbors[j + 1]) for j in range(1, k - 1)]
        )
        try:
            mesh.remove_vertex(v, tri)
        except EdgeConflict:
            continue
        removed += 1
        assert (
            mesh.n_alive_vertices - mesh.n_alive_halfedges // 2 + mesh.n_alive_faces
            == 2
        )
    assert removed >= 10
    mesh.validate()


# -- compaction --------------------------------------------------------------


def test_compact_preserves_combinatorics_and_positions():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    mesh.remove_vertex(0, LocalTriangulation([(1, 2, 3), (1, 3, 4)]))
    dense, vmap = mesh.compact()
    dense.validate()
    assert dense.n_alive_vertices == 5
    assert len(dense.positions) == 5
    assert sorted(vmap) == [1, 2, 3, 4, 5]
    for old, new in vmap.items():
        assert np.allclose(dense.positions[new], OCTA_POINTS[old])
    mapped = sorted(
        tuple(sorted((vmap[a], vmap[b], vmap[c]))) for a, b, c in mesh.triangle_list()
    )
    direct = sorted(tuple(sorted(t)) for t in dense.triangle_list())
    assert mapped == direct


# -- topological dual --------------------------------------------------------


def test_dual_of_tetra_is_tetra():
    mesh = HalfedgeHull.from_triangles(TETRA_POINTS, TETRA_FACES)
    ids, polygons = topological_dual(mesh)
    assert ids == [0, 1, 2, 3]
    assert all(len(p) == 3 for p in polygons)


def test_dual_of_octahedron_is_cube():
    mesh = HalfedgeHull.from_triangles(OCTA_POINTS, OCTA_FACES)
    ids, polygons = topological_dual(mesh)
    assert len(polygons) == 6
    assert all(len(p) == 4 for p in polygons)
    # Each of the eight faces appears in exactly three dual polygons.
    counts = {}
    for p in polygons:
        for f in p:
            counts[f] = counts.get(f, 0) + 1
    assert sorted(counts.values()) == [3] * 8


def test_dual_of_icosahedron_is_dodecahedron():
    mesh = oriented_hull_mesh(icosahedron_points())
    assert mesh.n_alive_vertices == 12
    assert mesh.n_alive_faces == 20
    ids, polygons = topological_dual(mesh)
    assert len(polygons) == 12
    assert all(len(p) == 5 for p in polygons)
