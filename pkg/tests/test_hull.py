"""Hull construction, plane extraction, halfspace intersection.

Frozen oracles: the unit cube (volume 1, area 6, six merged face planes),
the square frustum (volume 7/3, six planes), and scipy's independent hull
volume on random clouds.  Orientation is checked with the exact predicate:
every face must see the centroid strictly below it.
"""

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from hullpare.geometry import Halfspace, Sign, orient3
from hullpare.hull import (
    DegenerateInput,
    PolyhedronMesh,
    RegionStatus,
    TriangulatedHull,
    _cluster_near_points,
    convex_hull,
    face_planes,
    halfspace_intersection,
)

CUBE_POINTS = np.array(
    [[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]
)

FRUSTUM_POINTS = np.array(
    [
        [-1, -1, 0], [1, -1, 0], [1, 1, 0], [-1, 1, 0],
        [-0.5, -0.5, 1], [0.5, -0.5, 1], [0.5, 0.5, 1], [-0.5, 0.5, 1],
    ],
    dtype=float,
)


def cube_planes(lo=0.0, hi=1.0):
    planes = []
    for axis in range(3):
        for sign, off in ((-1.0, lo), (1.0, -hi)):
            n = np.zeros(3)
            n[axis] = sign
            planes.append(Halfspace(n=n, b=sign * off if sign < 0 else off))
    return planes


# -- convex_hull -------------------------------------------------------------


def test_cube_hull_counts_and_measures():
    hull = convex_hull(CUBE_POINTS)
    assert isinstance(hull, TriangulatedHull)
    assert len(hull.vertices) == 8
    assert len(hull.triangles) == 12
    assert hull.volume() == pytest.approx(1.0, abs=1e-12)
    assert hull.area() == pytest.approx(6.0, abs=1e-12)
    assert hull.diagonal == pytest.approx(np.sqrt(3.0))
    assert sorted(hull.point_indices) == list(range(8))


def test_hull_orientation_outward():
    rng = np.random.default_rng(2)
    for _ in range(5):
        pts = rng.normal(size=(80, 3))
        hull = convex_hull(pts)
        centroid = hull.vertices.mean(axis=0)
        for a, b, c in hull.triangles:
            s = orient3(hull.vertices[a], hull.vertices[b], hull.vertices[c], centroid)
            assert s is Sign.NEGATIVE


def test_hull_drops_interior_points():
    rng = np.random.default_rng(3)
    inner = rng.normal(size=(50, 3)) * 0.1
    pts = np.vstack([CUBE_POINTS * 4 - 2, inner])
    hull = convex_hull(pts)
    assert sorted(hull.point_indices) == list(range(8))
    assert hull.volume() == pytest.approx(64.0, rel=1e-12)


def test_hull_volume_matches_scipy():
    rng = np.random.default_rng(4)
    for _ in range(8):
        pts = rng.normal(size=(rng.integers(20, 200), 3)) * rng.random(3)
        hull = convex_hull(pts)
        assert hull.volume() == pytest.approx(ConvexHull(pts).volume, rel=1e-10)
        assert hull.area() == pytest.approx(ConvexHull(pts).area, rel=1e-10)


def test_hull_contains():
    hull = convex_hull(CUBE_POINTS)
    assert hull.contains([[0.5, 0.5, 0.5], [0.0, 0.0, 0.0]], tol=1e-9)
    assert not hull.contains([[1.5, 0.5, 0.5]], tol=1e-9)


def test_hull_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    with pytest.raises(DegenerateInput):
        convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.3, 0.2, 0]])
    with pytest.raises(DegenerateInput):
        convex_hull([[i, 2 * i, 3 * i] for i in range(9)])


# -- face_planes -------------------------------------------------------------


def test_cube_face_planes_merge():
    hull = convex_hull(CUBE_POINTS)
    ps = face_planes(hull)
    assert len(ps) == 6
    normals = sorted(tuple(np.round(h.normalized().n, 12)) for h in ps.halfspaces)
    expected = sorted(
        [(-1.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, -1.0, 0.0),
         (0.0, 1.0, 0.0), (0.0, 0.0, -1.0), (0.0, 0.0, 1.0)]
    )
    assert np.allclose(normals, expected)
    # Provenance covers each of the twelve triangles exactly once.
    covered = sorted(t for group in ps.provenance for t in group)
    assert covered == list(range(12))
    # All hull vertices satisfy every plane; each plane touches >= 3 vertices.
    N, b = ps.arrays()
    slack = CUBE_POINTS @ N.T + b
    assert slack.max() <= 1e-12
    assert ((np.abs(slack) <= 1e-12).sum(axis=0) >= 4).all()


def test_cube_face_planes_unmerged_uses_representative():
    # Coplanar triangles always collapse to one plane; without merging the
    # cluster is represented by its largest member's exact plane instead of
    # an area-weighted average.  Either way the cube yields six planes that
    # its vertices satisfy with equality on each face.
    hull = convex_hull(CUBE_POINTS)
    ps = face_planes(hull, merge_coplanar=False)
    assert len(ps) == 6
    for h, members in zip(ps.halfspaces, ps.provenance):
        tri_verts = hull.vertices[hull.triangles[members[0]]]
        assert np.allclose(tri_verts @ h.n + h.b, 0.0, atol=1e-12)


def test_frustum_has_six_planes():
    ps = face_planes(convex_hull(FRUSTUM_POINTS))
    assert len(ps) == 6


def test_face_planes_random_contain_all_vertices():
    rng = np.random.default_rng(5)
    for _ in range(6):
        pts = rng.normal(size=(120, 3))
        hull = convex_hull(pts)
        ps = face_planes(hull)
        N, b = ps.arrays()
        slack = hull.vertices @ N.T + b
        assert slack.max() <= 1e-9 * hull.diagonal
        # every hull vertex sits on at least three planes
        on_plane = np.abs(slack) <= 1e-9 * hull.diagonal
        assert (on_plane.sum(axis=1) >= 3).all()


# -- clustering --------------------------------------------------------------


def test_cluster_near_points_transitive_chain():
    pts = np.array([[0, 0, 0], [0.9, 0, 0], [1.8, 0, 0], [5, 0, 0]], dtype=float)
    clusters = sorted(_cluster_near_points(pts, 1.0), key=min)
    assert [sorted(c) for c in clusters] == [[0, 1, 2], [3]]


def test_cluster_near_points_exact_duplicates():
    pts = np.array([[1, 2, 3], [1, 2, 3], [4, 5, 6]], dtype=float)
    clusters = sorted(_cluster_near_points(pts, 0.0), key=min)
    assert [sorted(c) for c in clusters] == [[0, 1], [2]]


# -- halfspace_intersection ---------------------------------------------------


def test_intersect_cube_planes():
    mesh = halfspace_intersection(cube_planes())
    assert isinstance(mesh, PolyhedronMesh)
    assert mesh.volume() == pytest.approx(1.0, abs=1e-12)
    assert mesh.area() == pytest.approx(6.0, abs=1e-12)
    assert sorted(len(f) for f in mesh.faces) == [4] * 6
    assert sorted(mesh.face_sources) == list(range(6))


def test_intersect_empty_region():
    planes = [Halfspace([1, 0, 0], 0.0), Halfspace([-1, 0, 0], 1.0)]
    assert halfspace_intersection(planes) is RegionStatus.EMPTY


def test_intersect_unbounded_region():
    # A cube missing its +x face is a beam: no finite volume.
    assert halfspace_intersection(cube_planes()[1:]) is RegionStatus.UNBOUNDED
    # A single plane, and no planes at all.
    assert halfspace_intersection([Halfspace([0, 0, 1], -1.0)]) is RegionStatus.UNBOUNDED
    assert halfspace_intersection([]) is RegionStatus.UNBOUNDED


def test_intersect_flat_region_is_empty():
    planes = cube_planes() + [Halfspace([0, 0, 1], 0.0)]  # squeeze z to 0
    assert halfspace_intersection(planes) is RegionStatus.EMPTY


def test_intersect_redundant_planes_ignored():
    planes = cube_planes() + [Halfspace([1, 0, 0], -50.0)]  # x <= 50: slack
    mesh = halfspace_intersection(planes)
    assert mesh.volume() == pytest.approx(1.0, abs=1e-12)
    assert 6 not in mesh.face_sources


def test_roundtrip_hull_planes_intersection():
    rng = np.random.default_rng(6)
    for _ in range(6):
        pts = rng.normal(size=(100, 3)) * (1.0 + rng.random(3))
        hull = convex_hull(pts)
        ps = face_planes(hull)
        mesh = halfspace_intersection(ps.halfspaces)
        assert isinstance(mesh, PolyhedronMesh)
        assert mesh.volume() == pytest.approx(hull.volume(), rel=1e-9)
        assert mesh.area() == pytest.approx(hull.area(), rel=1e-9)
        # Vertex sets agree as point clouds.
        got = {tuple(np.round(v, 6)) for v in mesh.vertices}
        want = {tuple(np.round(v, 6)) for v in hull.vertices}
        assert got == want


def test_polyhedron_mesh_triangulated():
    mesh = halfspace_intersection(cube_planes())
    tris = mesh.triangulated()
    assert tris.shape == (12, 3)
    hull = TriangulatedHull(
        vertices=np.asarray(mesh.vertices),
        triangles=tris,
        point_indices=np.arange(len(mesh.vertices)),
    )
    assert hull.volume() == pytest.approx(1.0, abs=1e-12)
