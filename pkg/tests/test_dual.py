"""Polar duality about an interior point.

Frozen worked example: the unit cube about its center.  Plane x <= 1 has
n = (1,0,0), b = -1, value n.c + b = -1/2, so its dual point is
-n / value = (2, 0, 0); the six cube planes dualize to an octahedron of
circumradius 2, and each octahedron facet maps back to a cube corner.
"""

import numpy as np
import pytest

from hullpare.dual import (
    CenterOnBoundary,
    DualFacePlane,
    DualHull,
    NearInfinitePrimalVertex,
    build_dual_hull,
    dual_points,
    extract_primal,
    from_dual,
    to_dual,
)
from hullpare.geometry import Halfspace

CENTER = np.array([0.5, 0.5, 0.5])


def cube_planes():
    planes = []
    for axis in range(3):
        for sign, off in ((-1.0, 0.0), (1.0, -1.0)):
            n = np.zeros(3)
            n[axis] = sign
            planes.append(Halfspace(n=n, b=off if sign > 0 else 0.0))
    return planes


# -- point transforms --------------------------------------------------------


def test_to_dual_worked_example():
    h = Halfspace([1.0, 0.0, 0.0], -1.0)  # x <= 1
    assert np.allclose(to_dual(h, CENTER), [2.0, 0.0, 0.0])
    h = Halfspace([-1.0, 0.0, 0.0], 0.0)  # x >= 0
    assert np.allclose(to_dual(h, CENTER), [-2.0, 0.0, 0.0])


def test_to_dual_scale_invariance():
    # Scaling a halfspace's (n, b) never moves its dual point.
    h1 = Halfspace([0.0, 3.0, 0.0], -3.0)
    h2 = Halfspace([0.0, 1.0, 0.0], -1.0)
    assert np.allclose(to_dual(h1, CENTER), to_dual(h2, CENTER))


def test_dual_points_matches_scalar_transform():
    planes = cube_planes()
    batch = dual_points(planes, CENTER)
    singles = np.array([to_dual(h, CENTER) for h in planes])
    assert np.allclose(batch, singles)
    assert np.allclose(np.sort(np.linalg.norm(batch, axis=1)), 2.0)


def test_center_on_boundary_raises():
    h = Halfspace([1.0, 0.0, 0.0], -0.5)  # passes through the center
    with pytest.raises(CenterOnBoundary):
        to_dual(h, CENTER)
    h = Halfspace([1.0, 0.0, 0.0], -0.25)  # center outside
    with pytest.raises(CenterOnBoundary):
        to_dual(h, CENTER)
    with pytest.raises(CenterOnBoundary):
        dual_points(cube_planes() + [h], CENTER)


def test_from_dual_inverts_facets():
    # The octahedron facet spanned by duals (2,0,0), (0,2,0), (0,0,2) has
    # plane eta=(1,1,1), beta=2: its primal vertex is the cube corner
    # center + eta/beta = (1, 1, 1).
    plane = DualFacePlane(eta=np.array([1.0, 1.0, 1.0]), beta=2.0)
    assert np.allclose(from_dual(plane, CENTER), [1.0, 1.0, 1.0])


def test_from_dual_near_infinite_vertex():
    plane = DualFacePlane(eta=np.array([1.0, 0.0, 0.0]), beta=1e-300)
    with pytest.raises(NearInfinitePrimalVertex):
        from_dual(plane, CENTER)


# -- dual hull ---------------------------------------------------------------


def test_build_dual_hull_cube():
    dh = build_dual_hull(cube_planes(), CENTER)
    assert isinstance(dh, DualHull)
    assert dh.redundant == []
    assert dh.mesh.n_alive_vertices == 6
    assert dh.mesh.n_alive_faces == 8
    dh.mesh.validate()
    # Vertex ids index the input halfspace list and carry its dual point.
    expected = dual_points(cube_planes(), CENTER)
    for i in dh.mesh.alive_vertex_ids():
        assert np.allclose(dh.mesh.positions[i], expected[i])


def test_build_dual_hull_flags_redundant_plane():
    planes = cube_planes() + [Halfspace([1.0, 0.0, 0.0], -50.0)]  # x <= 50
    dh = build_dual_hull(planes, CENTER)
    assert dh.redundant == [6]
    assert dh.mesh.n_alive_vertices == 6
    assert 6 not in dh.mesh.alive_vertex_ids()


def test_build_dual_hull_merges_duplicate_planes():
    planes = cube_planes()
    planes.append(Halfspace([2.0, 0.0, 0.0], -2.0))  # same plane as x <= 1
    dh = build_dual_hull(planes, CENTER)
    assert dh.redundant == [6]
    assert dh.mesh.n_alive_vertices == 6


# -- primal extraction -------------------------------------------------------


def test_extract_primal_recovers_cube():
    dh = build_dual_hull(cube_planes(), CENTER)
    mesh = extract_primal(dh.mesh, CENTER)
    assert mesh.volume() == pytest.approx(1.0, abs=1e-12)
    assert mesh.area() == pytest.approx(6.0, abs=1e-12)
    assert sorted(len(f) for f in mesh.faces) == [4] * 6
    assert sorted(mesh.face_sources) == list(range(6))
    got = {tuple(np.round(v, 9)) for v in mesh.vertices}
    want = {(float(x), float(y), float(z)) for x in (0, 1) for y in (0, 1) for z in (0, 1)}
    assert got == want


def test_extract_primal_outward_winding():
    dh = build_dual_hull(cube_planes(), CENTER)
    mesh = extract_primal(dh.mesh, CENTER)
    verts = np.asarray(mesh.vertices)
    interior = verts.mean(axis=0)
    for face, source in zip(mesh.faces, mesh.face_sources):
        poly = verts[face]
        area_vec = np.zeros(3)
        for i in range(len(poly)):
            area_vec += np.cross(poly[i], poly[(i + 1) % len(poly)])
        # Outward: the area vector points with the source plane's normal,
        # away from the interior.
        n = cube_planes()[source].n
        assert np.dot(area_vec, n) > 0
        assert np.dot(area_vec, poly.mean(axis=0) - interior) > 0


def test_extract_primal_merges_shared_corners():
    # A cube with a sliver-chamfered corner whose cut plane sits within the
    # merge tolerance of the corner: extraction must weld the cluster back
    # to a single vertex and still emit six quads.
    eps = 1e-12
    planes = cube_planes() + [
        Halfspace(np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0), -(3.0 - eps) / np.sqrt(3.0))
    ]
    dh = build_dual_hull(planes, CENTER)
    mesh = extract_primal(dh.mesh, CENTER)
    assert len(mesh.vertices) == 8
    assert mesh.volume() == pytest.approx(1.0, rel=1e-9)


def test_roundtrip_off_center():
    # Any strictly interior dualization point must reproduce the region.
    rng = np.random.default_rng(8)
    for _ in range(5):
        center = rng.random(3) * 0.8 + 0.1
        dh = build_dual_hull(cube_planes(), center)
        mesh = extract_primal(dh.mesh, center)
        assert mesh.volume() == pytest.approx(1.0, rel=1e-9)
        got = {tuple(np.round(v, 6)) for v in mesh.vertices}
        assert len(got) == 8
