"""Convex hulls, face-plane extraction, and halfspace intersection.

``convex_hull`` wraps Qhull for the heavy combinatorial lifting and then
re-orients its triangulation into a consistently outward-oriented closed
surface (breadth-first propagation across shared edges, global sign fixed
by the enclosed volume).  ``face_planes`` turns hull triangles into
halfspaces, filtering slivers and near-duplicate planes.
``halfspace_intersection`` goes the other way - from planes back to a
polytope - by dualizing about the Chebyshev center; it is the global
reference oracle against which incremental simplification costs are
checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial import ConvexHull as _SciPyHull
from scipy.spatial import QhullError

from .geometry import Halfspace, Sign, as_points, bbox_diagonal, orient3, polygon_area_vector, signed_volume_contribution
from .lp import ChebyshevResult, LpStatus, chebyshev_center

__all__ = [
    "DegenerateInput",
    "RegionStatus",
    "TriangulatedHull",
    "FacePlaneSet",
    "PolyhedronMesh",
    "convex_hull",
    "face_planes",
    "halfspace_intersection",
]

# A face whose area is below this fraction of diagonal^2 is treated as a
# degenerate sliver and never becomes a halfspace.
AREA_FILTER_REL = 1e-8
# Two face planes whose dual points are closer than this fraction of the
# dual point cloud's radius are considered the same plane.
DUAL_DISTANCE_REL = 1e-14
# Chebyshev radius below this fraction of the input scale means the
# intersection is flat (no interior): classified EMPTY.
FLAT_RADIUS_REL = 1e-12


class DegenerateInput(ValueError):
    """Input is dimensionally deficient (too few or affinely dependent points)."""


class RegionStatus(Enum):
    EMPTY = "empty"
    UNBOUNDED = "unbounded"


@dataclass
class TriangulatedHull:
    """A closed, consistently outward-oriented triangulated convex surface.

    ``vertices`` are the extreme points (a subset of the input,
    ``point_indices`` maps each row back to the input point array) and
    ``triangles`` index into ``vertices`` counterclockwise as seen from
    outside.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    point_indices: np.ndarray

    @property
    def diagonal(self) -> float:
        return bbox_diagonal(self.vertices)

    def volume(self) -> float:
        total = 0.0
        v = self.vertices
        for a, b, c in self.triangles:
            total += signed_volume_contribution((v[a], v[b], v[c]))
        return total

    def area(self) -> float:
        v = self.vertices
        rel_b = v[self.triangles[:, 1]] - v[self.triangles[:, 0]]
        rel_c = v[self.triangles[:, 2]] - v[self.triangles[:, 0]]
        return float(0.5 * np.linalg.norm(np.cross(rel_b, rel_c), axis=1).sum())

    def contains(self, points, tol: float) -> bool:
        """True if every query point is inside or on the hull within ``tol``.

        ``tol`` is an absolute distance (callers typically pass a fraction
        of the bbox diagonal).
        """
        pts = as_points(points)
        v = self.vertices
        a = v[self.triangles[:, 0]]
        normals = np.cross(v[self.triangles[:, 1]] - a, v[self.triangles[:, 2]] - a)
        lengths = np.linalg.norm(normals, axis=1)
        keep = lengths > 0
        normals, a, lengths = normals[keep], a[keep], lengths[keep]
        offsets = -np.einsum("ij,ij->i", normals, a)
        dist = (pts @ normals.T + offsets) / lengths
        return bool(np.all(dist <= tol))


def _oriented_triangles(points: np.ndarray, simplices: np.ndarray, neighbors: np.ndarray):
    """Reorient Qhull simplices into one consistent closed surface.

    Walk the facet adjacency graph flipping triangles so every shared edge
    is traversed once in each direction, then flip the whole surface if its
    enclosed volume comes out negative.  This never consults per-triangle
    geometry, so degenerate slivers cannot break consistency.
    """
    tris = [list(s) for s in simplices]
    n = len(tris)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        i = stack.pop()
        edges = {(tris[i][k], tris[i][(k + 1) % 3]) for k in range(3)}
        for j in neighbors[i]:
            if j < 0 or seen[j]:
                continue
            tj = tris[j]
            same_direction = any(
                (tj[k], tj[(k + 1) % 3]) in edges for k in range(3)
            )
            if same_direction:
                tj[1], tj[2] = tj[2], tj[1]
            seen[j] = True
            stack.append(j)
    if not all(seen):
        raise DegenerateInput("hull facet adjacency graph is not connected")

    tri_arr = np.array(tris, dtype=np.intp)
    a = points[tri_arr[:, 0]]
    b = points[tri_arr[:, 1]]
    c = points[tri_arr[:, 2]]
    volume6 = float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum())
    if volume6 < 0.0:
        tri_arr[:, [1, 2]] = tri_arr[:, [2, 1]]
    return tri_arr


def convex_hull(points) -> TriangulatedHull:
    """Convex hull of at least four affinely independent points.

    Raises DegenerateInput when the points do not span 3D.
    """
    pts = as_points(points)
    if len(pts) < 4:
        raise DegenerateInput(f"need at least 4 points, got {len(pts)}")
    try:
        qh = _SciPyHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"points are affinely dependent: {exc}") from exc

    vertex_ids = np.asarray(qh.vertices, dtype=np.intp)
    remap = np.full(len(pts), -1, dtype=np.intp)
    remap[vertex_ids] = np.arange(len(vertex_ids))
    simplices = remap[qh.simplices]
    neighbors = qh.neighbors
    verts = pts[vertex_ids]
    triangles = _oriented_triangles(verts, simplices, neighbors)
    return TriangulatedHull(vertices=verts, triangles=triangles, point_indices=vertex_ids)


@dataclass
class FacePlaneSet:
    """Halfspaces of a hull's faces, filtered and deduplicated.

    ``provenance[i]`` lists the hull triangle indices the i-th halfspace
    derives from.  ``diagonal`` carries the source hull's bbox diagonal so
    downstream tolerances stay scale-relative.
    """

    halfspaces: list[Halfspace]
    provenance: list[list[int]]
    diagonal: float

    def __len__(self) -> int:
        return len(self.halfspaces)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        N = np.array([h.n for h in self.halfspaces], dtype=np.float64)
        b = np.array([h.b for h in self.halfspaces], dtype=np.float64)
        return N, b


def _cluster_near_points(points: np.ndarray, tol: float) -> list[list[int]]:
    """Group points closer than ``tol`` via a hash grid (union-find).

    With tolerances at duplicate-detection scale the grid degenerates to
    exact-match hashing plus a 27-cell neighborhood sweep.
    """
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    finite_grid = tol > 0.0
    if finite_grid:
        with np.errstate(over="ignore", invalid="ignore"):
            scaled = points / tol
        finite_grid = bool(np.isfinite(scaled).all())
    if not finite_grid:
        # Zero (or overflowing) tolerance: only exact duplicates merge.
        groups: dict[tuple[float, float, float], list[int]] = {}
        for i, p in enumerate(map(tuple, points)):
            groups.setdefault(p, []).append(i)
        return list(groups.values())
    cells: dict[tuple[int, int, int], list[int]] = {}
    keys = np.floor(scaled).astype(np.int64)
    for i, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(i)
    tol2 = tol * tol
    for i, key in enumerate(map(tuple, keys)):
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    bucket = cells.get((key[0] + dx, key[1] + dy, key[2] + dz))
                    if not bucket:
                        continue
                    for j in bucket:
                        if j > i and np.sum((points[i] - points[j]) ** 2) <= tol2:
                            union(i, j)
    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    return list(clusters.values())


def face_planes(hull: TriangulatedHull, merge_coplanar: bool = True) -> FacePlaneSet:
    """Bounding halfspaces of a hull's triangles.

    Sliver faces (area below 1e-8 * diagonal^2) are dropped; coplanar or
    near-identical planes collapse to one halfspace, detected by proximity
    of their dual points about the hull's vertex centroid.  With
    ``merge_coplanar`` the surviving plane is the area-weighted average of
    its cluster, otherwise the largest member represents the cluster; the
    cluster's triangles are recorded as provenance either way.
    """
    v = hull.vertices
    tris = hull.triangles
    a = v[tris[:, 0]]
    etas = np.cross(v[tris[:, 1]] - a, v[tris[:, 2]] - a)
    betas = -np.einsum("ij,ij->i", etas, a)
    areas = 0.5 * np.linalg.norm(etas, axis=1)
    diag = hull.diagonal
    keep = areas >= AREA_FILTER_REL * diag * diag
    face_ids = np.nonzero(keep)[0]
    if len(face_ids) == 0:
        raise DegenerateInput("all hull faces are degenerate slivers")

    centroid = v.mean(axis=0)
    denom = etas[face_ids] @ centroid + betas[face_ids]
    # The centroid is strictly interior, so denominators are negative for
    # every honest face; a non-negative one is numerically broken.
    usable = denom < 0.0
    face_ids = face_ids[usable]
    denom = denom[usable]
    duals = -etas[face_ids] / denom[:, None]

    scale = float(np.max(np.linalg.norm(duals, axis=1), initial=0.0))
    clusters = _cluster_near_points(duals, DUAL_DISTANCE_REL * scale)
    clusters.sort(key=lambda members: int(face_ids[members[0]]))

    halfspaces: list[Halfspace] = []
    provenance: list[list[int]] = []
    for members in clusters:
        ids = [int(face_ids[m]) for m in members]
        if merge_coplanar and len(ids) > 1:
            w = areas[ids]
            unit_n = etas[ids] / (2.0 * w[:, None])
            unit_b = betas[ids] / (2.0 * w)
            n_avg = (unit_n * w[:, None]).sum(axis=0) / w.sum()
            b_avg = float((unit_b * w).sum() / w.sum())
            halfspaces.append(Halfspace(n=n_avg, b=b_avg))
        else:
            rep = ids[int(np.argmax(areas[ids]))]
            halfspaces.append(Halfspace(n=etas[rep], b=float(betas[rep])))
        provenance.append(sorted(ids))
    return FacePlaneSet(halfspaces=halfspaces, provenance=provenance, diagonal=diag)


@dataclass
class PolyhedronMesh:
    """A closed polytope boundary with polygonal faces, outward oriented.

    ``face_sources[i]`` optionally names the input halfspace that face i
    lies on.
    """

    vertices: np.ndarray
    faces: list[list[int]]
    face_sources: list[int] | None = None

    def volume(self) -> float:
        return float(
            sum(signed_volume_contribution(self.vertices[f]) for f in self.faces)
        )

    def area(self) -> float:
        return float(
            sum(np.linalg.norm(polygon_area_vector(self.vertices[f])) for f in self.faces)
        )

    def triangulated(self) -> np.ndarray:
        """Fan-triangulate the polygon faces; returns an (m, 3) index array."""
        tris = []
        for f in self.faces:
            for i in range(1, len(f) - 1):
                tris.append((f[0], f[i], f[i + 1]))
        return np.array(tris, dtype=np.intp)


def halfspace_intersection(halfspaces):
    """Intersect halfspaces into a polytope mesh, or classify the region.

    Returns a PolyhedronMesh whose ``face_sources`` index the input list,
    RegionStatus.EMPTY for empty or flat regions, or
    RegionStatus.UNBOUNDED when the region does not have finite volume.
    """
    from .dual import build_dual_hull, extract_primal  # local: dual imports this module

    hs = list(halfspaces)
    if len(hs) == 0:
        return RegionStatus.UNBOUNDED
    cheb = chebyshev_center(hs)
    if cheb is LpStatus.INFEASIBLE:
        return RegionStatus.EMPTY
    if cheb is LpStatus.UNBOUNDED:
        return RegionStatus.UNBOUNDED
    scale = 1.0 + float(
        np.max([abs(h.b) / np.linalg.norm(h.n) for h in hs], initial=0.0)
    )
    if cheb.radius <= FLAT_RADIUS_REL * scale:
        return RegionStatus.EMPTY

    try:
        dual = build_dual_hull(hs, cheb.center)
    except DegenerateInput:
        # A flat dual hull means the normals do not span 3D: the region
        # contains a line and has no finite volume.
        return RegionStatus.UNBOUNDED

    # The region is bounded iff the origin is strictly inside the dual hull.
    origin = (0.0, 0.0, 0.0)
    pos = dual.mesh.positions
    for a, b, c in dual.mesh.triangle_list():
        if orient3(pos[a], pos[b], pos[c], origin) != Sign.NEGATIVE:
            return RegionStatus.UNBOUNDED

    return extract_primal(dual.mesh, cheb.center)
