"""Polar duality between halfspace sets and point hulls.

Given an interior point ``c`` of the region ``{x : n_i.x + b_i <= 0}``,
each halfspace maps to the dual point ``phi_i = -n_i / (n_i.c + b_i)``
(the denominator is negative, so ``phi_i`` points outward along ``n_i``).
The convex hull of the dual points encodes the region shifted by ``-c``:
hull facets correspond to region vertices, hull vertices to region facets,
and halfspaces whose dual point falls strictly inside the dual hull are
redundant.  A dual facet with plane ``eta . y = beta`` (``beta > 0``) maps
back to the region vertex ``c + eta / beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Halfspace, halfspace_arrays
from .halfedge import HalfedgeHull
from .hull import PolyhedronMesh, _cluster_near_points, convex_hull

__all__ = [
    "CenterOnBoundary",
    "NearInfinitePrimalVertex",
    "DualFacePlane",
    "DualHull",
    "to_dual",
    "from_dual",
    "dual_points",
    "build_dual_hull",
    "extract_primal",
]

# A halfspace whose boundary passes this close to the chosen center (relative
# to plane scale) has no well-defined dual point.
_BOUNDARY_REL = 1e-12

# A dual face plane passing this close to the dual origin (relative to the
# dual point scale) maps to a primal vertex too far away to represent.
_NEAR_INFINITE_REL = 1e-12

# Dual faces whose primal vertices coincide to this relative tolerance are
# merged into a single polyhedron vertex (coplanar-facet merging).
_VERTEX_MERGE_REL = 1e-9


class CenterOnBoundary(ValueError):
    """The chosen interior point lies on (or outside) a halfspace boundary."""


class NearInfinitePrimalVertex(ValueError):
    """A dual face plane passes through the origin: its primal vertex diverges."""


@dataclass(frozen=True)
class DualFacePlane:
    """Plane ``eta . y = beta`` spanned by a dual-hull facet (``beta > 0``)."""

    eta: np.ndarray
    beta: float


@dataclass
class DualHull:
    """Convex hull of the dual points of a halfspace set.

    ``mesh`` vertex ids are indices into the originating halfspace list;
    ids absent from the mesh are collected in ``redundant`` (their planes
    do not support the region).  ``center`` is the interior point used for
    dualization.
    """

    mesh: HalfedgeHull
    redundant: list[int] = field(default_factory=list)
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))


def to_dual(halfspace: Halfspace, center) -> np.ndarray:
    """Dual point of one halfspace about ``center``.

    Raises CenterOnBoundary unless ``center`` is strictly inside.
    """
    center = np.asarray(center, dtype=np.float64)
    value = float(halfspace.n @ center + halfspace.b)
    scale = float(np.linalg.norm(halfspace.n)) * (1.0 + float(np.linalg.norm(center)))
    if value >= -_BOUNDARY_REL * scale:
        raise CenterOnBoundary(
            f"center {center.tolist()} is not strictly inside "
            f"(plane value {value:.3e})"
        )
    return -halfspace.n / value


def dual_points(halfspaces: list[Halfspace], center) -> np.ndarray:
    """Dual points of all halfspaces about ``center`` (vectorized)."""
    center = np.asarray(center, dtype=np.float64)
    normals, offsets = halfspace_arrays(halfspaces)
    values = normals @ center + offsets
    scales = np.linalg.norm(normals, axis=1) * (1.0 + float(np.linalg.norm(center)))
    bad = values >= -_BOUNDARY_REL * scales
    if np.any(bad):
        i = int(np.argmax(bad))
        raise CenterOnBoundary(
            f"center is not strictly inside halfspace {i} "
            f"(plane value {values[i]:.3e})"
        )
    return -normals / values[:, None]


def from_dual(plane: DualFacePlane, center) -> np.ndarray:
    """Primal vertex of a dual facet plane: ``center + eta / beta``.

    Raises NearInfinitePrimalVertex when the plane passes through the dual
    origin (the corresponding region vertex is at infinity).
    """
    center = np.asarray(center, dtype=np.float64)
    eta = np.asarray(plane.eta, dtype=np.float64)
    beta = float(plane.beta)
    if beta <= _NEAR_INFINITE_REL * float(np.linalg.norm(eta)):
        raise NearInfinitePrimalVertex(
            f"dual face plane offset {beta:.3e} is too close to the origin"
        )
    return center + eta / beta


def face_plane(mesh: HalfedgeHull, face: int) -> DualFacePlane:
    """Supporting plane of one alive mesh face, normalized to ``beta >= 0``."""
    h0 = mesh.f_he[face]
    h1 = mesh.he_next[h0]
    h2 = mesh.he_next[h1]
    a = mesh.positions[mesh.he_origin[h0]]
    b = mesh.positions[mesh.he_origin[h1]]
    c = mesh.positions[mesh.he_origin[h2]]
    eta = np.cross(b - a, c - a)
    beta = float(eta @ a)
    if beta < 0.0:
        eta = -eta
        beta = -beta
    return DualFacePlane(eta=eta, beta=beta)


def build_dual_hull(halfspaces: list[Halfspace], center) -> DualHull:
    """Dualize a halfspace set and hull the dual points.

    Near-coincident dual points (same plane listed twice, or planes closer
    than the dual resolution) are merged before hulling; only the
    lowest-indexed member of each merged group can appear in the mesh.
    Mesh vertex ids are halfspace indices; every id that ends up interior
    to (or merged into) the dual hull is reported in ``redundant``.

    Raises CenterOnBoundary for a bad center and DegenerateInput (from the
    hull step) when the dual points are affinely degenerate, which happens
    exactly when the region is unbounded or empty of volume.
    """
    center = np.asarray(center, dtype=np.float64)
    phi = dual_points(halfspaces, center)
    n = len(phi)
    scale = float(np.max(np.linalg.norm(phi, axis=1))) if n else 0.0
    clusters = _cluster_near_points(phi, 1e-14 * scale)
    reps = sorted(min(cluster) for cluster in clusters)
    hull = convex_hull(phi[reps])
    extreme = {reps[i] for i in hull.point_indices}
    triangles = [
        (reps[ia], reps[ib], reps[ic])
        for ia, ib, ic in hull.point_indices[hull.triangles]
    ]
    mesh = HalfedgeHull.from_triangles(phi, [tuple(map(int, t)) for t in triangles])
    redundant = [i for i in range(n) if i not in extreme]
    return DualHull(mesh=mesh, redundant=redundant, center=center)


def extract_primal(mesh: HalfedgeHull, center) -> PolyhedronMesh:
    """Read the region polyhedron back out of a dual hull mesh.

    Each alive dual face becomes a region vertex; dual faces whose region
    vertices coincide (coplanar-facet configurations such as a box corner
    triangulated into slivers) are merged, with positions averaged weighted
    by dual face area.  Each alive dual mesh vertex ``i`` becomes one
    polygonal facet sourced from halfspace ``i``, traversed so the facet is
    counterclockwise seen from outside the region.
    """
    center = np.asarray(center, dtype=np.float64)
    alive_faces = [f for f, ok in enumerate(mesh.f_alive) if ok]
    points = np.zeros((len(alive_faces), 3))
    weights = np.zeros(len(alive_faces))
    face_slot = {}
    for slot, f in enumerate(alive_faces):
        plane = face_plane(mesh, f)
        points[slot] = from_dual(plane, center)
        weights[slot] = 0.5 * float(np.linalg.norm(plane.eta))
        face_slot[f] = slot

    diag = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    clusters = _cluster_near_points(points, _VERTEX_MERGE_REL * diag)
    clusters = sorted(clusters, key=min)
    slot_vertex = {}
    vertices = np.zeros((len(clusters), 3))
    for vid, cluster in enumerate(clusters):
        idx = sorted(cluster)
        w = weights[idx]
        total = float(w.sum())
        if total > 0.0:
            vertices[vid] = (points[idx] * w[:, None]).sum(axis=0) / total
        else:
            vertices[vid] = points[idx].mean(axis=0)
        for slot in idx:
            slot_vertex[slot] = vid

    faces: list[list[int]] = []
    face_sources: list[int] = []
    for i in mesh.alive_vertex_ids():
        ring_faces = mesh.one_ring(i).faces
        # Ring-face order around the dual vertex maps to the facet polygon
        # counterclockwise as seen from outside the region.
        polygon = [slot_vertex[face_slot[f]] for f in ring_faces]
        deduped: list[int] = []
        for vid in polygon:
            if not deduped or vid != deduped[-1]:
                deduped.append(vid)
        if len(deduped) > 1 and deduped[0] == deduped[-1]:
            deduped.pop()
        if len(deduped) >= 3:
            faces.append(deduped)
            face_sources.append(i)
    return PolyhedronMesh(vertices=vertices, faces=faces, face_sources=face_sources)
