"""Reference bounding volumes and tightness measurement.

``kdop_fit`` builds the classic 18-direction discrete-orientation polytope
(axis planes plus edge-diagonal planes) around a point set; it is the
fixed-direction baseline a direction-adaptive simplification should beat
or match at the same plane budget.  ``tightness`` audits any claimed
outer or inner approximation against the exact hull of the input points:
it verifies containment (raising NonContainment on violation) and reports
volume ratio, area ratio, and the exact Hausdorff distance between the
two nested convex boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Halfspace, as_points, halfspace_arrays
from .hull import PolyhedronMesh, RegionStatus, TriangulatedHull, convex_hull, halfspace_intersection

__all__ = [
    "NonContainment",
    "TightnessReport",
    "canonical_directions_18",
    "kdop_fit",
    "tightness",
]


class NonContainment(ValueError):
    """A claimed nesting between two solids does not hold."""


@dataclass(frozen=True)
class TightnessReport:
    """How tightly a candidate solid wraps (or fills) the input hull.

    Ratios are candidate over input, so an outer approximation reports
    values >= 1 and an inner one <= 1.  ``hausdorff_distance`` is the
    exact Hausdorff distance between the two boundaries, and
    ``max_plane_violation`` is the worst signed slack seen during the
    containment check (<= 0 means strictly contained).
    """

    n_planes: int
    volume_ratio: float
    area_ratio: float
    hausdorff_distance: float
    max_plane_violation: float


def canonical_directions_18() -> np.ndarray:
    """The 18 unit directions of the axis+edge-diagonal orientation set.

    Six axis directions followed by the twelve normalized two-axis
    diagonals, in a fixed deterministic order.
    """
    axes = [
        (1.0, 0.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, -1.0, 0.0),
        (0.0, 0.0, 1.0),
        (0.0, 0.0, -1.0),
    ]
    diagonals = []
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            diagonals.append((sa, sb, 0.0))
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            diagonals.append((sa, 0.0, sb))
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            diagonals.append((0.0, sa, sb))
    dirs = np.array(axes + diagonals, dtype=np.float64)
    dirs[6:] /= np.sqrt(2.0)
    return dirs


def kdop_fit(points, k: int = 18) -> list[Halfspace]:
    """Tightest fixed-direction bounding polytope of a point set.

    For each canonical direction ``d`` the plane is pushed to the farthest
    point: ``{x : d . x <= max_i d . p_i}``.  Only the 18-direction set is
    built in.  The result always contains the points by construction.
    """
    if k != 18:
        raise ValueError("only the 18-direction orientation set is supported")
    pts = as_points(points)
    dirs = canonical_directions_18()
    supports = (pts @ dirs.T).max(axis=0)
    return [Halfspace(d, -float(h)) for d, h in zip(dirs, supports)]


def _closest_on_triangles(p: np.ndarray, a, b, c) -> float:
    """Exact minimum distance from one point to a batch of triangles."""
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    closest = np.empty_like(a)
    # Face region by default (guard the degenerate-triangle denominator).
    denom = va + vb + vc
    safe = np.where(denom != 0.0, denom, 1.0)
    v = vb / safe
    w = vc / safe
    closest[:] = a + ab * v[:, None] + ac * w[:, None]

    def assign(mask, value):
        closest[mask] = value[mask] if value.ndim == 2 else value

    # Edge BC.
    t = (d4 - d3) / np.where((d4 - d3) + (d5 - d6) != 0.0, (d4 - d3) + (d5 - d6), 1.0)
    m = (va <= 0.0) & (d4 - d3 >= 0.0) & (d5 - d6 >= 0.0)
    assign(m, b + (c - b) * np.clip(t, 0.0, 1.0)[:, None])
    # Edge AC.
    t = d2 / np.where(d2 - d6 != 0.0, d2 - d6, 1.0)
    m = (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0)
    assign(m, a + ac * np.clip(t, 0.0, 1.0)[:, None])
    # Edge AB.
    t = d1 / np.where(d1 - d3 != 0.0, d1 - d3, 1.0)
    m = (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0)
    assign(m, a + ab * np.clip(t, 0.0, 1.0)[:, None])
    # Vertex regions last: they dominate the edge conditions.
    m = (d6 >= 0.0) & (d5 <= d6)
    assign(m, c)
    m = (d3 >= 0.0) & (d4 <= d3)
    assign(m, b)
    m = (d1 <= 0.0) & (d2 <= 0.0)
    assign(m, a)

    return float(np.sqrt(((closest - p) ** 2).sum(axis=1).min()))


def _surface_distance(points: np.ndarray, vertices: np.ndarray, triangles) -> np.ndarray:
    """Exact distance from each query point to a triangulated surface."""
    tri = np.asarray(triangles, dtype=np.intp)
    a = vertices[tri[:, 0]]
    b = vertices[tri[:, 1]]
    c = vertices[tri[:, 2]]
    return np.array([_closest_on_triangles(p, a, b, c) for p in points])


def tightness(points, halfspaces, mode: str = "outer", tol_rel: float = 1e-9) -> TightnessReport:
    """Audit a halfspace solid as an outer or inner approximation of a hull.

    ``points`` define the reference hull; ``halfspaces`` describe the
    candidate.  In outer mode every input point must satisfy every plane
    (to a relative slack ``tol_rel`` of the hull diagonal) and the
    Hausdorff distance is attained at a candidate vertex; in inner mode
    every candidate vertex must lie inside the reference hull and the
    distance is attained at a hull vertex.  Raises NonContainment when
    the nesting fails, and ValueError when the candidate region is empty
    or unbounded.
    """
    if mode not in ("outer", "inner"):
        raise ValueError("mode must be 'outer' or 'inner'")
    pts = as_points(points)
    hull = convex_hull(pts)
    candidate = halfspace_intersection(halfspaces)
    if isinstance(candidate, RegionStatus):
        raise ValueError(f"candidate region is {candidate.value}; nothing to compare")
    tol = tol_rel * hull.diagonal

    if mode == "outer":
        normals, offsets = halfspace_arrays(halfspaces)
        lengths = np.linalg.norm(normals, axis=1)
        slack = (hull.vertices @ normals.T + offsets) / lengths
        worst = float(slack.max())
        if worst > tol:
            raise NonContainment(
                f"an input hull vertex sticks out of the candidate by {worst:.3e} "
                f"(allowed {tol:.3e})"
            )
        hausdorff = float(
            _surface_distance(candidate.vertices, hull.vertices, hull.triangles).max()
        )
    else:
        a = hull.vertices[hull.triangles[:, 0]]
        fn = np.cross(
            hull.vertices[hull.triangles[:, 1]] - a,
            hull.vertices[hull.triangles[:, 2]] - a,
        )
        ln = np.linalg.norm(fn, axis=1)
        keep = ln > 0.0
        dist = (candidate.vertices @ fn[keep].T - np.einsum("ij,ij->i", fn[keep], a[keep])) / ln[keep]
        worst = float(dist.max())
        if worst > tol:
            raise NonContainment(
                f"a candidate vertex sticks out of the input hull by {worst:.3e} "
                f"(allowed {tol:.3e})"
            )
        hausdorff = float(
            _surface_distance(
                hull.vertices, candidate.vertices, candidate.triangulated()
            ).max()
        )

    return TightnessReport(
        n_planes=len(list(halfspaces)),
        volume_ratio=candidate.volume() / hull.volume(),
        area_ratio=candidate.area() / hull.area(),
        hausdorff_distance=hausdorff,
        max_plane_violation=worst,
    )
