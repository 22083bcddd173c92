"""Geometric primitives: points, halfspaces, and robust predicates.

The one predicate that must never lie is ``orient3``: every convexity
decision in the package (triangle orientation, one-ring retriangulation,
unbounded-removal detection) reduces to it.  It is implemented as a fast
floating-point evaluation guarded by a static forward error bound; when the
bound cannot certify the sign, the determinant is recomputed in exact
rational arithmetic.  Every Python float is a dyadic rational, so the
fallback is exact for all representable inputs.

Volume bookkeeping follows the divergence theorem: a closed, consistently
oriented polygonal surface encloses ``sum(signed_volume_contribution(face))``
where each face contributes one fan of origin-apex tetrahedra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction

import numpy as np

__all__ = [
    "Sign",
    "Halfspace",
    "orient3",
    "orient3_filtered",
    "signed_volume_contribution",
    "enclosed_volume",
    "polygon_area_vector",
    "as_points",
    "bbox_diagonal",
    "halfspace_arrays",
]

# Machine epsilon for IEEE-754 double rounding (2^-53) and the static filter
# constant for the 3x3 orientation determinant computed from coordinate
# differences.  If |det| exceeds _ORIENT3_FILTER times the permanent of the
# same products, the floating-point sign is certain.
_EPS = 2.0 ** -53
_ORIENT3_FILTER = (7.0 + 56.0 * _EPS) * _EPS


class Sign(IntEnum):
    """Sign of an exact geometric quantity."""

    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def _orient3_exact(a, b, c, d) -> Sign:
    """Exact sign of det[b-a, c-a, d-a] via rational arithmetic."""
    ax, ay, az = Fraction(float(a[0])), Fraction(float(a[1])), Fraction(float(a[2]))
    bx, by, bz = Fraction(float(b[0])), Fraction(float(b[1])), Fraction(float(b[2]))
    cx, cy, cz = Fraction(float(c[0])), Fraction(float(c[1])), Fraction(float(c[2]))
    dx, dy, dz = Fraction(float(d[0])), Fraction(float(d[1])), Fraction(float(d[2]))
    bax, bay, baz = bx - ax, by - ay, bz - az
    cax, cay, caz = cx - ax, cy - ay, cz - az
    dax, day, daz = dx - ax, dy - ay, dz - az
    det = (
        bax * (cay * daz - caz * day)
        - bay * (cax * daz - caz * dax)
        + baz * (cax * day - cay * dax)
    )
    if det > 0:
        return Sign.POSITIVE
    if det < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


def orient3_filtered(a, b, c, d) -> Sign | None:
    """Float-filtered orientation of ``d`` against plane ``(a, b, c)``.

    Returns the certified sign of ``det[b-a, c-a, d-a]`` when the static
    forward error bound can vouch for it, and None when the determinant is
    too close to zero to call in floating point.  Callers that only need a
    heuristic decision may map None to a default; callers that need the
    truth must fall through to ``orient3``.
    """
    adx = float(a[0]) - float(d[0])
    ady = float(a[1]) - float(d[1])
    adz = float(a[2]) - float(d[2])
    bdx = float(b[0]) - float(d[0])
    bdy = float(b[1]) - float(d[1])
    bdz = float(b[2]) - float(d[2])
    cdx = float(c[0]) - float(d[0])
    cdy = float(c[1]) - float(d[1])
    cdz = float(c[2]) - float(d[2])

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady

    # Row-swapped expansion so the sign matches det[b-a, c-a, d-a] exactly.
    det = -(adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady))
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
        + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
        + (abs(adxbdy) + abs(bdxady)) * abs(cdz)
    )
    errbound = _ORIENT3_FILTER * permanent
    if det > errbound:
        return Sign.POSITIVE
    if -det > errbound:
        return Sign.NEGATIVE
    return None


def orient3(a, b, c, d) -> Sign:
    """Orientation of point ``d`` relative to the plane through ``a, b, c``.

    Returns the exact sign of ``det[b-a, c-a, d-a]``.  With ``(a, b, c)``
    counterclockwise as seen from the side its right-hand normal points to,
    POSITIVE means ``d`` lies strictly on that (outer) side, NEGATIVE
    strictly on the other side, ZERO exactly on the plane.

    All coordinates must be finite.  The sign is exact for every
    representable input: a floating-point filter handles the common case and
    rational arithmetic decides the near-degenerate ones.
    """
    sign = orient3_filtered(a, b, c, d)
    if sign is not None:
        return sign
    return _orient3_exact(a, b, c, d)


def as_points(points) -> np.ndarray:
    """Validate and return points as a float64 array of shape (n, 3).

    Raises ValueError for wrong shape or non-finite coordinates.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.shape == (3,):
        arr = arr.reshape(1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected (n, 3) points, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("points contain non-finite coordinates")
    return arr


def bbox_diagonal(points) -> float:
    """Length of the axis-aligned bounding-box diagonal of the point set."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    span = arr.max(axis=0) - arr.min(axis=0)
    return float(np.linalg.norm(span))


@dataclass
class Halfspace:
    """A closed halfspace ``{x : n . x + b <= 0}``.

    The normal ``n`` points out of the feasible side and need not be unit
    length; ``b`` is the offset.  Scaling ``(n, b)`` by a positive constant
    describes the same halfspace.
    """

    n: np.ndarray
    b: float

    def __post_init__(self):
        self.n = np.asarray(self.n, dtype=np.float64).reshape(3)
        self.b = float(self.b)
        if not (np.isfinite(self.n).all() and math.isfinite(self.b)):
            raise ValueError("halfspace coefficients must be finite")
        if not self.n.any():
            raise ValueError("halfspace normal must be nonzero")

    def evaluate(self, points) -> np.ndarray:
        """Signed values ``n . x + b`` (negative inside) for each point."""
        arr = np.asarray(points, dtype=np.float64)
        return arr @ self.n + self.b

    def contains(self, points, tol: float = 0.0) -> bool:
        """True if every point satisfies ``n . x + b <= tol``."""
        vals = self.evaluate(points)
        return bool(np.all(vals <= tol))

    def normalized(self) -> "Halfspace":
        """Equivalent halfspace with a unit normal."""
        scale = float(np.linalg.norm(self.n))
        return Halfspace(self.n / scale, self.b / scale)


def halfspace_arrays(halfspaces) -> tuple[np.ndarray, np.ndarray]:
    """Stack halfspaces into an (m, 3) normal matrix and (m,) offset vector."""
    hs = list(halfspaces)
    if not hs:
        return np.zeros((0, 3)), np.zeros(0)
    N = np.array([h.n for h in hs], dtype=np.float64)
    b = np.array([h.b for h in hs], dtype=np.float64)
    return N, b


def _det3(p, q, r) -> float:
    return (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )


def signed_volume_contribution(face_vertices) -> float:
    """Divergence-theorem volume contribution of one oriented polygon face.

    Equals ``(1/3) * (area normal . centroid)`` for a planar polygon; the
    value is defined for any vertex cycle via the fan decomposition from the
    first vertex (each fan triangle contributes an origin-apex tetrahedron).
    Summed over a closed, consistently outward-oriented surface this yields
    the enclosed volume.
    """
    verts = [(float(v[0]), float(v[1]), float(v[2])) for v in face_vertices]
    if len(verts) < 3:
        raise ValueError("a polygon face needs at least 3 vertices")
    q0 = verts[0]
    total = 0.0
    for i in range(1, len(verts) - 1):
        total += _det3(q0, verts[i], verts[i + 1])
    return total / 6.0


def enclosed_volume(vertices, faces) -> float:
    """Volume enclosed by a closed outward-oriented polygonal surface.

    ``vertices`` is (n, 3) array-like; ``faces`` is an iterable of vertex
    index cycles.
    """
    arr = np.asarray(vertices, dtype=np.float64)
    total = 0.0
    for face in faces:
        total += signed_volume_contribution(arr[list(face)])
    return total


def polygon_area_vector(face_vertices) -> np.ndarray:
    """Area-weighted normal of an oriented polygon (fan decomposition).

    The magnitude is the polygon area for planar input; the direction
    follows the right-hand rule around the vertex cycle.
    """
    verts = np.asarray(face_vertices, dtype=np.float64)
    if len(verts) < 3:
        raise ValueError("a polygon face needs at least 3 vertices")
    rel = verts[1:] - verts[0]
    cross = np.cross(rel[:-1], rel[1:])
    return 0.5 * cross.sum(axis=0)
