"""Greedy simplification of a convex solid to a bounded plane budget.

The outer-approximation pipeline works in dual space.  The input hull's
face planes dualize (about the region's Chebyshev center) to points whose
convex hull mirrors the region: dual vertices are planes, dual faces are
region corners.  Eliminating one plane is a vertex removal on the dual
hull; the hole left behind is retriangulated convexly, and the volume (or
surface area) the region gains is computed from the local neighborhood
alone.  A lazy priority queue always eliminates the cheapest plane next,
so the simplified region is a nested outer bound of the input at every
step: dropping constraints can only grow an intersection.

The inner-approximation mode runs the same machinery directly on the
primal hull: vertices are decimated, the result is a vertex-subset hull
contained in the input, and the cost is the volume (or area) lost.

Cost model invariants:

* Eliminating a plane whose absence unbounds the region costs infinity.
  This test is exact: the region stays bounded iff the dual origin remains
  strictly inside every replacement face's plane, decided with exact sign
  arithmetic.
* A removal whose retriangulation would double an existing mesh edge (a
  degenerate, pillow-like configuration) is refused and the candidate is
  parked at infinite cost until its neighborhood changes.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    _ORIENT3_FILTER,
    Halfspace,
    Sign,
    as_points,
    enclosed_volume,
    orient3,
    orient3_filtered,
)
from .halfedge import (
    EdgeConflict,
    HalfedgeHull,
    LocalTriangulation,
)
from .hull import (
    DegenerateInput,
    FacePlaneSet,
    PolyhedronMesh,
    TriangulatedHull,
    convex_hull,
    face_planes,
)
from .dual import _NEAR_INFINITE_REL as _NEAR_ORIGIN_REL
from .dual import build_dual_hull, extract_primal
from .lp import ChebyshevResult, chebyshev_center

__all__ = [
    "SimplifyConfig",
    "RemovalRecord",
    "SimplifiedHull",
    "TargetUnreachable",
    "retriangulate_one_ring",
    "infinite_cost",
    "removal_cost",
    "simplify",
]

_COST_MODES = ("volume", "area")
_APPROX_MODES = ("outer", "inner")

# Ring size beyond which the hole is triangulated by hulling the ring
# directly instead of fan-plus-flips (the flip loop is quadratic).
_ENVELOPE_THRESHOLD = 100

# Any candidate whose computed cost exceeds this many cubed input diagonals
# is treated as infinite: the arithmetic has left the trustworthy range.
_COST_CAP_REL = 1e18

_ORIGIN = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SimplifyConfig:
    """Options for ``simplify``.

    ``target_faces`` is the plane budget in outer mode; in inner mode the
    result is a vertex-subset hull and the same number is the vertex
    budget.  ``constrained`` lists element ids that must survive: plane
    ids (indices into the merged face-plane set) in outer mode, hull
    vertex ids in inner mode.  ``cost_mode`` selects what the greedy step
    minimizes: added (outer) or lost (inner) volume, or surface area
    change.  ``exact_cost_check`` recomputes the global quantity after
    every elimination and stores the measured delta on each record (slow;
    for auditing).  ``debug`` collects counters about the run.
    ``rng_seed`` is reserved for randomized fallbacks; the current
    pipeline is fully deterministic and ignores it.
    """

    target_faces: int
    cost_mode: str = "volume"
    approx_mode: str = "outer"
    constrained: tuple[int, ...] = ()
    rng_seed: int | None = None
    exact_cost_check: bool = False
    debug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "target_faces", int(self.target_faces))
        if self.target_faces < 4:
            raise ValueError(
                "target_faces must be at least 4: no bounded solid has fewer"
            )
        if self.cost_mode not in _COST_MODES:
            raise ValueError(f"cost_mode must be one of {_COST_MODES}")
        if self.approx_mode not in _APPROX_MODES:
            raise ValueError(f"approx_mode must be one of {_APPROX_MODES}")
        object.__setattr__(
            self, "constrained", tuple(int(i) for i in self.constrained)
        )


@dataclass(frozen=True)
class RemovalRecord:
    """One greedy elimination: what was removed, at what predicted cost.

    ``remaining`` counts planes (outer) or vertices (inner) left after the
    step.  ``exact_cost`` holds the independently measured global delta
    when the run was configured with ``exact_cost_check``.
    """

    removed_id: int
    cost: float
    remaining: int
    exact_cost: float | None = None


@dataclass
class SimplifiedHull:
    """Result of a simplification run.

    ``halfspaces`` describe the output solid; ``kept_ids`` are the
    surviving element ids (plane ids in outer mode, hull vertex ids in
    inner mode).  ``mesh`` is the output boundary with polygonal faces.
    Ratios compare against the input hull: at least 1 for outer runs,
    at most 1 for inner runs.
    """

    halfspaces: list[Halfspace]
    kept_ids: list[int]
    mesh: PolyhedronMesh
    volume: float
    area: float
    input_volume: float
    input_area: float
    center: np.ndarray
    steps: list[RemovalRecord]
    warnings: list[str]
    config: SimplifyConfig
    plane_set: FacePlaneSet | None = None
    debug_info: dict | None = None

    @property
    def volume_ratio(self) -> float:
        return self.volume / self.input_volume

    @property
    def area_ratio(self) -> float:
        return self.area / self.input_area


class TargetUnreachable(RuntimeError):
    """The budget cannot be met; ``result`` holds the best reachable solid.

    Raised when every remaining candidate is constrained, blocked by a
    degenerate configuration, or would unbound the region.  ``reached`` is
    the element count the run stopped at.
    """

    def __init__(self, reached: int, result: SimplifiedHull):
        super().__init__(
            f"no further elimination is possible at {reached} elements: every "
            "remaining candidate is constrained, blocked, or would unbound "
            "the region"
        )
        self.reached = reached
        self.result = result


# -- local retriangulation ------------------------------------------------


def retriangulate_one_ring(
    positions, center, ring, *, envelope_threshold: int = _ENVELOPE_THRESHOLD
):
    """Convex triangulation of the hole left by removing ``center``.

    ``ring`` is the ordered one-ring of ``center``; the result triangulates
    the ring polygon in the surface's orientation, chosen so the patch is
    part of the convex hull of the surviving vertices.  Starts from a fan
    rooted at the lowest vertex id and flips edges whose adjacent triangle
    pair is reflex (exact sign tests), falling back to hulling the ring
    points directly.  Returns None when no valid convex patch exists.
    """
    ring = [int(r) for r in ring]
    k = len(ring)
    if k < 3 or len(set(ring)) != k:
        return None
    start = ring.index(min(ring))
    ring = ring[start:] + ring[:start]
    if k == 3:
        return LocalTriangulation([tuple(ring)])
    if k >= envelope_threshold:
        patch = _hull_envelope(positions, center, ring)
        if patch is not None:
            return patch
    tris = [(ring[0], ring[j], ring[j + 1]) for j in range(1, k - 1)]
    # Plain-float coordinate rows make the flip predicates cheap.
    coords = {v: positions[v].tolist() for v in ring}
    if _flip_to_convex(coords, tris, max_flips=k * k):
        return LocalTriangulation(tris)
    if k < envelope_threshold:
        return _hull_envelope(positions, center, ring)
    return None


def _flip_to_convex(coords, tris, max_flips: int) -> bool:
    """Flip reflex diagonals in place until locally convex; False on stall."""
    flips = 0
    while True:
        apex: dict[tuple[int, int], tuple[int, int]] = {}
        for ti, (a, b, c) in enumerate(tris):
            apex[(a, b)] = (ti, c)
            apex[(b, c)] = (ti, a)
            apex[(c, a)] = (ti, b)
        flipped = False
        for (u, w), (t1, x) in sorted(apex.items()):
            if u > w:
                continue
            rev = apex.get((w, u))
            if rev is None:
                continue
            t2, y = rev
            # The filtered sign suffices here: a quad too close to planar
            # to call in floating point is convex either way, and the
            # exact gates downstream do not depend on which diagonal wins.
            if (
                orient3_filtered(coords[u], coords[w], coords[x], coords[y])
                == Sign.POSITIVE
            ):
                # Reflex pair (u,w,x) / (w,u,y): retile the quad on (y,x).
                tris[t1] = (u, y, x)
                tris[t2] = (y, w, x)
                flips += 1
                flipped = True
                break
        if not flipped:
            return True
        if flips > max_flips:
            return False


def _hull_envelope(positions, center, ring):
    """Triangulate the hole with the ring's own hull faces visible from
    the removed vertex; None when that patch does not match the ring."""
    ring_arr = np.asarray(ring, dtype=np.intp)
    try:
        h = convex_hull(positions[ring_arr])
    except DegenerateInput:
        return None
    apex = positions[center]
    v = h.vertices
    kept: list[tuple[int, int, int]] = []
    for a, b, c in h.triangles:
        if orient3(v[a], v[b], v[c], apex) == Sign.POSITIVE:
            kept.append(
                (
                    int(ring_arr[h.point_indices[a]]),
                    int(ring_arr[h.point_indices[b]]),
                    int(ring_arr[h.point_indices[c]]),
                )
            )
    if not kept:
        return None
    directed: set[tuple[int, int]] = set()
    for t in kept:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            if e in directed:
                return None
            directed.add(e)
    boundary = {e for e in directed if (e[1], e[0]) not in directed}
    k = len(ring)
    if boundary != {(ring[j], ring[(j + 1) % k]) for j in range(k)}:
        return None
    kept.sort()
    return LocalTriangulation(kept)


# -- cost model ------------------------------------------------------------


def infinite_cost(positions, tri: LocalTriangulation) -> bool:
    """True when installing ``tri`` in a dual hull would unbound the region.

    The region stays bounded iff the dual origin stays strictly inside the
    dual hull, i.e. strictly below every replacement face.  Exact: a
    vectorized float filter certifies the common case and any triangle it
    cannot vouch for is re-decided in exact arithmetic.
    """
    idx = np.asarray(tri.triangles, dtype=np.intp)
    pa = positions[idx[:, 0]]
    pb = positions[idx[:, 1]]
    pc = positions[idx[:, 2]]
    # det[b-a, c-a, -a] per row, same expansion and error bound as the
    # scalar predicate with d fixed at the origin.
    bxcy = pb[:, 0] * pc[:, 1]
    cxby = pc[:, 0] * pb[:, 1]
    cxay = pc[:, 0] * pa[:, 1]
    axcy = pa[:, 0] * pc[:, 1]
    axby = pa[:, 0] * pb[:, 1]
    bxay = pb[:, 0] * pa[:, 1]
    det = -(
        pa[:, 2] * (bxcy - cxby) + pb[:, 2] * (cxay - axcy) + pc[:, 2] * (axby - bxay)
    )
    errbound = _ORIENT3_FILTER * (
        (np.abs(bxcy) + np.abs(cxby)) * np.abs(pa[:, 2])
        + (np.abs(cxay) + np.abs(axcy)) * np.abs(pb[:, 2])
        + (np.abs(axby) + np.abs(bxay)) * np.abs(pc[:, 2])
    )
    if (det < -errbound).all():
        return False
    if (det > errbound).any():
        return True
    for row in np.flatnonzero(det >= -errbound):
        a, b, c = tri.triangles[row]
        if orient3(positions[a], positions[b], positions[c], _ORIGIN) != Sign.NEGATIVE:
            return True
    return False


def _cross_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise cross product without ``np.cross``'s axis bookkeeping."""
    out = np.empty_like(a)
    out[:, 0] = a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1]
    out[:, 1] = a[:, 2] * b[:, 0] - a[:, 0] * b[:, 2]
    out[:, 2] = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return out


def _diagonal_conflict(mesh: HalfedgeHull, tri: LocalTriangulation) -> bool:
    """True when a diagonal of ``tri`` already exists as a mesh edge."""
    directed: set[tuple[int, int]] = set()
    for a, b, c in tri.triangles:
        directed.update(((a, b), (b, c), (c, a)))
    for u, w in directed:
        if u < w and (w, u) in directed and mesh.edge_exists(u, w):
            return True
    return False


def _dual_gap_cost(positions, center_id, ring, triangles, cost_mode):
    """Primal volume/area the region gains when a dual vertex is removed.

    The fan around the removed vertex plus the reversed replacement patch
    bound the slab of dual space swept by the elimination.  Mapping each
    face of that closed local surface back to its region corner turns the
    slab boundary into the boundary of the added primal wedge: one polygon
    per local vertex (the freed facet for the center, the grown strip for
    each neighbor), each lying on that vertex's plane ``phi . y = 1``.
    The volume falls out of the divergence theorem without assembling the
    polygons: every local halfedge contributes one directed polygon edge.
    Returns None when a replacement face plane passes too close to the
    dual origin (region corner at infinity) or the patch is inconsistent.
    """
    k = len(ring)
    faces = [(center_id, ring[j], ring[(j + 1) % k]) for j in range(k)]
    faces += [(a, c, b) for a, b, c in triangles]
    idx = np.asarray(faces, dtype=np.intp)
    p0 = positions[idx[:, 0]]
    eta = _cross_rows(positions[idx[:, 1]] - p0, positions[idx[:, 2]] - p0)
    beta = np.einsum("ij,ij->i", eta, p0)
    eta_norm = np.linalg.norm(eta, axis=1)
    local_ids = [center_id] + list(ring)
    local = positions[local_ids]
    scale = float(np.max(np.linalg.norm(local, axis=1)))
    if np.any(np.abs(beta) <= _NEAR_ORIGIN_REL * eta_norm * scale):
        return None
    q = eta / beta[:, None]

    slot = {vid: t for t, vid in enumerate(local_ids)}
    edge_face: dict[tuple[int, int], int] = {}
    for fi, (u, v, w) in enumerate(faces):
        edge_face[(u, v)] = fi
        edge_face[(v, w)] = fi
        edge_face[(w, u)] = fi
    if len(edge_face) != 3 * len(faces):
        return None
    m = len(edge_face)
    org = np.empty(m, dtype=np.intp)
    fa = np.empty(m, dtype=np.intp)
    fb = np.empty(m, dtype=np.intp)
    for t, ((u, v), fi) in enumerate(edge_face.items()):
        gi = edge_face.get((v, u))
        if gi is None:
            return None
        org[t] = slot[u]
        fa[t] = fi
        fb[t] = gi
    cross = _cross_rows(q[fa], q[fb])
    if cost_mode == "volume":
        support = local / np.einsum("ij,ij->i", local, local)[:, None]
        total = float(np.einsum("ij,ij->i", cross, support[org]).sum())
        return abs(total) / 6.0
    acc = np.zeros((len(local_ids), 3))
    np.add.at(acc, org, cross)
    mags = 0.5 * np.linalg.norm(acc, axis=1)
    return max(0.0, float(mags[1:].sum() - mags[0]))


def _primal_gap_cost(positions, center_id, ring, triangles, cost_mode):
    """Volume/area lost when a primal hull vertex is decimated.

    The fan around the vertex plus the reversed replacement patch form a
    closed surface bounding the shaved-off wedge directly.
    """
    k = len(ring)
    faces = [(center_id, ring[j], ring[(j + 1) % k]) for j in range(k)]
    faces += [(a, c, b) for a, b, c in triangles]
    idx = np.asarray(faces, dtype=np.intp)
    local_mean = positions[[center_id] + list(ring)].mean(axis=0)
    p0 = positions[idx[:, 0]] - local_mean
    p1 = positions[idx[:, 1]] - local_mean
    p2 = positions[idx[:, 2]] - local_mean
    if cost_mode == "volume":
        total = float(np.einsum("ij,ij->i", p0, _cross_rows(p1, p2)).sum())
        return abs(total) / 6.0
    areas = 0.5 * np.linalg.norm(_cross_rows(p1 - p0, p2 - p0), axis=1)
    return max(0.0, float(areas[:k].sum() - areas[k:].sum()))


def removal_cost(
    mesh: HalfedgeHull,
    vertex: int,
    tri: LocalTriangulation | None = None,
    cost_mode: str = "volume",
    dual: bool = True,
) -> float:
    """Cost of removing ``vertex`` from ``mesh`` (math.inf when blocked).

    With ``dual=True`` the mesh is a dual hull and the cost is the primal
    volume/area the region gains; with ``dual=False`` the mesh is a primal
    hull and the cost is the volume/area the solid loses.  ``tri`` defaults
    to the canonical retriangulation of the vertex's ring.
    """
    if cost_mode not in _COST_MODES:
        raise ValueError(f"cost_mode must be one of {_COST_MODES}")
    ring = mesh.one_ring(vertex).neighbors
    if tri is None:
        tri = retriangulate_one_ring(mesh.positions, vertex, ring)
    if tri is None:
        return math.inf
    if dual and infinite_cost(mesh.positions, tri):
        return math.inf
    if _diagonal_conflict(mesh, tri):
        return math.inf
    fn = _dual_gap_cost if dual else _primal_gap_cost
    cost = fn(mesh.positions, vertex, ring, tri.triangles, cost_mode)
    if cost is None or not math.isfinite(cost):
        return math.inf
    return cost


# -- greedy engine ---------------------------------------------------------


class _GreedyEngine:
    """Lazy-heap vertex decimation with versioned cost invalidation.

    Costs live in a min-heap keyed ``(cost, vertex, version)``; a removal
    bumps the version of exactly the ring neighbors, so stale entries are
    skipped on pop and only the local neighborhood is ever re-evaluated.
    Ties break toward the lowest vertex id.
    """

    def __init__(self, mesh, cost_mode, dual_space, constrained, cost_cap, track):
        self.mesh = mesh
        self.positions = mesh.positions
        self.cost_mode = cost_mode
        self.dual_space = dual_space
        self.constrained = frozenset(constrained)
        self.cost_cap = cost_cap
        self.version: dict[int, int] = {}
        self.cache: dict[int, tuple[int, float, LocalTriangulation | None]] = {}
        self.heap: list[tuple[float, int, int]] = []
        self.pushed: dict[int, int] = {}
        self.counters = (
            {
                "cost_evaluations": 0,
                "heap_pushes": 0,
                "stale_pops": 0,
                "edge_conflict_retries": 0,
                "max_ring_size": 0,
            }
            if track
            else None
        )

    def evaluate(self, vid: int) -> tuple[float, LocalTriangulation | None]:
        ver = self.version.get(vid, 0)
        hit = self.cache.get(vid)
        if hit is not None and hit[0] == ver:
            return hit[1], hit[2]
        ring = self.mesh.one_ring(vid).neighbors
        if self.counters is not None:
            self.counters["cost_evaluations"] += 1
            if len(ring) > self.counters["max_ring_size"]:
                self.counters["max_ring_size"] = len(ring)
        cost, tri = self._cost(vid, ring)
        self.cache[vid] = (ver, cost, tri)
        return cost, tri

    def _cost(self, vid, ring):
        tri = retriangulate_one_ring(self.positions, vid, ring)
        if tri is None:
            return math.inf, None
        if self.dual_space and infinite_cost(self.positions, tri):
            return math.inf, tri
        if _diagonal_conflict(self.mesh, tri):
            return math.inf, tri
        fn = _dual_gap_cost if self.dual_space else _primal_gap_cost
        cost = fn(self.positions, vid, ring, tri.triangles, self.cost_mode)
        if cost is None or not math.isfinite(cost) or cost > self.cost_cap:
            return math.inf, tri
        return cost, tri

    def push(self, vid: int) -> None:
        if vid in self.constrained:
            return
        cost, _ = self.evaluate(vid)
        if math.isfinite(cost):
            heapq.heappush(self.heap, (cost, vid, self.version.get(vid, 0)))
            if self.counters is not None:
                self.counters["heap_pushes"] += 1

    def bump(self, vid: int) -> None:
        self.version[vid] = self.version.get(vid, 0) + 1

    def run(self, target: int, records: list[RemovalRecord], measure=None) -> bool:
        """Eliminate until ``target`` elements remain; False when stuck."""
        mesh = self.mesh
        for vid in mesh.alive_vertex_ids():
            self.push(vid)
        while mesh.n_alive_vertices > target:
            removed = False
            while self.heap:
                cost, vid, ver = heapq.heappop(self.heap)
                if not mesh.v_alive[vid] or ver != self.version.get(vid, 0):
                    if self.counters is not None:
                        self.counters["stale_pops"] += 1
                    continue
                cost, tri = self.evaluate(vid)
                if not math.isfinite(cost):
                    continue
                ring = mesh.one_ring(vid).neighbors
                before = measure() if measure is not None else None
                try:
                    mesh.remove_vertex(vid, tri)
                except EdgeConflict:
                    # A distant removal created an edge that now collides
                    # with this patch; re-evaluate against the fresh mesh.
                    if self.counters is not None:
                        self.counters["edge_conflict_retries"] += 1
                    self.bump(vid)
                    self.push(vid)
                    continue
                exact = measure() - before if measure is not None else None
                records.append(
                    RemovalRecord(
                        removed_id=vid,
                        cost=cost,
                        remaining=mesh.n_alive_vertices,
                        exact_cost=exact,
                    )
                )
                for j in ring:
                    self.bump(j)
                    self.push(j)
                removed = True
                break
            if not removed:
                return False
        return True


# -- top-level entry points -------------------------------------------------


def simplify(points, config: SimplifyConfig | None = None, **options) -> SimplifiedHull:
    """Simplify the convex hull of ``points`` down to a plane budget.

    Pass a SimplifyConfig or the equivalent keyword options (e.g.
    ``simplify(pts, target_faces=40)``).  Outer mode returns a solid that
    contains the input hull using at most ``target_faces`` of its face
    planes; inner mode returns a contained solid over a subset of its
    vertices.  Raises TargetUnreachable (carrying the best reachable
    result) when the budget cannot be met, and DegenerateInput when the
    points do not span 3D.
    """
    if config is None:
        config = SimplifyConfig(**options)
    elif options:
        raise TypeError("pass either a config object or keyword options, not both")
    pts = as_points(points)
    hull = convex_hull(pts)
    if config.approx_mode == "inner":
        return _simplify_inner(hull, config)
    return _simplify_outer(hull, config)


def _simplify_outer(hull: TriangulatedHull, config: SimplifyConfig) -> SimplifiedHull:
    notes: list[str] = []
    plane_set = face_planes(hull)
    n_planes = len(plane_set)
    for i in config.constrained:
        if not 0 <= i < n_planes:
            raise ValueError(
                f"constrained plane id {i} is out of range (have {n_planes} planes)"
            )
    cheb = chebyshev_center(plane_set.halfspaces)
    if not isinstance(cheb, ChebyshevResult) or cheb.radius <= 0.0:
        raise DegenerateInput(
            "the hull's face planes do not bound a solid region; the input "
            "is too flat to simplify"
        )
    dual = build_dual_hull(plane_set.halfspaces, cheb.center)
    mesh = dual.mesh
    if dual.redundant:
        notes.append(
            f"dropped {len(dual.redundant)} redundant plane(s): {dual.redundant}"
        )
        for i in config.constrained:
            if not mesh.v_alive[i]:
                raise ValueError(
                    f"constrained plane {i} does not support the region"
                )

    engine = None
    records: list[RemovalRecord] = []
    reached_target = True
    if mesh.n_alive_vertices <= config.target_faces:
        if mesh.n_alive_vertices < config.target_faces:
            notes.append(
                f"plane count after merging ({mesh.n_alive_vertices}) is "
                f"already below the target ({config.target_faces})"
            )
    else:
        engine = _GreedyEngine(
            mesh,
            cost_mode=config.cost_mode,
            dual_space=True,
            constrained=config.constrained,
            cost_cap=_COST_CAP_REL * hull.diagonal**3,
            track=config.debug,
        )
        measure = None
        if config.exact_cost_check:
            if config.cost_mode == "volume":
                measure = lambda: extract_primal(mesh, cheb.center).volume()
            else:
                measure = lambda: extract_primal(mesh, cheb.center).area()
        reached_target = engine.run(config.target_faces, records, measure)

    out_mesh = extract_primal(mesh, cheb.center)
    kept = mesh.alive_vertex_ids()
    result = SimplifiedHull(
        halfspaces=[plane_set.halfspaces[i] for i in kept],
        kept_ids=kept,
        mesh=out_mesh,
        volume=out_mesh.volume(),
        area=out_mesh.area(),
        input_volume=hull.volume(),
        input_area=hull.area(),
        center=cheb.center,
        steps=records,
        warnings=notes,
        config=config,
        plane_set=plane_set,
        debug_info=engine.counters if engine is not None else None,
    )
    if not reached_target:
        raise TargetUnreachable(mesh.n_alive_vertices, result)
    return result


def _simplify_inner(hull: TriangulatedHull, config: SimplifyConfig) -> SimplifiedHull:
    notes: list[str] = []
    mesh = HalfedgeHull.from_triangles(
        hull.vertices, [tuple(int(x) for x in t) for t in hull.triangles]
    )
    n_verts = mesh.n_alive_vertices
    for i in config.constrained:
        if not 0 <= i < n_verts:
            raise ValueError(
                f"constrained vertex id {i} is out of range (have {n_verts} vertices)"
            )

    engine = None
    records: list[RemovalRecord] = []
    reached_target = True
    if n_verts <= config.target_faces:
        if n_verts < config.target_faces:
            notes.append(
                f"hull vertex count ({n_verts}) is already below the "
                f"target ({config.target_faces})"
            )
    else:
        engine = _GreedyEngine(
            mesh,
            cost_mode=config.cost_mode,
            dual_space=False,
            constrained=config.constrained,
            cost_cap=_COST_CAP_REL * hull.diagonal**3,
            track=config.debug,
        )
        measure = None
        if config.exact_cost_check:
            if config.cost_mode == "volume":
                measure = lambda: enclosed_volume(
                    mesh.positions, mesh.triangle_list()
                )
            else:
                measure = lambda: _triangle_area(mesh)
        reached_target = engine.run(config.target_faces, records, measure)

    kept = mesh.alive_vertex_ids()
    compacted, _ = mesh.compact()
    tri_hull = TriangulatedHull(
        vertices=compacted.positions,
        triangles=np.asarray(compacted.triangle_list(), dtype=np.intp),
        point_indices=hull.point_indices[kept],
    )
    out_planes = face_planes(tri_hull)
    out_mesh = PolyhedronMesh(
        vertices=tri_hull.vertices,
        faces=[list(map(int, t)) for t in tri_hull.triangles],
        face_sources=None,
    )
    result = SimplifiedHull(
        halfspaces=out_planes.halfspaces,
        kept_ids=kept,
        mesh=out_mesh,
        volume=tri_hull.volume(),
        area=tri_hull.area(),
        input_volume=hull.volume(),
        input_area=hull.area(),
        center=tri_hull.vertices.mean(axis=0),
        steps=records,
        warnings=notes,
        config=config,
        plane_set=out_planes,
        debug_info=engine.counters if engine is not None else None,
    )
    if not reached_target:
        raise TargetUnreachable(mesh.n_alive_vertices, result)
    return result


def _triangle_area(mesh: HalfedgeHull) -> float:
    tris = np.asarray(mesh.triangle_list(), dtype=np.intp)
    v = mesh.positions
    cross = np.cross(
        v[tris[:, 1]] - v[tris[:, 0]], v[tris[:, 2]] - v[tris[:, 0]]
    )
    return float(0.5 * np.linalg.norm(cross, axis=1).sum())
