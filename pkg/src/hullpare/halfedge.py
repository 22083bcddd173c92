"""Halfedge representation of a closed triangulated convex surface.

The mesh is always triangulated and always a closed orientable 2-manifold:
every directed edge appears exactly once and twins with its reverse.
Deletion is by tombstone so ids stay stable while a priority queue holds
them; ``compact`` exists for explicit garbage collection between runs.

``remove_vertex`` deletes one vertex and retriangulates the hole with a
caller-supplied triangulation of its one-ring polygon.  The operation
refuses anything that would corrupt the manifold: a triangulation whose
boundary does not match the ring (BoundaryMismatch), a fifth-to-last vertex
(MinimalComplex), or a diagonal that already exists as a mesh edge
elsewhere (EdgeConflict - a degenerate configuration that would create a
doubled edge).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MeshError",
    "DeadVertex",
    "BoundaryMismatch",
    "MinimalComplex",
    "EdgeConflict",
    "OneRing",
    "LocalTriangulation",
    "HalfedgeHull",
    "one_ring",
    "remove_vertex",
    "topological_dual",
]


class MeshError(ValueError):
    """The input or operation would break mesh invariants."""


class DeadVertex(MeshError):
    """Operation addressed a tombstoned vertex."""


class BoundaryMismatch(MeshError):
    """A local triangulation's boundary does not match the one-ring."""


class MinimalComplex(MeshError):
    """Removal refused: a closed surface needs at least 4 vertices."""


class EdgeConflict(MeshError):
    """A proposed diagonal already exists as an edge elsewhere in the mesh."""


@dataclass
class OneRing:
    """Ordered neighborhood of a vertex.

    ``neighbors[j]`` and ``neighbors[j+1]`` together with the center span
    ``faces[j]``; the cyclic order is counterclockwise seen from outside.
    """

    center: int
    neighbors: list[int]
    faces: list[int]


@dataclass
class LocalTriangulation:
    """Triangles (vertex-id triples) filling a one-ring polygon.

    Triangles are oriented like the surface they replace (counterclockwise
    from outside, i.e. from the side of the removed vertex).
    """

    triangles: list[tuple[int, int, int]]


class HalfedgeHull:
    """Closed triangulated surface with stable ids and tombstone deletion."""

    def __init__(self, positions: np.ndarray):
        self.positions = np.asarray(positions, dtype=np.float64)
        n = len(self.positions)
        self.v_out = [-1] * n
        self.v_alive = [False] * n
        self.he_origin: list[int] = []
        self.he_twin: list[int] = []
        self.he_next: list[int] = []
        self.he_face: list[int] = []
        self.he_alive: list[bool] = []
        self.f_he: list[int] = []
        self.f_alive: list[bool] = []
        self.n_alive_vertices = 0
        self.n_alive_faces = 0
        self.n_alive_halfedges = 0

    # -- construction ----------------------------------------------------

    @classmethod
    def from_triangles(cls, positions, triangles) -> "HalfedgeHull":
        """Build from an outward-oriented closed triangle list.

        Raises MeshError when the triangles are not a consistently oriented
        closed 2-manifold (duplicate directed edge, unmatched twin, bad
        Euler characteristic).
        """
        mesh = cls(positions)
        edge_map: dict[tuple[int, int], int] = {}
        for face_id, tri in enumerate(triangles):
            a, b, c = (int(t) for t in tri)
            if len({a, b, c}) != 3:
                raise MeshError(f"triangle {face_id} repeats a vertex: {(a, b, c)}")
            base = len(mesh.he_origin)
            for k, (u, w) in enumerate(((a, b), (b, c), (c, a))):
                if (u, w) in edge_map:
                    raise MeshError(f"directed edge {(u, w)} appears twice")
                edge_map[(u, w)] = base + k
                mesh.he_origin.append(u)
                mesh.he_twin.append(-1)
                mesh.he_next.append(base + (k + 1) % 3)
                mesh.he_face.append(face_id)
                mesh.he_alive.append(True)
                mesh.v_out[u] = base + k
                mesh.v_alive[u] = True
            mesh.f_he.append(base)
            mesh.f_alive.append(True)
        for (u, w), h in edge_map.items():
            t = edge_map.get((w, u))
            if t is None:
                raise MeshError(f"edge {(u, w)} has no twin: surface is not closed")
            mesh.he_twin[h] = t
        mesh.n_alive_vertices = sum(mesh.v_alive)
        mesh.n_alive_faces = len(mesh.f_he)
        mesh.n_alive_halfedges = len(mesh.he_origin)
        v, e, f = mesh.n_alive_vertices, mesh.n_alive_halfedges // 2, mesh.n_alive_faces
        if v - e + f != 2:
            raise MeshError(f"Euler characteristic V-E+F = {v - e + f}, expected 2")
        return mesh

    # -- queries ----------------------------------------------------------

    def target(self, h: int) -> int:
        return self.he_origin[self.he_twin[h]]

    def alive_vertex_ids(self) -> list[int]:
        return [v for v, alive in enumerate(self.v_alive) if alive]

    def triangle_list(self) -> list[tuple[int, int, int]]:
        """Alive faces as vertex triples (in stored orientation)."""
        tris = []
        for f, alive in enumerate(self.f_alive):
            if not alive:
                continue
            h0 = self.f_he[f]
            h1 = self.he_next[h0]
            h2 = self.he_next[h1]
            tris.append((self.he_origin[h0], self.he_origin[h1], self.he_origin[h2]))
        return tris

    def valence(self, v: int) -> int:
        return len(self.one_ring(v).neighbors)

    def one_ring(self, v: int) -> OneRing:
        """Ordered neighbors and incident faces of ``v`` (ccw from outside).

        O(valence).  Raises DeadVertex for tombstoned vertices.
        """
        if not (0 <= v < len(self.v_alive)) or not self.v_alive[v]:
            raise DeadVertex(f"vertex {v} is not alive")
        h0 = self.v_out[v]
        neighbors: list[int] = []
        faces: list[int] = []
        h = h0
        limit = self.n_alive_halfedges
        while True:
            neighbors.append(self.he_origin[self.he_twin[h]])
            faces.append(self.he_face[h])
            h = self.he_twin[self.he_next[self.he_next[h]]]
            if h == h0:
                break
            if len(neighbors) > limit:
                raise MeshError(f"one-ring walk around {v} does not close")
        return OneRing(center=v, neighbors=neighbors, faces=faces)

    def edge_exists(self, u: int, w: int) -> bool:
        """True if (u, w) is an edge of the mesh.  O(valence of u)."""
        h0 = self.v_out[u]
        h = h0
        limit = self.n_alive_halfedges
        count = 0
        while True:
            if self.he_origin[self.he_twin[h]] == w:
                return True
            h = self.he_twin[self.he_next[self.he_next[h]]]
            count += 1
            if h == h0:
                return False
            if count > limit:
                raise MeshError(f"one-ring walk around {u} does not close")

    # -- mutation ---------------------------------------------------------

    def remove_vertex(self, v: int, tri: LocalTriangulation) -> None:
        """Delete ``v`` and fill the hole with ``tri``.

        ``tri`` must be a triangulation of the one-ring polygon: its
        boundary must traverse the ring exactly once in ring order, its
        triangles oriented with the surface.  Raises DeadVertex,
        MinimalComplex, BoundaryMismatch, or EdgeConflict; the mesh is
        untouched when any of them fires.
        """
        ring = self.one_ring(v)
        if self.n_alive_vertices <= 4:
            raise MinimalComplex("cannot remove a vertex of a 4-vertex surface")
        neighbors = ring.neighbors
        k = len(neighbors)
        triangles = [tuple(int(x) for x in t) for t in tri.triangles]
        if len(triangles) != k - 2:
            raise BoundaryMismatch(
                f"expected {k - 2} triangles for a {k}-ring, got {len(triangles)}"
            )
        ring_set = set(neighbors)
        directed: dict[tuple[int, int], int] = {}
        for idx, (a, b, c) in enumerate(triangles):
            if len({a, b, c}) != 3 or not {a, b, c} <= ring_set:
                raise BoundaryMismatch(f"triangle {(a, b, c)} is not over the ring")
            for u, w in ((a, b), (b, c), (c, a)):
                if (u, w) in directed:
                    raise BoundaryMismatch(f"directed edge {(u, w)} duplicated")
                directed[(u, w)] = idx
        ring_edges = {(neighbors[j], neighbors[(j + 1) % k]) for j in range(k)}
        boundary = {e for e in directed if (e[1], e[0]) not in directed}
        if boundary != ring_edges:
            raise BoundaryMismatch("triangulation boundary does not match the ring")
        diagonals = {(u, w) for (u, w) in directed if (w, u) in directed and u < w}
        for u, w in diagonals:
            if self.edge_exists(u, w):
                raise EdgeConflict(f"diagonal {(u, w)} already exists in the mesh")

        # Collect the dying fan and the surviving outer halfedges.
        outer: dict[tuple[int, int], int] = {}
        dying_he: list[int] = []
        dying_faces: list[int] = []
        h = self.v_out[v]
        for _ in range(k):
            spoke_out = h  # v -> n_j
            inner = self.he_next[spoke_out]  # n_j -> n_{j+1}
            spoke_in = self.he_next[inner]  # n_{j+1} -> v
            outer[(self.he_origin[inner], self.he_origin[spoke_in])] = self.he_twin[inner]
            dying_he.extend((spoke_out, inner, spoke_in))
            dying_faces.append(self.he_face[spoke_out])
            h = self.he_twin[spoke_in]

        # Create the replacement faces.
        new_edge_map: dict[tuple[int, int], int] = {}
        for a, b, c in triangles:
            base = len(self.he_origin)
            face_id = len(self.f_he)
            for kk, (u, w) in enumerate(((a, b), (b, c), (c, a))):
                new_edge_map[(u, w)] = base + kk
                self.he_origin.append(u)
                self.he_twin.append(-1)
                self.he_next.append(base + (kk + 1) % 3)
                self.he_face.append(face_id)
                self.he_alive.append(True)
            self.f_he.append(base)
            self.f_alive.append(True)
        for (u, w), h_new in new_edge_map.items():
            mate = new_edge_map.get((w, u))
            if mate is None:
                mate = outer[(u, w)]
                self.he_twin[mate] = h_new
            self.he_twin[h_new] = mate

        # Tombstones and bookkeeping.
        for h_dead in dying_he:
            self.he_alive[h_dead] = False
        for f_dead in dying_faces:
            self.f_alive[f_dead] = False
        self.v_alive[v] = False
        self.v_out[v] = -1
        for (u, w), h_new in new_edge_map.items():
            self.v_out[u] = h_new
        self.n_alive_vertices -= 1
        self.n_alive_faces += len(triangles) - k
        self.n_alive_halfedges += 3 * len(triangles) - 3 * k

    def compact(self) -> tuple["HalfedgeHull", dict[int, int]]:
        """Rebuild without tombstones; returns (new mesh, old->new vertex map)."""
        alive = self.alive_vertex_ids()
        vmap = {old: new for new, old in enumerate(alive)}
        tris = [
            (vmap[a], vmap[b], vmap[c]) for a, b, c in self.triangle_list()
        ]
        mesh = HalfedgeHull.from_triangles(self.positions[alive], tris)
        return mesh, vmap

    def validate(self) -> None:
        """Check structural invariants; raises MeshError on violation."""
        for h in range(len(self.he_origin)):
            if not self.he_alive[h]:
                continue
            t = self.he_twin[h]
            if not self.he_alive[t] or self.he_twin[t] != h:
                raise MeshError(f"halfedge {h} has a broken twin link")
            if self.he_origin[t] == self.he_origin[h]:
                raise MeshError(f"halfedge {h} twins an equal-origin halfedge")
            if self.he_next[self.he_next[self.he_next[h]]] != h:
                raise MeshError(f"halfedge {h} is not in a 3-cycle")
            if not self.f_alive[self.he_face[h]]:
                raise MeshError(f"halfedge {h} references a dead face")
        v = self.n_alive_vertices
        e = self.n_alive_halfedges // 2
        f = self.n_alive_faces
        if v - e + f != 2:
            raise MeshError(f"Euler characteristic V-E+F = {v - e + f}, expected 2")
        for vid in self.alive_vertex_ids():
            ring = self.one_ring(vid)
            if len(ring.neighbors) < 3:
                raise MeshError(f"vertex {vid} has valence {len(ring.neighbors)}")


def one_ring(mesh: HalfedgeHull, vertex: int) -> OneRing:
    """Ordered one-ring of a vertex (module-level convenience)."""
    return mesh.one_ring(vertex)


def remove_vertex(mesh: HalfedgeHull, vertex: int, tri: LocalTriangulation) -> None:
    """Remove a vertex, filling the hole with ``tri`` (module-level)."""
    mesh.remove_vertex(vertex, tri)


def topological_dual(mesh: HalfedgeHull) -> tuple[list[int], list[list[int]]]:
    """Face/vertex-swapped combinatorics of the mesh.

    Returns ``(vertex_ids, polygons)``: for each alive vertex (ascending
    id), the cyclic list of its incident face ids.  Dual vertices are the
    mesh's faces; each polygon is one dual face, ordered consistently with
    the mesh orientation.
    """
    vertex_ids = mesh.alive_vertex_ids()
    polygons = [mesh.one_ring(v).faces for v in vertex_ids]
    return vertex_ids, polygons
