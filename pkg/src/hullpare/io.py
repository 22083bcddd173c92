"""File input/output and batch run configuration.

Geometry input reads ASCII OBJ, OFF, and PLY files; only vertex data is
used (the hull is always recomputed, so faces in the file are ignored).
Results are written as a versioned JSON plane-list document plus an
optional OBJ mesh.  Output bytes are deterministic for identical inputs:
floats are serialized with shortest round-trip repr, key order is fixed,
and the ``timing_ms`` field is always null in the file — wall-clock
numbers are runtime diagnostics, not part of the artifact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .geometry import Halfspace
from .hull import PolyhedronMesh
from .simplify import SimplifiedHull, SimplifyConfig, TargetUnreachable, simplify

__all__ = [
    "ParseError",
    "TooFewPoints",
    "PLANE_LIST_FORMAT",
    "PLANE_LIST_VERSION",
    "RunConfig",
    "load_geometry",
    "load_plane_list",
    "load_run_config",
    "run_config",
    "write_outputs",
]

PLANE_LIST_FORMAT = "hullpare-planes"
PLANE_LIST_VERSION = 1


class ParseError(ValueError):
    """A file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TooFewPoints(ValueError):
    """The geometry has fewer than 4 distinct points: no solid hull exists."""


# -- geometry input ---------------------------------------------------------


def load_geometry(path) -> np.ndarray:
    """Read the vertices of an ASCII OBJ/OFF/PLY file as an (n, 3) array.

    Exact duplicate points are dropped (keeping first occurrence).  Raises
    ParseError for malformed files and TooFewPoints when fewer than four
    distinct points remain.
    """
    p = Path(path)
    ext = p.suffix.lower()
    try:
        text = p.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{p.name} is not ASCII text: {exc}") from exc
    lines = text.splitlines()
    if ext == ".obj":
        pts = _parse_obj(lines)
    elif ext == ".off":
        pts = _parse_off(lines)
    elif ext == ".ply":
        pts = _parse_ply(lines)
    else:
        raise ParseError(
            f"unsupported geometry extension {ext!r} (expected .obj, .off, or .ply)"
        )
    seen: dict[tuple[float, float, float], None] = {}
    for x, y, z in pts:
        seen.setdefault((x, y, z), None)
    if len(seen) < 4:
        raise TooFewPoints(
            f"need at least 4 distinct points to bound a solid, got {len(seen)}"
        )
    return np.array(list(seen), dtype=np.float64)


def _floats(tokens, count, line_no):
    try:
        return [float(t) for t in tokens[:count]]
    except ValueError as exc:
        raise ParseError(f"bad numeric value: {exc}", line=line_no) from exc


def _parse_obj(lines):
    pts = []
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] != "v":
            continue
        if len(tokens) < 4:
            raise ParseError("vertex line needs 3 coordinates", line=i)
        pts.append(_floats(tokens[1:], 3, i))
    return pts


def _meaningful(lines):
    """(line_no, tokens) pairs for non-empty, non-comment lines."""
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield i, line.split()


def _parse_off(lines):
    stream = _meaningful(lines)
    try:
        line_no, tokens = next(stream)
    except StopIteration:
        raise ParseError("empty OFF file") from None
    if tokens[0] != "OFF":
        raise ParseError("missing OFF header", line=line_no)
    counts = tokens[1:]
    if not counts:
        try:
            line_no, counts = next(stream)
        except StopIteration:
            raise ParseError("missing OFF count line", line=line_no) from None
    if len(counts) < 3:
        raise ParseError("OFF count line needs 3 integers", line=line_no)
    try:
        n_vertices = int(counts[0])
    except ValueError as exc:
        raise ParseError(f"bad vertex count: {exc}", line=line_no) from exc
    pts = []
    for _ in range(n_vertices):
        try:
            line_no, tokens = next(stream)
        except StopIteration:
            raise ParseError(
                f"unexpected end of file: expected {n_vertices} vertices, "
                f"got {len(pts)}",
                line=line_no,
            ) from None
        if len(tokens) < 3:
            raise ParseError("vertex line needs 3 coordinates", line=line_no)
        pts.append(_floats(tokens, 3, line_no))
    return pts


def _parse_ply(lines):
    stream = _meaningful(lines)
    try:
        line_no, tokens = next(stream)
    except StopIteration:
        raise ParseError("empty PLY file") from None
    if tokens[0] != "ply":
        raise ParseError("missing ply header", line=line_no)
    n_vertices = None
    vertex_props: list[str] = []
    current_element = None
    for line_no, tokens in stream:
        if tokens[0] == "format":
            if tokens[1:2] != ["ascii"]:
                raise ParseError("only ASCII PLY is supported", line=line_no)
        elif tokens[0] == "element":
            current_element = tokens[1]
            if current_element == "vertex":
                try:
                    n_vertices = int(tokens[2])
                except (IndexError, ValueError) as exc:
                    raise ParseError(f"bad vertex element: {exc}", line=line_no) from exc
        elif tokens[0] == "property" and current_element == "vertex":
            if tokens[1] == "list":
                raise ParseError(
                    "list property on the vertex element is not supported",
                    line=line_no,
                )
            vertex_props.append(tokens[-1])
        elif tokens[0] == "end_header":
            break
    else:
        raise ParseError("missing end_header")
    if n_vertices is None:
        raise ParseError("PLY header declares no vertex element")
    try:
        coord_at = [vertex_props.index(name) for name in ("x", "y", "z")]
    except ValueError:
        raise ParseError("vertex element lacks x/y/z properties") from None
    pts = []
    for _ in range(n_vertices):
        try:
            line_no, tokens = next(stream)
        except StopIteration:
            raise ParseError(
                f"unexpected end of file: expected {n_vertices} vertices, "
                f"got {len(pts)}"
            ) from None
        if len(tokens) < len(vertex_props):
            raise ParseError("vertex line has too few values", line=line_no)
        try:
            pts.append([float(tokens[k]) for k in coord_at])
        except ValueError as exc:
            raise ParseError(f"bad numeric value: {exc}", line=line_no) from exc
    return pts


# -- plane-list documents ----------------------------------------------------


def _plane_list_doc(result: SimplifiedHull, partial: bool) -> dict:
    steps = []
    for r in result.steps:
        entry = {"removed_id": r.removed_id, "cost": r.cost, "remaining": r.remaining}
        if r.exact_cost is not None:
            entry["exact_cost"] = r.exact_cost
        steps.append(entry)
    return {
        "format": PLANE_LIST_FORMAT,
        "version": PLANE_LIST_VERSION,
        "approx_mode": result.config.approx_mode,
        "cost_mode": result.config.cost_mode,
        "target": result.config.target_faces,
        "partial": bool(partial),
        "count": len(result.halfspaces),
        "planes": [
            {"n": [float(x) for x in h.n], "b": float(h.b)} for h in result.halfspaces
        ],
        "kept_ids": [int(i) for i in result.kept_ids],
        "metrics": {
            "volume": result.volume,
            "area": result.area,
            "input_volume": result.input_volume,
            "input_area": result.input_area,
            "volume_ratio": result.volume_ratio,
            "area_ratio": result.area_ratio,
        },
        "warnings": list(result.warnings),
        "steps": steps,
        "timing_ms": None,
    }


def _obj_text(mesh: PolyhedronMesh, triangulate: bool) -> str:
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}")
    faces = (
        [list(map(int, t)) for t in mesh.triangulated()] if triangulate else mesh.faces
    )
    for f in faces:
        lines.append("f " + " ".join(str(int(i) + 1) for i in f))
    return "\n".join(lines) + "\n"


def write_outputs(
    result: SimplifiedHull,
    json_path,
    obj_path=None,
    *,
    triangulate: bool = False,
    partial: bool = False,
) -> dict:
    """Write the plane-list JSON document (and optionally an OBJ mesh).

    Returns the document that was written.  Bytes are deterministic for a
    given result; ``triangulate`` fans the polygonal faces into triangles
    in the OBJ output.  ``partial`` marks a document whose plane count is
    still above the requested target (the run stopped early).
    """
    doc = _plane_list_doc(result, partial)
    Path(json_path).write_text(
        json.dumps(doc, indent=2, allow_nan=False) + "\n", encoding="ascii"
    )
    if obj_path is not None:
        Path(obj_path).write_text(
            _obj_text(result.mesh, triangulate), encoding="ascii"
        )
    return doc


def load_plane_list(path) -> tuple[list[Halfspace], dict]:
    """Read a plane-list JSON document; returns (halfspaces, full document)."""
    p = Path(path)
    try:
        doc = json.loads(p.read_text(encoding="ascii"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{p.name} is not ASCII text: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != PLANE_LIST_FORMAT:
        raise ParseError(f"{p.name} is not a plane-list document")
    if doc.get("version") != PLANE_LIST_VERSION:
        raise ParseError(
            f"unsupported plane-list version {doc.get('version')!r} "
            f"(this build reads version {PLANE_LIST_VERSION})"
        )
    raw = doc.get("planes")
    if not isinstance(raw, list) or not raw:
        raise ParseError("plane-list document has no planes")
    halfspaces = []
    for k, entry in enumerate(raw):
        try:
            halfspaces.append(Halfspace(entry["n"], entry["b"]))
        except (TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"bad plane entry {k}: {exc}") from exc
    return halfspaces, doc


# -- run configuration --------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """A batch run loaded from a JSON config file.

    ``input`` and ``output`` paths are resolved relative to the config
    file's directory.  ``output`` is a base path: the run writes
    ``<output>.planes.json`` and ``<output>.obj``.
    """

    input: str
    target_faces: int
    output: str | None = None
    cost_mode: str = "volume"
    approx_mode: str = "outer"
    constrained: tuple[int, ...] = ()
    triangulate_output: bool = False
    exact_cost_check: bool = False


def load_run_config(path) -> RunConfig:
    """Read a run-config JSON file, rejecting unknown or missing keys."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="ascii"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(raw, dict):
        raise ParseError("run config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ParseError(f"unknown run-config key(s): {', '.join(unknown)}")
    missing = sorted({"input", "target_faces"} - set(raw))
    if missing:
        raise ParseError(f"missing required run-config key(s): {', '.join(missing)}")
    base = p.resolve().parent
    values = dict(raw)
    values["input"] = str((base / values["input"]).resolve())
    if values.get("output") is not None:
        values["output"] = str((base / values["output"]).resolve())
    try:
        if "constrained" in values:
            values["constrained"] = tuple(int(i) for i in values["constrained"])
        return RunConfig(**values)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad run-config value: {exc}") from exc


def run_config(config) -> SimplifiedHull:
    """Execute a run config (object or path): load, simplify, write outputs.

    When the target is unreachable the partial result is still written
    before TargetUnreachable propagates.
    """
    cfg = config if isinstance(config, RunConfig) else load_run_config(config)
    points = load_geometry(cfg.input)
    simplify_config = SimplifyConfig(
        target_faces=cfg.target_faces,
        cost_mode=cfg.cost_mode,
        approx_mode=cfg.approx_mode,
        constrained=cfg.constrained,
        exact_cost_check=cfg.exact_cost_check,
    )
    try:
        result = simplify(points, simplify_config)
    except TargetUnreachable as exc:
        if cfg.output is not None:
            write_outputs(
                exc.result,
                cfg.output + ".planes.json",
                cfg.output + ".obj",
                triangulate=cfg.triangulate_output,
                partial=True,
            )
        raise
    if cfg.output is not None:
        write_outputs(
            result,
            cfg.output + ".planes.json",
            cfg.output + ".obj",
            triangulate=cfg.triangulate_output,
        )
    return result
