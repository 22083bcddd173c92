"""hullpare: conservative simplification of 3D convex hulls.

The package reduces a convex hull to a target number of bounding halfspaces
by greedily discarding the face plane whose removal adds the least volume
(or surface area), working on the polar dual where halfspaces become
vertices.  The simplified hull always contains the input.
"""

from .geometry import (
    Halfspace,
    Sign,
    bbox_diagonal,
    enclosed_volume,
    orient3,
    polygon_area_vector,
    signed_volume_contribution,
)
from .lp import ChebyshevResult, LpStatus, chebyshev_center, feasible_point
from .hull import (
    DegenerateInput,
    FacePlaneSet,
    PolyhedronMesh,
    RegionStatus,
    TriangulatedHull,
    convex_hull,
    face_planes,
    halfspace_intersection,
)
from .halfedge import (
    BoundaryMismatch,
    DeadVertex,
    EdgeConflict,
    HalfedgeHull,
    LocalTriangulation,
    MeshError,
    MinimalComplex,
    OneRing,
)
from .dual import (
    CenterOnBoundary,
    DualFacePlane,
    DualHull,
    NearInfinitePrimalVertex,
    build_dual_hull,
    extract_primal,
    from_dual,
    to_dual,
)
from .simplify import (
    RemovalRecord,
    SimplifiedHull,
    SimplifyConfig,
    TargetUnreachable,
    infinite_cost,
    removal_cost,
    retriangulate_one_ring,
    simplify,
)
from .baselines import (
    NonContainment,
    TightnessReport,
    canonical_directions_18,
    kdop_fit,
    tightness,
)
from .io import (
    ParseError,
    TooFewPoints,
    load_geometry,
    load_plane_list,
    load_run_config,
    run_config,
    write_outputs,
)

__version__ = "0.1.0"

__all__ = [
    "Halfspace",
    "Sign",
    "orient3",
    "signed_volume_contribution",
    "enclosed_volume",
    "polygon_area_vector",
    "bbox_diagonal",
    "ChebyshevResult",
    "LpStatus",
    "chebyshev_center",
    "feasible_point",
    "DegenerateInput",
    "FacePlaneSet",
    "PolyhedronMesh",
    "RegionStatus",
    "TriangulatedHull",
    "convex_hull",
    "face_planes",
    "halfspace_intersection",
    "BoundaryMismatch",
    "DeadVertex",
    "EdgeConflict",
    "HalfedgeHull",
    "LocalTriangulation",
    "MeshError",
    "MinimalComplex",
    "OneRing",
    "CenterOnBoundary",
    "DualFacePlane",
    "DualHull",
    "NearInfinitePrimalVertex",
    "build_dual_hull",
    "extract_primal",
    "from_dual",
    "to_dual",
    "RemovalRecord",
    "SimplifiedHull",
    "SimplifyConfig",
    "TargetUnreachable",
    "infinite_cost",
    "removal_cost",
    "retriangulate_one_ring",
    "simplify",
    "NonContainment",
    "TightnessReport",
    "canonical_directions_18",
    "kdop_fit",
    "tightness",
    "ParseError",
    "TooFewPoints",
    "load_geometry",
    "load_plane_list",
    "load_run_config",
    "run_config",
    "write_outputs",
    "__version__",
]
