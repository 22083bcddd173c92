"""Small fixed-dimension linear programs over halfspace systems.

Two entry points: ``feasible_point`` finds any point satisfying
``n_i . x + b_i <= 0`` for all i, and ``chebyshev_center`` finds the center
and radius of the largest inscribed ball, the anchor point for the polar
dualization used throughout the package.

The Chebyshev problem is solved as a 4-variable LP over ``(c, r)``::

    maximize r  subject to  n_i . c + |n_i| r <= -b_i,  r >= 0

bounded inside a large box (1e12 times the input scale).  Because the
simplex solver returns a vertex of the boxed feasible set, a radius that
reaches the box certifies that the region contains arbitrarily large balls
(Unbounded).  A degenerate optimal face can also park the *center* on the
box even when the radius is finite; a second LP then picks the minimum
max-norm center on that face so callers always get a sane anchor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .geometry import halfspace_arrays

__all__ = ["LpStatus", "LpOutcome", "ChebyshevResult", "feasible_point", "chebyshev_center"]

_BOX_FACTOR = 1e12
_SOLVER_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}
# Radius below this fraction of the input scale triggers a degeneracy
# warning: the region is (nearly) flat and dualization about its center
# will be ill-conditioned.
THIN_REGION_WARNING = 1e-7


class LpStatus(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    """Result of a feasibility solve: a status and, when feasible, a witness."""

    status: LpStatus
    witness: np.ndarray | None = None


@dataclass(frozen=True)
class ChebyshevResult:
    """Center and radius of the largest ball inscribed in the region."""

    center: np.ndarray
    radius: float


def _problem_scale(N: np.ndarray, b: np.ndarray) -> float:
    norms = np.linalg.norm(N, axis=1)
    return 1.0 + float(np.max(np.abs(b) / norms, initial=0.0))


def _solve_boxed_chebyshev(N, b, norms, box):
    A = np.hstack([N, norms[:, None]])
    res = linprog(
        c=[0.0, 0.0, 0.0, -1.0],
        A_ub=A,
        b_ub=-b,
        bounds=[(-box, box)] * 3 + [(0.0, box)],
        method="highs-ds",
        options=_SOLVER_OPTIONS,
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise RuntimeError(f"LP solver failed with status {res.status}: {res.message}")

    cx = res.x[:3]
    r = float(res.x[3])
    if r >= 0.5 * box:
        return LpStatus.UNBOUNDED

    if np.max(np.abs(cx)) >= 0.01 * box:
        # The optimal face is unbounded in c: re-solve for the minimum
        # max-norm center at (essentially) the optimal radius.
        m = len(b)
        A2 = np.zeros((m + 6, 5))
        A2[:m, :4] = A
        for k in range(3):
            A2[m + 2 * k, k] = 1.0
            A2[m + 2 * k, 4] = -1.0
            A2[m + 2 * k + 1, k] = -1.0
            A2[m + 2 * k + 1, 4] = -1.0
        b2 = np.concatenate([-b, np.zeros(6)])
        res = linprog(
            c=[0.0, 0.0, 0.0, 0.0, 1.0],
            A_ub=A2,
            b_ub=b2,
            bounds=[(-box, box)] * 3 + [(r * (1.0 - 1e-12), box), (0.0, None)],
            method="highs-ds",
            options=_SOLVER_OPTIONS,
        )
        if res.status == 0:
            cx = res.x[:3]

    # Recompute the radius the returned center actually supports, making
    # the reported pair self-consistent to machine precision.
    slack = (-b - N @ cx) / norms
    r_fit = max(0.0, float(np.min(slack)))
    return ChebyshevResult(center=np.asarray(cx, dtype=np.float64), radius=r_fit)


def chebyshev_center(halfspaces):
    """Largest inscribed ball of ``{x : n_i . x + b_i <= 0}``.

    Returns a ChebyshevResult, or LpStatus.INFEASIBLE when the region is
    empty, or LpStatus.UNBOUNDED when it contains balls of arbitrary radius.
    Flat regions (positive measure zero) come back with radius 0.  A warning
    is emitted for suspiciously thin regions (radius below 1e-7 times the
    input scale) because downstream dualization will be ill-conditioned.
    """
    N, b = halfspace_arrays(halfspaces)
    if len(N) == 0:
        return LpStatus.UNBOUNDED
    norms = np.linalg.norm(N, axis=1)
    scale = _problem_scale(N, b)
    outcome = _solve_boxed_chebyshev(N, b, norms, _BOX_FACTOR * scale)
    if outcome is None:
        return LpStatus.INFEASIBLE
    if outcome is LpStatus.UNBOUNDED:
        return outcome
    if 0.0 < outcome.radius < THIN_REGION_WARNING * scale:
        warnings.warn(
            f"inscribed radius {outcome.radius:.3e} is tiny relative to the input "
            f"scale {scale:.3e}; the region is nearly flat",
            stacklevel=2,
        )
    return outcome


def feasible_point(halfspaces) -> LpOutcome:
    """Find a point satisfying every halfspace, or report infeasibility.

    Solves for the minimum max-norm feasible point, which is always a
    bounded problem: the outcome is never UNBOUNDED, since a region
    unbounded in extent still has (finite) feasible points.
    """
    N, b = halfspace_arrays(halfspaces)
    if len(N) == 0:
        return LpOutcome(LpStatus.FEASIBLE, np.zeros(3))
    m = len(b)
    box = _BOX_FACTOR * _problem_scale(N, b)
    # variables (x, t): minimize t  s.t.  N x <= -b,  |x_k| <= t
    A = np.zeros((m + 6, 4))
    A[:m, :3] = N
    for k in range(3):
        A[m + 2 * k, k] = 1.0
        A[m + 2 * k, 3] = -1.0
        A[m + 2 * k + 1, k] = -1.0
        A[m + 2 * k + 1, 3] = -1.0
    rhs = np.concatenate([-b, np.zeros(6)])
    res = linprog(
        c=[0.0, 0.0, 0.0, 1.0],
        A_ub=A,
        b_ub=rhs,
        bounds=[(-box, box)] * 3 + [(0.0, None)],
        method="highs-ds",
        options=_SOLVER_OPTIONS,
    )
    if res.status == 2:
        return LpOutcome(LpStatus.INFEASIBLE)
    if res.status != 0:
        raise RuntimeError(f"LP solver failed with status {res.status}: {res.message}")
    return LpOutcome(LpStatus.FEASIBLE, np.asarray(res.x[:3], dtype=np.float64))
