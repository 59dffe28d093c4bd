"""Bounded tension distribution via Dykstra's alternating projections.

The core problem: find cable tensions t in the box [t_min, t_max]^m whose
net pull A @ t equals a desired force f, where the columns of A are unit
cable directions. Cables only pull, so t is never allowed outside the box.
Dykstra's algorithm projects alternately onto the box and onto the affine
equilibrium set {t : A t = f}, with a correction term on the box side, and
converges to the Euclidean projection of the start point onto their
intersection. When the intersection is empty it converges to the box point
nearest the equilibrium set, which renders the nearest reachable force.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

if TYPE_CHECKING:
    from .geometry import StructureMatrix

# Relative singular-value cutoff shared by the pseudoinverse and rank checks.
RANK_REL_TOL = 1e-9

# Residual (newtons) below which a desired force counts as wrench-feasible.
WRENCH_FEASIBLE_RESIDUAL = 1e-7


class SolveStatus(Enum):
    """Outcome of a tension solve, in decreasing order of success."""

    FEASIBLE_EXACT = "feasible_exact"
    NEAREST_FEASIBLE = "nearest_feasible"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class TensionBounds:
    """Allowable tension range for a cable, in newtons.

    Defaults are the hardware limits of one module: 0.5 N keeps the cable
    taut, 6.0 N is the motor's maximum steady-state pull.
    """

    t_min: float = 0.5
    t_max: float = 6.0

    def __post_init__(self):
        if not (np.isfinite(self.t_min) and np.isfinite(self.t_max)):
            raise ValueError("tension bounds must be finite")
        if not 0.0 <= self.t_min < self.t_max:
            raise ValueError(
                f"need 0 <= t_min < t_max, got [{self.t_min}, {self.t_max}]"
            )


BoundsLike = Union[TensionBounds, Sequence[TensionBounds]]


@dataclass(frozen=True)
class SolverConfig:
    """Iteration limits and start point for the Dykstra solve.

    ``start=None`` selects the minimum-tension start (t_min on every cable),
    so the feasible solution returned is the one closest to the lowest
    allowed tensions, minimizing energy use. Pass an explicit vector to
    project a custom start instead.

    The iteration cap leaves ample headroom: most solves converge within a
    few hundred sweeps, but near-degenerate active sets (a bound face almost
    parallel to the equilibrium set) contract slowly and can need tens of
    thousands. Sweeps are O(m) flops, so the cap stays cheap.
    """

    max_iterations: int = 50000
    tolerance: float = 1e-8
    start: np.ndarray | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (np.isfinite(self.tolerance) and self.tolerance > 0):
            raise ValueError("tolerance must be positive")
        if self.start is not None:
            arr = np.asarray(self.start, dtype=float)
            if arr.ndim != 1 or not np.all(np.isfinite(arr)):
                raise ValueError("start must be a finite 1-d tension vector")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "start", arr)


@dataclass(frozen=True)
class SolveResult:
    """Tensions plus the force they actually render and solve diagnostics.

    ``tensions`` is always box-feasible, whatever the status. ``force_residual``
    is ||A t - f_desired|| in newtons.
    """

    tensions: np.ndarray
    rendered_force: np.ndarray
    force_residual: float
    status: SolveStatus
    iterations: int


def _matrix(A) -> np.ndarray:
    """Accept a StructureMatrix or a plain (3, m) array of unit columns."""
    M = np.asarray(getattr(A, "columns", A), dtype=float)
    if M.ndim != 2 or M.shape[0] != 3 or M.shape[1] < 1:
        raise ValueError(f"expected a 3 x m structure matrix, got shape {M.shape}")
    return M


def _force(f) -> np.ndarray:
    arr = np.asarray(f, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"desired force must be a finite 3-vector, got {f!r}")
    return arr


def _bound_arrays(bounds: BoundsLike, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Expand shared or per-cable bounds into (lo, hi) arrays of length m."""
    if isinstance(bounds, TensionBounds):
        return np.full(m, bounds.t_min), np.full(m, bounds.t_max)
    per_cable = tuple(bounds)
    if len(per_cable) != m:
        raise ValueError(f"got {len(per_cable)} per-cable bounds for {m} cables")
    lo = np.array([b.t_min for b in per_cable])
    hi = np.array([b.t_max for b in per_cable])
    return lo, hi


def project_box(t, bounds: BoundsLike) -> np.ndarray:
    """Clamp each tension into its allowable range. Idempotent."""
    arr = np.asarray(t, dtype=float)
    lo, hi = _bound_arrays(bounds, arr.shape[-1])
    return np.clip(arr, lo, hi)


def _equilibrium_operator(M: np.ndarray) -> np.ndarray:
    """Precompute A^T (A A^T)^+ for repeated projections with A fixed.

    The SVD-based pseudoinverse (cutoff 1e-9 relative to the largest
    singular value) keeps the projection defined at rank-deficient
    geometries, where the target becomes {t : A t = P_range(A) f}.
    """
    return M.T @ np.linalg.pinv(M @ M.T, rcond=RANK_REL_TOL)


def project_equilibrium(t, A: StructureMatrix | np.ndarray, f) -> np.ndarray:
    """Euclidean projection of t onto the equilibrium set {t : A t = f}.

    If f is outside the column space of A (possible only when A is
    rank-deficient), the projection targets the nearest consistent
    right-hand side, i.e. f projected onto range(A).
    """
    M = _matrix(A)
    arr = np.asarray(t, dtype=float)
    op = _equilibrium_operator(M)
    return arr - op @ (M @ arr - _force(f))


def null_space_basis(A: StructureMatrix | np.ndarray) -> np.ndarray:
    """Orthonormal basis of {v : A v = 0}, one row per basis vector.

    These are the internal tension redistributions that leave the rendered
    force unchanged; the returned array has shape (m - rank, m).
    """
    M = _matrix(A)
    _, sv, vt = np.linalg.svd(M)
    rank = int(np.sum(sv > RANK_REL_TOL * sv[0])) if sv[0] > 0 else 0
    return vt[rank:]


def _is_nearest_box_point(x, d, lo, hi, tol) -> bool:
    """First-order optimality of x for: minimize distance(t, equilibrium set)
    over the box, where d = P_eq(x) - x is the negative gradient direction.

    The condition is exact for this convex problem: at a lower bound the
    descent direction must not point back into the box (d <= tol), at an
    upper bound it must not point below (d >= -tol), and free components
    must be stationary (|d| <= tol). During Dykstra correction-drain
    plateaus, where the iterate sits still for many sweeps while the box
    correction unwinds, the component about to be released violates the
    condition, so the solve correctly keeps iterating instead of stopping
    at a non-optimal point.

    Callers pass tol an order below the solve tolerance: then a feasible
    problem always reaches force_residual <= tolerance (and the exact
    status) before this certificate can fire, since residual <= m * |d|_inf
    for unit columns, while a truly infeasible problem still certifies with
    margin equal to the box-to-subspace gap.
    """
    at_lo = x <= lo
    at_hi = x >= hi
    free = ~(at_lo | at_hi)
    if np.any(d[at_lo] > tol):
        return False
    if np.any(d[at_hi] < -tol):
        return False
    return not np.any(np.abs(d[free]) > tol)


def solve(
    A: StructureMatrix | np.ndarray,
    f,
    bounds: BoundsLike,
    config: SolverConfig | None = None,
) -> SolveResult:
    """Compute box-feasible cable tensions rendering the desired force f.

    Runs Dykstra's alternating projections between the equilibrium set
    {t : A t = f} and the tension box, keeping the correction term for the
    box only (projections onto an affine set need none). Starting from the
    configured start point (default: t_min on every cable):

    * intersection nonempty -> the Euclidean projection of the start point
      onto the intersection, status FEASIBLE_EXACT once the force residual
      drops to the tolerance;
    * intersection empty -> the box point nearest the equilibrium set,
      status NEAREST_FEASIBLE, so the nearest reachable force is rendered;
    * otherwise ITERATION_CAP after max_iterations.

    The returned tensions are taken after a box projection and are therefore
    always within bounds, whatever the status.
    """
    cfg = config if config is not None else SolverConfig()
    M = _matrix(A)
    m = M.shape[1]
    fvec = _force(f)
    lo, hi = _bound_arrays(bounds, m)
    tol = cfg.tolerance

    op = _equilibrium_operator(M)

    def project_eq(t):
        return t - op @ (M @ t - fvec)

    if cfg.start is None:
        x = lo.copy()
    else:
        if cfg.start.shape != (m,):
            raise ValueError(f"start has {cfg.start.shape[0]} entries for {m} cables")
        x = cfg.start.copy()

    correction = np.zeros(m)
    status = SolveStatus.ITERATION_CAP
    iterations = cfg.max_iterations
    for k in range(1, cfg.max_iterations + 1):
        y = project_eq(x)
        shifted = y + correction
        x_new = np.clip(shifted, lo, hi)
        correction = shifted - x_new
        displacement = np.max(np.abs(x_new - x))
        x = x_new
        if displacement <= tol:
            residual = float(np.linalg.norm(M @ x - fvec))
            if residual <= tol:
                status = SolveStatus.FEASIBLE_EXACT
                iterations = k
                break
            if _is_nearest_box_point(x, project_eq(x) - x, lo, hi, tol * 0.1):
                status = SolveStatus.NEAREST_FEASIBLE
                iterations = k
                break

    rendered = M @ x
    x.setflags(write=False)
    rendered.setflags(write=False)
    return SolveResult(
        tensions=x,
        rendered_force=rendered,
        force_residual=float(np.linalg.norm(rendered - fvec)),
        status=status,
        iterations=iterations,
    )


def is_wrench_feasible(
    A: StructureMatrix | np.ndarray,
    f,
    bounds: BoundsLike,
    config: SolverConfig | None = None,
) -> bool:
    """True when some box-feasible tension vector renders f within 1e-7 N."""
    return solve(A, f, bounds, config).force_residual <= WRENCH_FEASIBLE_RESIDUAL
