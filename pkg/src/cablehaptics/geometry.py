"""Module anchor layouts, cable directions, and the structure matrix.

The cable model is ideal: a massless, inextensible, frictionless straight
line from the end effector to each anchor, pulling the end effector toward
the anchor. The end effector is a point, so the structure matrix maps m
cable tensions to a 3-DoF net force and nothing else (no torques).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometry
from .solver import RANK_REL_TOL, TensionBounds

# Anchors closer together than this are rejected as duplicates (meters).
COINCIDENT_ANCHOR_TOL = 1e-9

# The end effector must keep this distance from every anchor (meters);
# below it the cable direction is numerically meaningless.
DEGENERATE_EE_TOL = 1e-6


def as_vec3(v) -> np.ndarray:
    """Validate v as a finite 3-vector and return it as a float array."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"vector has non-finite components: {arr}")
    return arr


@dataclass(frozen=True)
class ModuleAnchor:
    """One cable module's anchor point in the world frame (meters)."""

    id: str
    position: np.ndarray

    def __post_init__(self):
        pos = as_vec3(self.position).copy()
        pos.setflags(write=False)
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True)
class ModuleLayout:
    """Ordered anchors plus tension bounds, shared or per module.

    ``bounds`` is a single TensionBounds applied to every cable, or a
    sequence with one entry per anchor.
    """

    anchors: tuple[ModuleAnchor, ...]
    bounds: TensionBounds | tuple[TensionBounds, ...] = field(
        default_factory=TensionBounds
    )

    def __post_init__(self):
        anchors = tuple(self.anchors)
        if not anchors:
            raise ValueError("a layout needs at least one anchor")
        ids = [a.id for a in anchors]
        if len(set(ids)) != len(ids):
            raise ValueError(f"anchor ids must be unique, got {ids}")
        for i in range(len(anchors)):
            for j in range(i + 1, len(anchors)):
                gap = np.linalg.norm(anchors[i].position - anchors[j].position)
                if gap <= COINCIDENT_ANCHOR_TOL:
                    raise ValueError(
                        f"anchors {ids[i]!r} and {ids[j]!r} coincide ({gap:.1e} m apart)"
                    )
        object.__setattr__(self, "anchors", anchors)
        if not isinstance(self.bounds, TensionBounds):
            per_cable = tuple(self.bounds)
            if len(per_cable) != len(anchors):
                raise ValueError(
                    f"got {len(per_cable)} per-module bounds for {len(anchors)} anchors"
                )
            object.__setattr__(self, "bounds", per_cable)

    def __len__(self) -> int:
        return len(self.anchors)

    @property
    def anchor_positions(self) -> np.ndarray:
        """Anchor positions stacked as an (m, 3) array."""
        return np.array([a.position for a in self.anchors])


@dataclass(frozen=True)
class StructureMatrix:
    """3 x m matrix whose columns are unit vectors from the end effector
    toward each anchor; A @ t is the net force the tensions t exert."""

    columns: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[0] != 3 or cols.shape[1] < 1:
            raise ValueError(f"expected shape (3, m), got {cols.shape}")
        norms = np.linalg.norm(cols, axis=0)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError(f"columns must be unit vectors, norms {norms}")
        cols = cols.copy()
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @property
    def m(self) -> int:
        """Number of cables."""
        return self.columns.shape[1]


def cable_directions(layout: ModuleLayout, ee) -> np.ndarray:
    """Unit direction from the end effector toward each anchor, one per row.

    Raises DegenerateGeometry when the end effector sits within 1e-6 m of
    an anchor.
    """
    p = as_vec3(ee)
    offsets = layout.anchor_positions - p
    norms = np.linalg.norm(offsets, axis=1)
    if np.any(norms <= DEGENERATE_EE_TOL):
        bad = layout.anchors[int(np.argmin(norms))].id
        raise DegenerateGeometry(
            f"end effector within {DEGENERATE_EE_TOL} m of anchor {bad!r}"
        )
    return offsets / norms[:, None]


def structure_matrix(layout: ModuleLayout, ee) -> StructureMatrix:
    """Build the structure matrix for a layout at an end-effector position."""
    return StructureMatrix(cable_directions(layout, ee).T)


def actuation_rank(A: StructureMatrix) -> int:
    """Numerical rank of the structure matrix (cutoff 1e-9 relative to the
    largest singular value). Rank 3 with m >= 4 positively spanning columns
    means the system is redundantly actuated."""
    sv = np.linalg.svd(A.columns, compute_uv=False)
    if sv[0] <= 0.0:
        return 0
    return int(np.sum(sv > RANK_REL_TOL * sv[0]))
