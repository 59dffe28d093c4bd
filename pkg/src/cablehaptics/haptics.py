"""Virtual-material force models.

Each model maps an end-effector state (position, velocity, time) to the
desired 3D force handed to the tension solver. Models are evaluated at
discrete states and keep no internal state; time stepping belongs to the
caller. Standard haptic-rendering primitives cover the usual material
behaviors: attraction (Magnetic), stiffness (Spring), damping (Damper),
friction (Friction), vibration (Vibration), and their sums (Composite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import as_vec3

UNIT_NORM_TOL = 1e-9


def _unit(v, name: str) -> np.ndarray:
    arr = as_vec3(v).copy()
    if abs(np.linalg.norm(arr) - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"{name} must be a unit vector, got norm {np.linalg.norm(arr)}")
    arr.setflags(write=False)
    return arr


def _nonnegative(x: float, name: str) -> float:
    val = float(x)
    if not np.isfinite(val) or val < 0:
        raise ValueError(f"{name} must be finite and nonnegative, got {x}")
    return val


@dataclass(frozen=True)
class EndEffectorState:
    """Snapshot of the end effector: position (m), velocity (m/s), time (s).

    Time is expected to be non-decreasing across a session; each snapshot
    only validates its own fields.
    """

    position: np.ndarray
    velocity: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        pos = as_vec3(self.position).copy()
        vel = as_vec3(self.velocity).copy()
        pos.setflags(write=False)
        vel.setflags(write=False)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "velocity", vel)
        if not np.isfinite(self.time):
            raise ValueError("time must be finite")


@dataclass(frozen=True)
class Magnetic:
    """Attraction toward a target point: gain newtons per meter of distance,
    capped at max_force."""

    target: np.ndarray
    gain: float
    max_force: float

    def __post_init__(self):
        target = as_vec3(self.target).copy()
        target.setflags(write=False)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "gain", _nonnegative(self.gain, "gain"))
        object.__setattr__(self, "max_force", _nonnegative(self.max_force, "max_force"))

    def force(self, state: EndEffectorState) -> np.ndarray:
        offset = self.target - state.position
        dist = float(np.linalg.norm(offset))
        if dist <= 1e-12:
            return np.zeros(3)
        return min(self.gain * dist, self.max_force) * (offset / dist)


@dataclass(frozen=True)
class Spring:
    """One-sided penalty spring against a plane: pushes along the normal
    with stiffness * penetration depth, zero when not penetrating."""

    surface_point: np.ndarray
    normal: np.ndarray
    stiffness: float

    def __post_init__(self):
        sp = as_vec3(self.surface_point).copy()
        sp.setflags(write=False)
        object.__setattr__(self, "surface_point", sp)
        object.__setattr__(self, "normal", _unit(self.normal, "normal"))
        object.__setattr__(self, "stiffness", _nonnegative(self.stiffness, "stiffness"))

    def force(self, state: EndEffectorState) -> np.ndarray:
        depth = -float(np.dot(state.position - self.surface_point, self.normal))
        if depth <= 0.0:
            return np.zeros(3)
        return self.stiffness * depth * self.normal


@dataclass(frozen=True)
class Damper:
    """Viscous resistance: f = -coefficient * velocity."""

    coefficient: float

    def __post_init__(self):
        object.__setattr__(
            self, "coefficient", _nonnegative(self.coefficient, "coefficient")
        )

    def force(self, state: EndEffectorState) -> np.ndarray:
        return -self.coefficient * state.velocity


@dataclass(frozen=True)
class Friction:
    """Velocity-proportional resistance within a tangent plane, capped at
    max_force. Velocity along the plane normal is ignored."""

    coefficient: float
    max_force: float
    tangent_plane_normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficient", _nonnegative(self.coefficient, "coefficient")
        )
        object.__setattr__(self, "max_force", _nonnegative(self.max_force, "max_force"))
        object.__setattr__(
            self,
            "tangent_plane_normal",
            _unit(self.tangent_plane_normal, "tangent_plane_normal"),
        )

    def force(self, state: EndEffectorState) -> np.ndarray:
        n = self.tangent_plane_normal
        v_tangent = state.velocity - np.dot(state.velocity, n) * n
        f = -self.coefficient * v_tangent
        mag = float(np.linalg.norm(f))
        if mag > self.max_force:
            f = f * (self.max_force / mag)
        return f


@dataclass(frozen=True)
class Vibration:
    """Sinusoidal force along a fixed direction:
    amplitude * sin(2 pi frequency t) * direction."""

    amplitude: float
    frequency: float
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _nonnegative(self.amplitude, "amplitude"))
        object.__setattr__(self, "frequency", _nonnegative(self.frequency, "frequency"))
        object.__setattr__(self, "direction", _unit(self.direction, "direction"))

    def force(self, state: EndEffectorState) -> np.ndarray:
        return (
            self.amplitude
            * np.sin(2.0 * np.pi * self.frequency * state.time)
            * self.direction
        )


@dataclass(frozen=True)
class Composite:
    """Vector sum of child materials; order does not matter."""

    children: tuple["MaterialModel", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def force(self, state: EndEffectorState) -> np.ndarray:
        total = np.zeros(3)
        for child in self.children:
            total += child.force(state)
        return total


MaterialModel = Union[Magnetic, Spring, Damper, Friction, Vibration, Composite]


def evaluate(model: MaterialModel, state: EndEffectorState) -> np.ndarray:
    """Force (newtons) the material exerts on the end effector at ``state``."""
    return model.force(state)
