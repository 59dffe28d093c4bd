"""Force-sphere validation harness and its error metrics.

Replays the bench protocol against a plant model: command force vectors
spread over a sphere, hold each one, average the measured force over the
hold, and score angle and magnitude errors per sample. The Ideal plant
renders exactly what the solved tensions produce; the Noisy plant adds
per-tick Gaussian force noise, a fixed Z rotation between the sensor frame
and the module frame, and a constant tension bias.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateInput, ZeroVector
from .geometry import ModuleAnchor, ModuleLayout, StructureMatrix, as_vec3, structure_matrix
from .solver import (
    WRENCH_FEASIBLE_RESIDUAL,
    SolverConfig,
    TensionBounds,
    solve,
)

# Error statistics measured on a physical four-module rig with a calibrated
# force sensor, reported alongside simulated metrics for side-by-side
# comparison. The ideal simulation does not reproduce them; they reflect
# sensor mounting and rig effects, not the solver.
HARDWARE_REFERENCE = {
    "mean_angle_error_deg": 14.0,
    "mean_measured_magnitude_n": 1.84,
    "commanded_magnitude_n": 1.5,
    "mean_magnitude_error_n": 0.58,
    "angle_threshold_deg": 45.0,
}

VALIDATION_CSV_HEADER = (
    "cx",
    "cy",
    "cz",
    "mx",
    "my",
    "mz",
    "angle_err_deg",
    "mag_err_N",
    "feasible",
)


@dataclass(frozen=True)
class ValidationProtocol:
    """Sphere radius (N), sample count, hold time (s), and ticks per hold.

    Defaults replicate the bench protocol: 182 force vectors on a 1.5 N
    sphere, each held 1 s and averaged over a 1000 Hz sensor.
    """

    sphere_radius: float = 1.5
    sample_count: int = 182
    hold_duration: float = 1.0
    samples_per_hold: int = 1000

    def __post_init__(self):
        if not (np.isfinite(self.sphere_radius) and self.sphere_radius > 0):
            raise ValueError("sphere_radius must be positive")
        if self.sample_count < 1 or self.samples_per_hold < 1:
            raise ValueError("counts must be >= 1")
        if not (np.isfinite(self.hold_duration) and self.hold_duration > 0):
            raise ValueError("hold_duration must be positive")


@dataclass(frozen=True)
class IdealPlant:
    """Renders exactly the net force of the solved tensions."""

    def measure_hold(
        self, A: StructureMatrix, tensions: np.ndarray, ticks: int, sample_index: int
    ) -> np.ndarray:
        force = A.columns @ tensions
        # Averaging is a no-op here but keeps the code path identical to the
        # noisy plant.
        return np.broadcast_to(force, (ticks, 3)).mean(axis=0)


@dataclass(frozen=True)
class NoisyPlant:
    """Adds per-tick Gaussian force noise, a sensor-frame Z rotation, and a
    constant per-cable tension bias.

    Each hold draws from its own generator seeded with ``seed + sample
    index``, so runs are reproducible and independent of evaluation order.
    """

    force_noise_std: float = 0.0
    frame_rotation_z: float = 0.0
    tension_bias: float = 0.0
    seed: int = 42

    def __post_init__(self):
        values = (self.force_noise_std, self.frame_rotation_z, self.tension_bias)
        if not all(np.isfinite(v) for v in values):
            raise ValueError("noise parameters must be finite")
        if self.force_noise_std < 0:
            raise ValueError("force_noise_std must be >= 0")

    def measure_hold(
        self, A: StructureMatrix, tensions: np.ndarray, ticks: int, sample_index: int
    ) -> np.ndarray:
        true_force = rotation_z(self.frame_rotation_z) @ (
            A.columns @ (tensions + self.tension_bias)
        )
        rng = np.random.default_rng(self.seed + sample_index)
        draws = true_force + rng.normal(0.0, self.force_noise_std, size=(ticks, 3))
        return draws.mean(axis=0)


PlantModel = Union[IdealPlant, NoisyPlant]


@dataclass(frozen=True)
class SampleRecord:
    """One commanded force vs. the hold-averaged measurement."""

    commanded: np.ndarray
    measured: np.ndarray
    angle_error: float
    magnitude_error: float
    feasible: bool


@dataclass(frozen=True)
class ValidationReport:
    """Per-sample records plus the aggregate error statistics."""

    records: tuple[SampleRecord, ...]
    mean_angle_error: float
    max_angle_error: float
    mean_measured_magnitude: float
    mean_magnitude_error: float
    fraction_within_45deg: float


def sphere_samples(n: int, radius: float) -> np.ndarray:
    """n force vectors of the given norm spread near-uniformly over a sphere.

    Uses the deterministic Fibonacci lattice (golden-angle spiral), so the
    output is identical for identical (n, radius).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (np.isfinite(radius) and radius > 0):
        raise ValueError("radius must be positive")
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    ring = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    points = np.column_stack([ring * np.cos(phi), ring * np.sin(phi), z])
    points /= np.linalg.norm(points, axis=1)[:, None]
    return points * radius


def angle_error(a, b) -> float:
    """Angle in degrees between two force vectors, in [0, 180]."""
    av = as_vec3(a)
    bv = as_vec3(b)
    na = float(np.linalg.norm(av))
    nb = float(np.linalg.norm(bv))
    if na <= 1e-12 or nb <= 1e-12:
        raise ZeroVector("angle undefined for a (near-)zero vector")
    cosine = np.clip(np.dot(av, bv) / (na * nb), -1.0, 1.0)
    return float(np.degrees(np.arccos(cosine)))


def magnitude_error(a, b) -> float:
    """Absolute difference of the two vectors' norms, in newtons."""
    return float(abs(np.linalg.norm(as_vec3(a)) - np.linalg.norm(as_vec3(b))))


def rotation_z(theta: float) -> np.ndarray:
    """Rotation matrix about the Z axis by theta radians."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def align_z_rotation(desired_basis, measured_basis) -> float:
    """Z rotation (radians) minimizing sum_i ||Rz(theta) measured_i - desired_i||^2.

    Closed form over the XY components: with C = sum(dx*mx + dy*my) and
    S = sum(dy*mx - dx*my), the minimizer is atan2(S, C). Raises
    DegenerateInput when every vector's XY projection is (near) zero, since
    a Z rotation is then unobservable.
    """
    d = np.atleast_2d(np.asarray(desired_basis, dtype=float))
    m = np.atleast_2d(np.asarray(measured_basis, dtype=float))
    if d.shape != m.shape or d.shape[1] != 3 or d.shape[0] < 1:
        raise ValueError(f"basis shapes must match as (k, 3), got {d.shape} and {m.shape}")
    if np.any(np.linalg.norm(d, axis=1) <= 1e-12) or np.any(
        np.linalg.norm(m, axis=1) <= 1e-12
    ):
        raise ZeroVector("basis vectors must be nonzero")
    xy_norms = np.maximum(
        np.linalg.norm(d[:, :2], axis=1), np.linalg.norm(m[:, :2], axis=1)
    )
    if np.all(xy_norms <= 1e-9):
        raise DegenerateInput("all XY projections are ~0; Z rotation unobservable")
    c_sum = float(np.sum(d[:, 0] * m[:, 0] + d[:, 1] * m[:, 1]))
    s_sum = float(np.sum(d[:, 1] * m[:, 0] - d[:, 0] * m[:, 1]))
    return float(np.arctan2(s_sum, c_sum))


def default_validation_layout(
    triangle_circumradius: float = 1.0,
    bounds: TensionBounds | None = None,
) -> tuple[ModuleLayout, np.ndarray]:
    """The bench arrangement: three modules in an equilateral triangle on
    the floor, the end effector 0.3 m above the triangle's center, and a
    fourth module 2 m directly above the end effector.

    The circumradius is a default; pass your rig's value or load a layout
    file to match real hardware. Returns (layout, end-effector position).
    """
    angles = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    anchors = [
        ModuleAnchor(
            f"m{k + 1}",
            np.array(
                [
                    triangle_circumradius * np.cos(angles[k]),
                    triangle_circumradius * np.sin(angles[k]),
                    0.0,
                ]
            ),
        )
        for k in range(3)
    ]
    anchors.append(ModuleAnchor("m4", np.array([0.0, 0.0, 2.3])))
    layout = ModuleLayout(
        tuple(anchors), bounds if bounds is not None else TensionBounds()
    )
    return layout, np.array([0.0, 0.0, 0.3])


def run_validation(
    layout: ModuleLayout,
    ee,
    protocol: ValidationProtocol,
    plant: PlantModel,
    config: SolverConfig | None = None,
) -> ValidationReport:
    """Command every sphere sample, solve tensions, measure through the
    plant, and score each sample.

    A sample is marked feasible when the solve's force residual is within
    the wrench-feasibility threshold. If a plant ever returns a (near-)zero
    measured force, its angle error is recorded as 180 degrees.
    """
    A = structure_matrix(layout, ee)
    commanded = sphere_samples(protocol.sample_count, protocol.sphere_radius)
    records = []
    for index, force in enumerate(commanded):
        result = solve(A, force, layout.bounds, config)
        measured = plant.measure_hold(
            A, result.tensions, protocol.samples_per_hold, index
        )
        if np.linalg.norm(measured) <= 1e-12:
            angle = 180.0
        else:
            angle = angle_error(force, measured)
        records.append(
            SampleRecord(
                commanded=force,
                measured=measured,
                angle_error=angle,
                magnitude_error=magnitude_error(force, measured),
                feasible=result.force_residual <= WRENCH_FEASIBLE_RESIDUAL,
            )
        )

    angles = np.array([r.angle_error for r in records])
    return ValidationReport(
        records=tuple(records),
        mean_angle_error=float(np.mean(angles)),
        max_angle_error=float(np.max(angles)),
        mean_measured_magnitude=float(
            np.mean([np.linalg.norm(r.measured) for r in records])
        ),
        mean_magnitude_error=float(np.mean([r.magnitude_error for r in records])),
        fraction_within_45deg=float(np.mean(angles <= 45.0)),
    )


def write_report_csv(report: ValidationReport, path) -> None:
    """One CSV row per sample: commanded xyz, measured xyz, errors, feasible."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(VALIDATION_CSV_HEADER)
        for r in report.records:
            writer.writerow(
                [repr(float(v)) for v in r.commanded]
                + [repr(float(v)) for v in r.measured]
                + [repr(r.angle_error), repr(r.magnitude_error)]
                + ["true" if r.feasible else "false"]
            )


def report_summary(
    report: ValidationReport,
    protocol: ValidationProtocol,
    plant: PlantModel,
    layout: ModuleLayout,
    ee,
) -> dict:
    """JSON-ready summary: aggregates, protocol, plant, and layout echo,
    plus the hardware reference statistics for comparison."""
    if isinstance(plant, IdealPlant):
        plant_echo: dict = {"type": "ideal"}
    else:
        plant_echo = {
            "type": "noisy",
            "force_noise_std": plant.force_noise_std,
            "frame_rotation_z": plant.frame_rotation_z,
            "tension_bias": plant.tension_bias,
            "seed": plant.seed,
        }
    if isinstance(layout.bounds, TensionBounds):
        bounds_echo: object = {"t_min": layout.bounds.t_min, "t_max": layout.bounds.t_max}
    else:
        bounds_echo = [{"t_min": b.t_min, "t_max": b.t_max} for b in layout.bounds]
    return {
        "aggregates": {
            "mean_angle_error_deg": report.mean_angle_error,
            "max_angle_error_deg": report.max_angle_error,
            "mean_measured_magnitude_n": report.mean_measured_magnitude,
            "mean_magnitude_error_n": report.mean_magnitude_error,
            "fraction_within_45deg": report.fraction_within_45deg,
            "sample_count": len(report.records),
            "feasible_count": sum(1 for r in report.records if r.feasible),
        },
        "hardware_reference": dict(HARDWARE_REFERENCE),
        "protocol": {
            "sphere_radius_n": protocol.sphere_radius,
            "sample_count": protocol.sample_count,
            "hold_duration_s": protocol.hold_duration,
            "samples_per_hold": protocol.samples_per_hold,
        },
        "plant": plant_echo,
        "layout": {
            "anchors": [
                {"id": a.id, "position": list(a.position)} for a in layout.anchors
            ],
            "bounds": bounds_echo,
            "end_effector": list(as_vec3(ee)),
        },
    }


def write_report_json(summary: dict, path) -> None:
    with open(path, "w") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")
