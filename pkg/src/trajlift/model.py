"""Demonstration data model, interface descriptors, and ingest validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

NUM_DIMS = 7
MOTION_DIMS = 6
GRIPPER_DIM = 6
DIM_LABELS = ("vx", "vy", "vz", "wx", "wy", "wz", "g")

QUAT_NORM_TOL = 1e-9


def _mask_tuple(bits) -> tuple:
    bits = tuple(bool(b) for b in bits)
    if len(bits) != NUM_DIMS:
        raise ValueError(f"mode mask must have {NUM_DIMS} entries, got {len(bits)}")
    return bits


def mask_from_dims(dims) -> tuple:
    """Mode mask with the given dimension indices set."""
    dims = set(dims)
    return tuple(d in dims for d in range(NUM_DIMS))


def mask_dims(mask) -> frozenset:
    return frozenset(d for d, on in enumerate(mask) if on)


@dataclass(frozen=True)
class TrajectoryPoint:
    """One demonstration timestep: robot state, mode mask, world state."""

    t: float
    pos: tuple  # (x, y, z) meters
    quat: tuple  # (w, x, y, z) unit quaternion
    vel: tuple  # (vx, vy, vz, wx, wy, wz) commanded, m/s and rad/s
    gripper: float  # aperture in [0, 1]
    mask: tuple  # 7 mode bits, gripper last
    obstacle_dist: float  # meters to nearest obstacle surface

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "pos", tuple(float(v) for v in self.pos))
        object.__setattr__(self, "quat", tuple(float(v) for v in self.quat))
        object.__setattr__(self, "vel", tuple(float(v) for v in self.vel))
        object.__setattr__(self, "gripper", float(self.gripper))
        object.__setattr__(self, "mask", _mask_tuple(self.mask))
        object.__setattr__(self, "obstacle_dist", float(self.obstacle_dist))
        if len(self.pos) != 3:
            raise ValueError("pos must have 3 components")
        if len(self.quat) != 4:
            raise ValueError("quat must have 4 components")
        if len(self.vel) != MOTION_DIMS:
            raise ValueError(f"vel must have {MOTION_DIMS} components")


@dataclass(frozen=True)
class Demonstration:
    """Temporally ordered trajectory recorded through one interface."""

    points: tuple
    dt: float
    interface: str
    task_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "dt", float(self.dt))

    def __len__(self):
        return len(self.points)

    @property
    def duration(self) -> float:
        return self.points[-1].t - self.points[0].t if self.points else 0.0


@dataclass(frozen=True)
class InterfaceSpec:
    """A control interface: dimensionality and its ordered mode table."""

    name: str
    l: int
    modes: tuple
    switch_style: str  # "cyclic" or "direct"

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(_mask_tuple(m) for m in self.modes))
        if self.l < 1:
            raise ValueError("interface dimensionality l must be >= 1")
        if self.switch_style not in ("cyclic", "direct"):
            raise ValueError(f"unknown switch_style {self.switch_style!r}")
        covered = set()
        for m in self.modes:
            on = mask_dims(m)
            if len(on) > self.l:
                raise ValueError(f"mode {m} activates {len(on)} dims, more than l={self.l}")
            covered |= on
        if covered != set(range(NUM_DIMS)):
            raise ValueError("union of modes must cover all control dimensions")

    def mode_of(self, mask) -> int:
        """Index of a mask in the mode table."""
        return self.modes.index(_mask_tuple(mask))


@dataclass(frozen=True)
class ReconstructionConfig:
    """Tunables shared across segmentation, constraints, and composition."""

    epsilon: int = 100  # minimum segment length, samples
    delta: float = 0.05  # obstacle clearance threshold, meters
    activation_vel_threshold: float = 1e-3  # fraction of max commanded speed
    warp: str = "linear"  # interpolation scheme for pose/velocity channels

    def __post_init__(self):
        if self.epsilon < 1:
            raise ValueError("epsilon must be >= 1 sample")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0.0 < self.activation_vel_threshold < 1.0:
            raise ValueError("activation_vel_threshold must be in (0, 1)")
        if self.warp != "linear":
            raise ValueError(f"unsupported warp scheme {self.warp!r}")


@dataclass(frozen=True)
class Violation:
    invariant: str
    index: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


class Channels(NamedTuple):
    """Column view of a point sequence, for numeric work."""

    t: np.ndarray  # (N,)
    pos: np.ndarray  # (N, 3)
    quat: np.ndarray  # (N, 4)
    vel: np.ndarray  # (N, 6)
    gripper: np.ndarray  # (N,)
    mask: np.ndarray  # (N, 7) bool
    obstacle_dist: np.ndarray  # (N,)


def as_channels(points: Sequence[TrajectoryPoint]) -> Channels:
    return Channels(
        t=np.array([p.t for p in points], dtype=float),
        pos=np.array([p.pos for p in points], dtype=float),
        quat=np.array([p.quat for p in points], dtype=float),
        vel=np.array([p.vel for p in points], dtype=float),
        gripper=np.array([p.gripper for p in points], dtype=float),
        mask=np.array([p.mask for p in points], dtype=bool),
        obstacle_dist=np.array([p.obstacle_dist for p in points], dtype=float),
    )


def points_from_channels(ch: Channels) -> tuple:
    return tuple(
        TrajectoryPoint(
            t=ch.t[i],
            pos=tuple(ch.pos[i]),
            quat=tuple(ch.quat[i]),
            vel=tuple(ch.vel[i]),
            gripper=ch.gripper[i],
            mask=tuple(ch.mask[i]),
            obstacle_dist=ch.obstacle_dist[i],
        )
        for i in range(len(ch.t))
    )


def validate_demonstration(demo: Demonstration, spec: InterfaceSpec) -> ValidationReport:
    """Check every ingest invariant; violations are report entries, not errors.

    Each violated invariant appears once, citing the first offending point.
    """
    violations = []

    def add(invariant, index, message):
        violations.append(Violation(invariant, index, message))

    pts = demo.points
    if not pts:
        add("nonempty", 0, "demonstration has no points")
        return ValidationReport(tuple(violations))

    for i in range(len(pts) - 1):
        if pts[i + 1].t <= pts[i].t:
            add("time_monotone", i + 1, f"t[{i + 1}]={pts[i + 1].t} does not increase")
            break
    for i in range(len(pts) - 1):
        gap = pts[i + 1].t - pts[i].t
        if abs(gap - demo.dt) > 0.5 * demo.dt:
            add("time_uniform", i + 1, f"gap {gap:.6g}s at index {i + 1} deviates from dt={demo.dt}")
            break
    for i, p in enumerate(pts):
        if sum(p.mask) > spec.l:
            add("mask_width", i, f"mask exceeds l: {sum(p.mask)} active dims > l={spec.l}")
            break
    for i, p in enumerate(pts):
        bad = [d for d in range(MOTION_DIMS) if p.vel[d] != 0.0 and not p.mask[d]]
        if bad:
            add("vel_mask", i, f"nonzero velocity in masked-out dim {DIM_LABELS[bad[0]]}")
            break
    for i, p in enumerate(pts):
        norm = sum(c * c for c in p.quat) ** 0.5
        if abs(norm - 1.0) > QUAT_NORM_TOL:
            add("quat_norm", i, f"quaternion norm {norm:.12f} is not 1")
            break
    for i, p in enumerate(pts):
        if not p.obstacle_dist >= 0.0:
            add("obstacle_dist", i, f"obstacle_dist {p.obstacle_dist} is negative")
            break
    return ValidationReport(tuple(violations))


def _sippuff() -> InterfaceSpec:
    return InterfaceSpec(
        name="sippuff1d",
        l=1,
        modes=tuple(mask_from_dims([d]) for d in range(NUM_DIMS)),
        switch_style="cyclic",
    )


def _joystick() -> InterfaceSpec:
    return InterfaceSpec(
        name="joystick2d",
        l=2,
        modes=(
            mask_from_dims([0, 1]),  # vx, vy
            mask_from_dims([2, 5]),  # vz, wz
            mask_from_dims([3, 4]),  # wx, wy
            mask_from_dims([6]),  # gripper
        ),
        switch_style="direct",
    )


_REGISTRY: dict = {}


def register_interface(spec: InterfaceSpec) -> None:
    """Make a user-defined interface available by name."""
    _REGISTRY[spec.name] = spec


def builtin_interfaces() -> list:
    """The two stock interfaces plus any registered ones."""
    return [_sippuff(), _joystick()] + list(_REGISTRY.values())


def get_interface(name: str) -> InterfaceSpec:
    for spec in builtin_interfaces():
        if spec.name == name:
            return spec
    raise KeyError(f"unknown interface {name!r}")
