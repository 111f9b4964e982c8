"""Scripted modal-teleoperation emulator producing ground-truth demonstrations.

A kinematic end-effector is driven toward scene waypoints by a greedy
per-dimension proportional controller that only commands dimensions exposed
by the current control mode, cycling modes (and emitting the transient
samples segmentation must filter) whenever the active dimensions converge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rotations
from .errors import UnreachableWaypoint
from .model import (
    GRIPPER_DIM,
    MOTION_DIMS,
    NUM_DIMS,
    Demonstration,
    InterfaceSpec,
    TrajectoryPoint,
    mask_dims,
)

_MAX_TOTAL_SAMPLES = 500_000


@dataclass(frozen=True)
class Sphere:
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def distance(self, p) -> float:
        d = math.dist(p, self.center) - self.radius
        return max(d, 0.0)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by center and half extents."""

    center: tuple
    half_extents: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "half_extents", tuple(float(v) for v in self.half_extents))

    def distance(self, p) -> float:
        q = [abs(p[i] - self.center[i]) - self.half_extents[i] for i in range(3)]
        outside = math.sqrt(sum(max(v, 0.0) ** 2 for v in q))
        return max(outside, 0.0)


@dataclass(frozen=True)
class Waypoint:
    """A pose target plus optional gripper action and tolerance override."""

    pos: tuple
    quat: tuple = None  # None keeps the orientation held at waypoint entry
    gripper: float = None  # target aperture, None leaves the gripper alone
    tol: float = None  # per-dim stopping tolerance override

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(float(v) for v in self.pos))
        if self.quat is not None:
            object.__setattr__(self, "quat", tuple(float(v) for v in self.quat))
        if self.gripper is not None:
            object.__setattr__(self, "gripper", float(self.gripper))
        if self.tol is not None:
            object.__setattr__(self, "tol", float(self.tol))


@dataclass(frozen=True)
class StartState:
    pos: tuple = (0.0, 0.0, 0.2)
    quat: tuple = (1.0, 0.0, 0.0, 0.0)
    gripper: float = 1.0


@dataclass(frozen=True)
class Scene:
    """Obstacles, waypoint script, and workspace for one task."""

    name: str
    waypoints: tuple
    obstacles: tuple = ()
    start: StartState = field(default_factory=StartState)
    workspace_min: tuple = (-1.0, -1.0, -0.05)
    workspace_max: tuple = (1.0, 1.0, 1.0)
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "workspace_min", tuple(float(v) for v in self.workspace_min))
        object.__setattr__(self, "workspace_max", tuple(float(v) for v in self.workspace_max))
        if not self.waypoints:
            raise ValueError("scene needs at least one waypoint")
        for wp in self.waypoints:
            for i in range(3):
                if not self.workspace_min[i] <= wp.pos[i] <= self.workspace_max[i]:
                    raise ValueError(f"waypoint {wp.pos} outside workspace")

    def obstacle_distance(self, p) -> float:
        """Exact distance from a point to the nearest obstacle surface."""
        if not self.obstacles:
            return math.inf
        return min(ob.distance(p) for ob in self.obstacles)


@dataclass(frozen=True)
class DemonstratorPolicy:
    """Behavioral parameters of the scripted demonstrator."""

    max_lin_speed: float = 0.15  # m/s
    max_ang_speed: float = 0.6  # rad/s
    mode_switch_duration: float = 0.01  # seconds dwelt per intermediate mode
    stop_tol: float = 1e-3  # per-dim stopping tolerance (m / rad / aperture)
    dim_order: tuple = (0, 1, 2, 3, 4, 5, 6)  # preference when picking the next mode
    gripper_rate: float = 0.8  # aperture units per second
    response_tau: float = 0.15  # proportional-control time constant, seconds
    min_cmd_speed: float = 0.0  # interface deadband; 0 disables
    stall_horizon: int = 400  # samples without progress before giving up
    sequential_dims: bool = False  # move one dim at a time even within a mode
    vel_jitter: float = 0.0  # relative velocity noise amplitude; 0 disables

    def __post_init__(self):
        if self.max_lin_speed <= 0 or self.max_ang_speed <= 0 or self.gripper_rate <= 0:
            raise ValueError("speeds must be positive")
        if self.stop_tol <= 0:
            raise ValueError("stop_tol must be positive")
        object.__setattr__(self, "dim_order", tuple(self.dim_order))
        if sorted(self.dim_order) != list(range(NUM_DIMS)):
            raise ValueError("dim_order must be a permutation of all dimensions")


def _errors(pos, quat, grip, wp, held_quat):
    """Per-dimension error vector (3 linear, 3 angular, 1 gripper)."""
    err = np.zeros(NUM_DIMS)
    err[0:3] = np.asarray(wp.pos) - pos
    target_q = np.asarray(wp.quat) if wp.quat is not None else held_quat
    err[3:6] = rotations.to_rotvec(rotations.multiply(target_q, rotations.conjugate(quat)))
    if wp.gripper is not None:
        err[GRIPPER_DIM] = wp.gripper - grip
    return err


def _cycle_path(cur, target, n):
    """Mode indices visited when cycling cur -> target, excluding both ends."""
    fwd = (target - cur) % n
    back = (cur - target) % n
    step = 1 if fwd <= back else -1
    out = []
    m = cur
    while True:
        m = (m + step) % n
        if m == target:
            return out
        out.append(m)


def generate_demo(
    scene: Scene,
    policy: DemonstratorPolicy,
    spec: InterfaceSpec,
    dt: float = 0.01,
    seed: int = 0,
) -> Demonstration:
    """Emulate one teleoperated demonstration of the scene.

    Deterministic for a fixed seed; the seed only feeds the optional
    velocity jitter. Raises UnreachableWaypoint when the controller stalls.
    """
    rng = np.random.default_rng(seed)
    pos = np.asarray(scene.start.pos, dtype=float).copy()
    quat = np.asarray(scene.start.quat, dtype=float).copy()
    grip = float(scene.start.gripper)
    ws_min = np.asarray(scene.workspace_min)
    ws_max = np.asarray(scene.workspace_max)

    points = []
    t_i = 0
    switch_samples = max(1, min(3, round(policy.mode_switch_duration / dt)))

    def emit(vel, mask):
        nonlocal t_i
        points.append(
            TrajectoryPoint(
                t=t_i * dt,
                pos=tuple(pos),
                quat=tuple(quat),
                vel=tuple(vel),
                gripper=grip,
                mask=mask,
                obstacle_dist=scene.obstacle_distance(pos),
            )
        )
        t_i += 1
        if t_i > _MAX_TOTAL_SAMPLES:
            raise UnreachableWaypoint("sample budget exhausted")

    mode_idx = None
    zeros6 = (0.0,) * MOTION_DIMS

    for wp_no, wp in enumerate(scene.waypoints):
        held_quat = quat.copy()
        tol = wp.tol if wp.tol is not None else policy.stop_tol
        best_err = math.inf
        stalled = 0
        while True:
            err = _errors(pos, quat, grip, wp, held_quat)
            unconverged = [d for d in policy.dim_order if abs(err[d]) > tol]
            if not unconverged:
                break

            total_err = float(np.linalg.norm(err))
            if total_err < best_err - 1e-12:
                best_err = total_err
                stalled = 0
            else:
                stalled += 1
                if stalled > policy.stall_horizon:
                    raise UnreachableWaypoint(
                        f"no progress toward waypoint {wp_no} for {stalled} samples"
                    )

            if mode_idx is None or not any(spec.modes[mode_idx][d] for d in unconverged):
                target = next(
                    i for i, m in enumerate(spec.modes) if m[unconverged[0]]
                )
                if mode_idx is not None and spec.switch_style == "cyclic":
                    for inter in _cycle_path(mode_idx, target, len(spec.modes)):
                        for _ in range(switch_samples):
                            emit(zeros6, spec.modes[inter])
                mode_idx = target
                continue

            mask = spec.modes[mode_idx]
            command = [d for d in unconverged if mask[d]]
            if policy.sequential_dims:
                command = command[:1]

            vel = np.zeros(MOTION_DIMS)
            grip_next = grip
            for d in command:
                if d == GRIPPER_DIM:
                    step = float(np.clip(err[d], -policy.gripper_rate * dt, policy.gripper_rate * dt))
                    grip_next = grip + step
                    continue
                vmax = policy.max_lin_speed if d < 3 else policy.max_ang_speed
                v = err[d] / policy.response_tau
                if policy.vel_jitter > 0.0:
                    v *= 1.0 + policy.vel_jitter * rng.standard_normal()
                v = float(np.clip(v, -vmax, vmax))
                if policy.min_cmd_speed > 0.0 and 0.0 < abs(v) < policy.min_cmd_speed:
                    v = math.copysign(policy.min_cmd_speed, v)
                vel[d] = v

            emit(tuple(vel), mask)
            pos = np.clip(pos + vel[0:3] * dt, ws_min, ws_max)
            if np.any(vel[3:6]):
                quat = rotations.normalize(
                    rotations.multiply(rotations.from_rotvec(vel[3:6] * dt), quat)
                )
            grip = grip_next

    if mode_idx is None:
        mode_idx = 0
    emit(zeros6, spec.modes[mode_idx])

    return Demonstration(points=tuple(points), dt=dt, interface=spec.name, task_label=scene.name)


def _rot_z(angle):
    return (math.cos(angle / 2.0), 0.0, 0.0, math.sin(angle / 2.0))


def builtin_scenes() -> list:
    """Named desk-scale task scenes with known scripted intent."""
    scenes = []

    scenes.append(
        Scene(
            name="translate-L",
            waypoints=(Waypoint(pos=(0.3, 0.3, 0.2)),),
            notes=(
                "Orthogonal two-leg move with equal legs; exercises interface "
                "constraints only (no obstacles, no gripper)."
            ),
        )
    )

    scenes.append(
        Scene(
            name="pick-place",
            waypoints=(
                Waypoint(pos=(0.25, 0.15, 0.2)),
                Waypoint(pos=(0.25, 0.15, 0.06)),
                Waypoint(pos=(0.25, 0.15, 0.06), gripper=0.0),
                Waypoint(pos=(0.25, 0.15, 0.24)),
                Waypoint(pos=(-0.15, 0.35, 0.24)),
                Waypoint(pos=(-0.15, 0.35, 0.08)),
                Waypoint(pos=(-0.15, 0.35, 0.08), gripper=1.0),
            ),
            notes=(
                "Approach, grasp, transport, release; exercises task "
                "constraints (two gripper actions)."
            ),
        )
    )

    scenes.append(
        Scene(
            name="corridor",
            waypoints=(
                Waypoint(pos=(0.5, 0.0, 0.2)),
                Waypoint(pos=(0.5, 0.25, 0.2)),
                Waypoint(pos=(0.75, 0.25, 0.2)),
            ),
            obstacles=(Sphere(center=(0.25, 0.07, 0.2), radius=0.04),),
            notes=(
                "First leg passes within the clearance threshold of a sphere; "
                "exercises environment constraints mid-path."
            ),
        )
    )

    scenes.append(
        Scene(
            name="peg",
            waypoints=(
                Waypoint(pos=(0.3, 0.15, 0.2)),
                Waypoint(pos=(0.3, 0.15, 0.2), quat=_rot_z(math.radians(30.0))),
                Waypoint(pos=(0.3, 0.15, 0.055), quat=_rot_z(math.radians(30.0)), tol=2e-4),
            ),
            obstacles=(Sphere(center=(0.3, 0.15, 0.02), radius=0.018),),
            notes=(
                "Yaw alignment then a low-tolerance final descent beside the "
                "hole; exercises rotation dims and environment constraints."
            ),
        )
    )

    return scenes


def get_scene(name: str) -> Scene:
    for s in builtin_scenes():
        if s.name == name:
            return s
    raise KeyError(f"unknown scene {name!r}")


def scripted_spans(scene: Scene, tol: float = 1e-9) -> list:
    """Motion dims the script commands, split at gripper actions.

    Returns one frozenset of motion dimension indices per span between
    gripper waypoints; ground truth for dimension-ceiling checks.
    """
    spans = []
    current = set()
    pos = np.asarray(scene.start.pos, dtype=float)
    quat = np.asarray(scene.start.quat, dtype=float)
    grip = scene.start.gripper
    for wp in scene.waypoints:
        delta = np.asarray(wp.pos) - pos
        for d in range(3):
            if abs(delta[d]) > tol:
                current.add(d)
        if wp.quat is not None:
            rot = rotations.to_rotvec(
                rotations.multiply(np.asarray(wp.quat), rotations.conjugate(quat))
            )
            for d in range(3):
                if abs(rot[d]) > tol:
                    current.add(3 + d)
            quat = np.asarray(wp.quat, dtype=float)
        pos = np.asarray(wp.pos, dtype=float)
        if wp.gripper is not None and abs(wp.gripper - grip) > tol:
            spans.append(frozenset(current))
            current = set()
            grip = wp.gripper
    spans.append(frozenset(current))
    return spans


def scripted_motion_dims(scene: Scene) -> frozenset:
    """All motion dims the scene's script ever commands."""
    out = set()
    for span in scripted_spans(scene):
        out |= span
    return frozenset(out)
