"""Time warping and higher-dimensional segment composition."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import rotations
from .errors import ConstraintViolation, DegenerateSegment, EmptyResult, OverlapError
from .model import (
    GRIPPER_DIM,
    MOTION_DIMS,
    Demonstration,
    InterfaceSpec,
    ReconstructionConfig,
    TrajectoryPoint,
    as_channels,
    mask_dims,
)
from .segmentation import Segment, segment_by_mode


def time_warp(seg: Segment, target_len: int) -> Segment:
    """Stretch a segment to target_len samples without reordering it.

    Translation, velocity, and obstacle-distance channels are resampled
    piecewise-linearly at uniform parameter values; orientation uses
    shortest-arc interpolation between neighboring quaternions; gripper and
    mask hold the nearest preceding sample. Timestamps keep the segment's
    sample period, so the warped duration grows with the length.
    """
    n = len(seg)
    if n < 2:
        raise DegenerateSegment(f"cannot warp a segment of {n} point(s)")
    if target_len < n:
        raise ValueError(f"target_len {target_len} shorter than segment ({n})")
    if target_len == n:
        return seg

    ch = as_channels(seg.points)
    m = target_len
    # source positions for each output sample; endpoints land exactly
    s = np.arange(m) * (n - 1) / (m - 1)
    lo = np.minimum(np.floor(s).astype(int), n - 2)
    frac = s - lo

    pos = ch.pos[lo] + (ch.pos[lo + 1] - ch.pos[lo]) * frac[:, None]
    vel = ch.vel[lo] + (ch.vel[lo + 1] - ch.vel[lo]) * frac[:, None]
    # obstacle distances may be infinite (no obstacles); inf - inf is nan
    d0, d1 = ch.obstacle_dist[lo], ch.obstacle_dist[lo + 1]
    with np.errstate(invalid="ignore"):
        dist = np.where(d0 == d1, d0, d0 + (d1 - d0) * frac)
    hold = np.floor(s).astype(int)
    gripper = ch.gripper[hold]
    mask = ch.mask[hold]

    quat = np.empty((m, 4))
    for i in range(m):
        if frac[i] == 0.0:
            quat[i] = ch.quat[lo[i]]
        else:
            quat[i] = rotations.slerp(ch.quat[lo[i]], ch.quat[lo[i] + 1], frac[i])

    step = (ch.t[-1] - ch.t[0]) / (n - 1)
    t = ch.t[0] + np.arange(m) * step

    points = tuple(
        TrajectoryPoint(
            t=t[i],
            pos=tuple(pos[i]),
            quat=tuple(quat[i]),
            vel=tuple(vel[i]),
            gripper=gripper[i],
            mask=tuple(mask[i]),
            obstacle_dist=dist[i],
        )
        for i in range(m)
    )
    return replace(seg, points=points)


def _union_mask(a, b):
    return tuple(x or y for x, y in zip(a, b))


def reconstruct_segments(s1: Segment, s2: Segment) -> Segment:
    """Compose two adjacent segments into one higher-dimensional segment.

    The shorter segment is warped to the longer's length; each dimension's
    trace comes from the segment that commands it (from s1 when neither
    does); obstacle distances reconcile by pointwise min; velocities are
    recomputed from the merged pose so the two stay consistent. Angular
    motion merges as per-axis accumulated rotation increments, so each
    axis's traveled rotation is preserved exactly.
    """
    if s1.active_dims & s2.active_dims:
        raise OverlapError(
            f"segments share active dims {sorted(s1.active_dims & s2.active_dims)}"
        )
    for s in (s1, s2):
        if s.env_constrained or s.task_constrained:
            raise ConstraintViolation("cannot compose a constrained segment")
        if len(s) < 2:
            raise DegenerateSegment("cannot compose a segment shorter than 2 points")

    m = max(len(s1), len(s2))
    w1 = time_warp(s1, m) if len(s1) < m else s1
    w2 = time_warp(s2, m) if len(s2) < m else s2
    c1 = as_channels(w1.points)
    c2 = as_channels(w2.points)

    owner2 = s2.active_dims  # every other dim defaults to s1

    pos = c1.pos.copy()
    for d in range(3):
        if d in owner2:
            pos[:, d] = c2.pos[:, d]

    inc1 = rotations.step_rotvecs(c1.quat)
    inc2 = rotations.step_rotvecs(c2.quat)
    inc = inc1.copy()
    for d in range(3):
        if 3 + d in owner2:
            inc[:, d] = inc2[:, d]
    quat = np.empty((m, 4))
    quat[0] = c1.quat[0]
    if np.any(inc):
        for i in range(m - 1):
            quat[i + 1] = rotations.normalize(
                rotations.multiply(rotations.from_rotvec(inc[i]), quat[i])
            )
    else:
        quat[1:] = quat[0]

    longer = s1 if len(s1) >= len(s2) else s2
    step = longer.duration / (m - 1)
    t = s1.points[0].t + np.arange(m) * step

    vel = np.zeros((m, MOTION_DIMS))
    vel[:-1, 0:3] = np.diff(pos, axis=0) / step
    vel[:-1, 3:6] = inc / step

    gripper = c1.gripper
    dist = np.minimum(c1.obstacle_dist, c2.obstacle_dist)
    mask = _union_mask(w1.mask, w2.mask)

    points = tuple(
        TrajectoryPoint(
            t=t[i],
            pos=tuple(pos[i]),
            quat=tuple(quat[i]),
            vel=tuple(vel[i]),
            gripper=gripper[i],
            mask=mask,
            obstacle_dist=dist[i],
        )
        for i in range(m)
    )
    return Segment(
        points=points,
        mask=mask,
        active_dims=s1.active_dims | s2.active_dims,
        env_constrained=False,
        task_constrained=False,
        provenance=s1.provenance + s2.provenance,
    )


@dataclass(frozen=True)
class ReconstructionResult:
    """Everything one pipeline run produced, for reporting and plots."""

    raw: Demonstration
    segments_before: tuple  # post-segmentation, constraint flags populated
    segments_after: tuple  # post-merging fixpoint
    reconstructed: Demonstration

    def __post_init__(self):
        object.__setattr__(self, "segments_before", tuple(self.segments_before))
        object.__setattr__(self, "segments_after", tuple(self.segments_after))


def stitch_segments(segments, dt: float, interface: str, task_label: str) -> Demonstration:
    """Concatenate segments into one demonstration re-based to t=0.

    Timestamps become a uniform dt grid, so discarded transients and
    artifacts leave no gaps.
    """
    points = []
    k = 0
    for seg in segments:
        for p in seg.points:
            points.append(replace(p, t=k * dt))
            k += 1
    return Demonstration(points=tuple(points), dt=dt, interface=interface, task_label=task_label)


def reconstruct_demo(
    demo: Demonstration,
    spec: InterfaceSpec = None,
    cfg: ReconstructionConfig = None,
) -> ReconstructionResult:
    """Full pipeline: segment, merge under constraints, stitch back together.

    When an interface spec is given the demo is validated against it first;
    pass spec=None for inputs that legitimately exceed an interface (e.g.
    re-running on an already-lifted demonstration).
    """
    from .constraints import apply_constraints, flag_constraints
    from .errors import TrajliftError
    from .model import validate_demonstration

    if spec is not None:
        report = validate_demonstration(demo, spec)
        if not report.ok:
            v = report.violations[0]
            raise TrajliftError(f"invalid demonstration: {v.message} (point {v.index})")
    if cfg is None:
        cfg = ReconstructionConfig()
    segments = segment_by_mode(demo, cfg)
    flagged = flag_constraints(segments, cfg)
    merged = apply_constraints(segments, cfg)
    reconstructed = stitch_segments(merged, demo.dt, demo.interface, demo.task_label)
    return ReconstructionResult(
        raw=demo,
        segments_before=tuple(flagged),
        segments_after=tuple(merged),
        reconstructed=reconstructed,
    )
