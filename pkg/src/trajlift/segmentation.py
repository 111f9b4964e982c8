"""Mode-based trajectory segmentation with transient and artifact filtering."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyResult
from .model import (
    GRIPPER_DIM,
    MOTION_DIMS,
    Demonstration,
    ReconstructionConfig,
    TrajectoryPoint,
    as_channels,
    mask_dims,
)


@dataclass(frozen=True)
class Segment:
    """A contiguous run of demonstration points under one control mode.

    After composition, ``mask`` is the union of the source modes and
    ``provenance`` lists every contributing source index range.
    """

    points: tuple
    mask: tuple
    active_dims: frozenset
    env_constrained: bool = False
    task_constrained: bool = False
    provenance: tuple = ()  # ((start, end), ...) half-open source index ranges

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "active_dims", frozenset(self.active_dims))
        object.__setattr__(self, "provenance", tuple(tuple(r) for r in self.provenance))
        if not self.points:
            raise ValueError("segment needs at least one point")

    def __len__(self):
        return len(self.points)

    @property
    def duration(self) -> float:
        return self.points[-1].t - self.points[0].t


def velocity_scales(points) -> tuple:
    """Max commanded speed per dimension class: (linear, angular, gripper).

    The gripper class speed is the largest aperture change rate between
    consecutive points, since gripper motion is not part of the velocity
    command vector.
    """
    ch = as_channels(points)
    lin = float(np.max(np.abs(ch.vel[:, 0:3]))) if len(ch.t) else 0.0
    ang = float(np.max(np.abs(ch.vel[:, 3:6]))) if len(ch.t) else 0.0
    grip = 0.0
    if len(ch.t) > 1:
        rates = np.abs(np.diff(ch.gripper)) / np.diff(ch.t)
        grip = float(np.max(rates))
    return lin, ang, grip


def activity_matrix(points, scales, threshold) -> np.ndarray:
    """(N, 7) bool: which dims move at each timestep.

    A motion dim is active when |vel| exceeds threshold x its class scale;
    the gripper is active on the earlier point of any aperture change.
    """
    ch = as_channels(points)
    n = len(ch.t)
    lin, ang, grip = scales
    out = np.zeros((n, 7), dtype=bool)
    if n == 0:
        return out
    if lin > 0.0:
        out[:, 0:3] = np.abs(ch.vel[:, 0:3]) > threshold * lin
    if ang > 0.0:
        out[:, 3:6] = np.abs(ch.vel[:, 3:6]) > threshold * ang
    if grip > 0.0 and n > 1:
        rates = np.abs(np.diff(ch.gripper)) / np.diff(ch.t)
        out[:-1, GRIPPER_DIM] = rates > threshold * grip
    return out


def active_dimensions(points, scales, threshold) -> frozenset:
    """Dims with above-threshold motion anywhere in the point run."""
    act = activity_matrix(points, scales, threshold)
    return frozenset(int(d) for d in np.flatnonzero(act.any(axis=0)))


def make_segment(points, provenance, scales, cfg: ReconstructionConfig) -> Segment:
    points = tuple(points)
    return Segment(
        points=points,
        mask=points[0].mask,
        active_dims=active_dimensions(points, scales, cfg.activation_vel_threshold),
        provenance=provenance,
    )


def segment_by_mode(demo: Demonstration, cfg: ReconstructionConfig = None) -> list:
    """Split a demonstration into mode-contiguous segments.

    Follows the mode-switch walk literally: a point whose mask differs from
    both raw neighbors is a cycling transient and is dropped; candidate
    segments shorter than epsilon are dropped as switch artifacts. The final
    in-progress segment is appended (the final point is never treated as a
    transient). Same-mode segments separated only by discarded material stay
    separate.
    """
    if cfg is None:
        cfg = ReconstructionConfig()
    pts = demo.points
    n = len(pts)
    if n == 0:
        raise EmptyResult("demonstration has no points")
    scales = velocity_scales(pts)

    segments = []
    cur = [0]

    def close(run):
        if len(run) >= cfg.epsilon:
            segments.append(
                make_segment(
                    [pts[i] for i in run],
                    provenance=((run[0], run[-1] + 1),),
                    scales=scales,
                    cfg=cfg,
                )
            )

    for t in range(1, n):
        prev_mask = pts[t - 1].mask
        here = pts[t].mask
        nxt = pts[t + 1].mask if t + 1 < n else None
        if prev_mask != here and nxt is not None and here != nxt:
            continue  # cycling through modes during a switch
        if here == prev_mask:
            cur.append(t)
        else:
            close(cur)
            cur = [t]
    close(cur)

    if not segments:
        raise EmptyResult(
            f"every candidate segment is shorter than epsilon={cfg.epsilon}"
        )
    return segments
