"""Constraint predicates and the recursive pairwise merge scheduler.

Segments flagged as task- or environment-constrained are preserved verbatim;
everything else is assumed to be interface-constrained and eligible for
composition with a neighbor.
"""

from __future__ import annotations

from dataclasses import replace

from .model import ReconstructionConfig
from .segmentation import Segment


def environ_constrained(seg: Segment, delta: float) -> bool:
    """True when the end-effector came within delta of an obstacle."""
    return any(p.obstacle_dist < delta for p in seg.points)


def task_constrained(seg: Segment) -> bool:
    """True when the gripper is opening or closing anywhere in the segment."""
    pts = seg.points
    return any(pts[i].gripper != pts[i + 1].gripper for i in range(len(pts) - 1))


def flag_constraints(segments, cfg: ReconstructionConfig) -> list:
    """Evaluate both predicates once per segment and store the flags."""
    return [
        replace(
            s,
            env_constrained=environ_constrained(s, cfg.delta),
            task_constrained=task_constrained(s),
        )
        for s in segments
    ]


def mergeable(a: Segment, b: Segment) -> bool:
    """Whether a pair meets the composition preconditions.

    Constrained segments never merge; neither do pairs that command the
    same dimension (composing them would override the demonstrator's
    sequencing) or degenerate single-point segments.
    """
    if a.env_constrained or b.env_constrained:
        return False
    if a.task_constrained or b.task_constrained:
        return False
    if a.active_dims & b.active_dims:
        return False
    return len(a) >= 2 and len(b) >= 2


def apply_constraints(segments, cfg: ReconstructionConfig = None) -> list:
    """Merge every adjacent unconstrained pair, recursing to a fixpoint.

    One left-to-right pass replaces each mergeable pair with its composition
    and steps past it; passes repeat until none changes the list. Constraint
    flags are populated on every returned segment, with merged segments
    re-checked against their reconciled obstacle distances for reporting.
    """
    from .reconstruction import reconstruct_segments

    if cfg is None:
        cfg = ReconstructionConfig()
    segs = flag_constraints(segments, cfg)

    def one_round(segs):
        changed = False
        i = 0
        while i < len(segs) - 1:
            if mergeable(segs[i], segs[i + 1]):
                merged = reconstruct_segments(segs[i], segs[i + 1])
                segs = segs[:i] + [merged] + segs[i + 2 :]
                changed = True
            i += 1
        if changed:
            return one_round(segs)
        return segs

    out = one_round(segs)
    # merged segments carry False flags from composition; re-derive the env
    # flag from the reconciled distance channel so reports stay honest
    return [
        replace(s, env_constrained=environ_constrained(s, cfg.delta))
        if len(s.provenance) > 1
        else s
        for s in out
    ]
