"""Quaternion helpers (scalar-first convention: w, x, y, z)."""

from __future__ import annotations

import numpy as np


def normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def conjugate(q):
    q = np.asarray(q, dtype=float)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def multiply(a, b):
    """Hamilton product a ⊗ b, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = (a[..., i] for i in range(4))
    w2, x2, y2, z2 = (b[..., i] for i in range(4))
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def from_rotvec(r):
    """Quaternion for a rotation vector (axis * angle, radians)."""
    r = np.asarray(r, dtype=float)
    angle = np.linalg.norm(r, axis=-1, keepdims=True)
    half = 0.5 * angle
    # sin(x)/x, series fallback near zero
    small = angle < 1e-12
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(small, 0.5 - angle**2 / 48.0, np.sin(half) / np.where(small, 1.0, angle))
    w = np.cos(half)
    xyz = r * k
    return np.concatenate([w, xyz], axis=-1)


def to_rotvec(q):
    """Rotation vector of a unit quaternion (angle in [0, pi])."""
    q = np.asarray(q, dtype=float)
    # force positive scalar part so the angle stays in [0, pi]
    sign = np.where(q[..., :1] < 0.0, -1.0, 1.0)
    q = q * sign
    w = np.clip(q[..., 0], -1.0, 1.0)
    v = q[..., 1:]
    s = np.linalg.norm(v, axis=-1)
    angle = 2.0 * np.arctan2(s, w)
    small = s < 1e-12
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = np.where(small, 2.0 / np.where(w == 0, 1.0, np.maximum(w, 1e-300)), angle / np.where(small, 1.0, s))
    return v * scale[..., None]


def slerp(q0, q1, u):
    """Shortest-arc spherical interpolation at fraction u in [0, 1]."""
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    dot = float(np.dot(q0, q1))
    if dot < 0.0:
        q1 = -q1
        dot = -dot
    dot = min(dot, 1.0)
    theta = np.arccos(dot)
    if theta < 1e-10:
        return normalize(q0 + u * (q1 - q0))
    s = np.sin(theta)
    return (np.sin((1.0 - u) * theta) * q0 + np.sin(u * theta) * q1) / s


def step_rotvecs(quats):
    """Per-step world-frame rotation vectors between consecutive quaternions.

    Returns an (N-1, 3) array r with exp(r[i]) * q[i] = q[i+1].
    """
    quats = np.asarray(quats, dtype=float)
    if len(quats) < 2:
        return np.zeros((0, 3))
    rel = multiply(quats[1:], conjugate(quats[:-1]))
    return to_rotvec(rel)


def accumulated_rotation(quats):
    """Cumulative per-axis rotation traveled along a quaternion sequence.

    Entry i is the sum of per-step world-frame rotation vectors up to i;
    entry 0 is zero. Unlike a relative rotation vector this accumulates
    multi-turn motion per axis.
    """
    quats = np.asarray(quats, dtype=float)
    out = np.zeros((len(quats), 3))
    if len(quats) > 1:
        out[1:] = np.cumsum(step_rotvecs(quats), axis=0)
    return out
