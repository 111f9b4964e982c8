"""Digital filtering baselines the reconstruction is compared against.

All three smoothers act on the geometric pose channels (translation and
quaternion components, renormalized) and leave the commanded-velocity, mask,
gripper, obstacle-distance, and time channels untouched: they reshape the
path but cannot reason about the interface, so the command record stands.

The Butterworth design is built from the analog prototype via the bilinear
transform, and Savitzky-Golay from the local least-squares kernel, so no
external DSP package is required.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .errors import InvalidCutoff, InvalidWindow, TooShort
from .model import Demonstration, TrajectoryPoint, as_channels, points_from_channels


def butter_lowpass_coeffs(order: int, cutoff_hz: float, fs: float):
    """Numerator/denominator of a digital low-pass Butterworth filter.

    Analog prototype poles are prewarped and mapped with the bilinear
    transform; all zeros sit at z = -1 and the gain is normalized to 1 at DC.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    nyquist = fs / 2.0
    if not 0.0 < cutoff_hz < nyquist:
        raise InvalidCutoff(f"cutoff {cutoff_hz} Hz not in (0, {nyquist}) Hz")

    warped = math.tan(math.pi * cutoff_hz / fs)
    k = np.arange(order)
    theta = math.pi * (2 * k + order + 1) / (2 * order)
    poles_analog = warped * np.exp(1j * theta)  # left half plane
    poles_z = (1.0 + poles_analog) / (1.0 - poles_analog)

    a = np.real(np.poly(poles_z))
    b = np.real(np.poly(-np.ones(order)))
    b *= np.sum(a) / np.sum(b)  # unit gain at z = 1
    return b, a


def lfilter(b, a, x, zi=None):
    """Direct-form II transposed IIR filter over one channel."""
    b = np.asarray(b, dtype=float)
    a = np.asarray(a, dtype=float)
    n = len(a)
    z = np.zeros(n - 1) if zi is None else np.array(zi, dtype=float)
    y = np.empty(len(x))
    for i, xi in enumerate(x):
        yi = b[0] * xi + z[0]
        for j in range(n - 2):
            z[j] = b[j + 1] * xi + z[j + 1] - a[j + 1] * yi
        z[n - 2] = b[n - 1] * xi - a[n - 1] * yi
        y[i] = yi
    return y, z


def lfilter_zi(b, a):
    """Initial filter state whose step response is already settled."""
    n = len(a)
    companion = np.zeros((n - 1, n - 1))
    companion[0, :] = -np.asarray(a[1:]) / a[0]
    companion[1:, :-1] = np.eye(n - 2)
    rhs = np.asarray(b[1:]) - np.asarray(a[1:]) * b[0]
    return np.linalg.solve(np.eye(n - 1) - companion.T, rhs)


def filtfilt(b, a, x):
    """Zero-phase forward-backward filtering with odd-extension padding."""
    x = np.asarray(x, dtype=float)
    ntaps = max(len(a), len(b))
    padlen = min(3 * ntaps, len(x) - 1)
    if padlen > 0:
        ext = np.concatenate(
            [2 * x[0] - x[padlen:0:-1], x, 2 * x[-1] - x[-2 : -padlen - 2 : -1]]
        )
    else:
        ext = x
    zi = lfilter_zi(b, a)
    y, _ = lfilter(b, a, ext, zi * ext[0])
    y = y[::-1]
    y, _ = lfilter(b, a, y, zi * y[0])
    y = y[::-1]
    return y[padlen : len(y) - padlen] if padlen > 0 else y


def _smooth_pose(demo: Demonstration, smooth_channel) -> Demonstration:
    """Apply a channel smoother to the pose channels of a demonstration."""
    ch = as_channels(demo.points)
    pos = np.column_stack([smooth_channel(ch.pos[:, d]) for d in range(3)])
    quat = np.column_stack([smooth_channel(ch.quat[:, d]) for d in range(4)])
    quat /= np.linalg.norm(quat, axis=1, keepdims=True)
    points = points_from_channels(
        ch._replace(pos=pos, quat=quat)
    )
    return replace(demo, points=points)


def butterworth_lowpass(
    demo: Demonstration,
    order: int = 4,
    cutoff_hz: float = 2.0,
    zero_phase: bool = True,
) -> Demonstration:
    """Low-pass Butterworth the pose channels of a demonstration.

    Zero-phase (forward-backward) application by default, which avoids
    trajectory lag at the cost of squaring the magnitude response (the
    -3 dB point of a single pass becomes -6 dB); pass zero_phase=False
    for the plain causal filter.
    """
    fs = 1.0 / demo.dt
    b, a = butter_lowpass_coeffs(order, cutoff_hz, fs)
    if zero_phase:
        smooth = lambda x: filtfilt(b, a, x)
    else:
        zi = lfilter_zi(b, a)
        smooth = lambda x: lfilter(b, a, x, zi * x[0])[0]
    return _smooth_pose(demo, smooth)


def savgol_kernel(window: int, polyorder: int) -> np.ndarray:
    """Least-squares smoothing kernel: fit a polynomial over the window and
    evaluate it at the center."""
    if window % 2 == 0 or window <= polyorder:
        raise InvalidWindow(
            f"window must be odd and greater than polyorder, got ({window}, {polyorder})"
        )
    half = window // 2
    offsets = np.arange(-half, half + 1, dtype=float)
    vander = np.vander(offsets, polyorder + 1, increasing=True)
    return np.linalg.pinv(vander)[0]


def savgol_channel(y, window: int, polyorder: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < window:
        raise InvalidWindow(f"window {window} longer than channel ({n} samples)")
    half = window // 2
    kernel = savgol_kernel(window, polyorder)
    out = y.copy()
    out[half : n - half] = np.correlate(y, kernel, mode="valid")
    # edge samples: evaluate the window's polynomial fit at the edge offsets
    xw = np.arange(window, dtype=float)
    first = np.polyfit(xw, y[:window], polyorder)
    out[:half] = np.polyval(first, xw[:half])
    last = np.polyfit(xw, y[n - window :], polyorder)
    out[n - half :] = np.polyval(last, xw[half + 1 :])
    return out


def savitzky_golay(demo: Demonstration, window: int = 11, polyorder: int = 3) -> Demonstration:
    """Savitzky-Golay smooth the pose channels; exact on polynomials of
    degree <= polyorder."""
    return _smooth_pose(demo, lambda x: savgol_channel(x, window, polyorder))


def _bspline_basis_row(t, knots, degree):
    """Nonzero B-spline basis values at t (de Boor). Returns (span, values)."""
    nb = len(knots) - degree - 1
    if t >= knots[nb]:
        span = nb - 1
    else:
        span = int(np.searchsorted(knots, t, side="right")) - 1
        span = max(span, degree)
    values = np.zeros(degree + 1)
    values[0] = 1.0
    left = np.zeros(degree + 1)
    right = np.zeros(degree + 1)
    for j in range(1, degree + 1):
        left[j] = t - knots[span + 1 - j]
        right[j] = knots[span + j] - t
        saved = 0.0
        for r in range(j):
            tmp = values[r] / (right[r + 1] + left[j - r])
            values[r] = saved + right[r + 1] * tmp
            saved = left[j - r] * tmp
        values[j] = saved
    return span, values


def bspline_channel(ts, y, degree: int = 3, knot_spacing: int = 50) -> np.ndarray:
    """Least-squares B-spline smoother with exactly interpolated endpoints.

    Smoothing comes from knot sparsity: interior knots are placed every
    knot_spacing samples, and the first/last coefficients are pinned to the
    endpoint values (the clamped basis is cardinal there).
    """
    ts = np.asarray(ts, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < degree + 1:
        raise TooShort(f"need at least {degree + 1} samples, got {n}")

    n_interior = max(0, n // knot_spacing - 1)
    n_interior = min(n_interior, n - degree - 1)
    interior = np.linspace(ts[0], ts[-1], n_interior + 2)[1:-1]
    knots = np.concatenate(
        [np.full(degree + 1, ts[0]), interior, np.full(degree + 1, ts[-1])]
    )
    nb = len(knots) - degree - 1

    design = np.zeros((n, nb))
    for i, t in enumerate(ts):
        span, vals = _bspline_basis_row(t, knots, degree)
        design[i, span - degree : span + 1] = vals

    c = np.empty(nb)
    c[0] = y[0]
    c[-1] = y[-1]
    rhs = y - design[:, 0] * c[0] - design[:, -1] * c[-1]
    mid, *_ = np.linalg.lstsq(design[:, 1:-1], rhs, rcond=None)
    c[1:-1] = mid
    return design @ c


def bspline_smooth(demo: Demonstration, degree: int = 3, knot_spacing: int = 50) -> Demonstration:
    """Smoothing-spline fit of the pose channels, evaluated at the original
    timestamps."""
    ts = np.array([p.t for p in demo.points])
    return _smooth_pose(demo, lambda x: bspline_channel(ts, x, degree, knot_spacing))
