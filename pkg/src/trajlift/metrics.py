"""Evaluation metrics: activation histograms, efficiency, dimension ceilings."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import MOTION_DIMS, Demonstration, ReconstructionConfig, as_channels
from .segmentation import Segment, activity_matrix, velocity_scales


@dataclass(frozen=True)
class ActivationHistogram:
    """Distribution of simultaneously moving motion dims over timesteps.

    ``fractions[k-1]`` is the share of motion timesteps where exactly k of
    the six motion dims move; idle timesteps (no motion dim above threshold)
    are excluded from the normalization and reported separately.
    """

    fractions: tuple  # k = 1..6
    idle_fraction: float
    motion_samples: int

    def mass_at_least(self, k: int) -> float:
        return float(sum(self.fractions[k - 1 :]))

    @property
    def max_active(self) -> int:
        for k in range(MOTION_DIMS, 0, -1):
            if self.fractions[k - 1] > 0.0:
                return k
        return 0


def activation_histogram(demo: Demonstration, cfg: ReconstructionConfig = None) -> ActivationHistogram:
    """Histogram of simultaneous motion-dim counts, from velocities.

    A dim counts active when its commanded speed exceeds the configured
    fraction of the demonstration's max speed for that dim class.
    """
    if cfg is None:
        cfg = ReconstructionConfig()
    scales = velocity_scales(demo.points)
    act = activity_matrix(demo.points, scales, cfg.activation_vel_threshold)
    counts = act[:, 0:MOTION_DIMS].sum(axis=1)
    n = len(counts)
    motion = counts > 0
    total = int(motion.sum())
    fractions = tuple(
        float((counts == k).sum() / total) if total else 0.0
        for k in range(1, MOTION_DIMS + 1)
    )
    idle = float((n - total) / n) if n else 0.0
    return ActivationHistogram(fractions=fractions, idle_fraction=idle, motion_samples=total)


def path_length(demo: Demonstration) -> float:
    """Total translational distance traveled, meters."""
    ch = as_channels(demo.points)
    if len(ch.t) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(ch.pos, axis=0), axis=1)))


def execution_time(demo: Demonstration) -> float:
    """Wall time spanned by the demonstration, seconds."""
    return demo.duration


@dataclass(frozen=True)
class RegionTally:
    """Distinct dims activated per unconstrained region of a segment list."""

    per_region: tuple
    mean: float
    std: float


def max_controllable_dims(segments) -> RegionTally:
    """Dimension ceiling per region demarcated by constrained segments.

    Partitions the (flagged, pre-merge) segment list into maximal runs of
    unconstrained segments and counts the distinct dims activated across
    each run. Std is the sample (n-1) deviation, 0 for fewer than 2 regions.
    """
    regions = []
    current = None
    for seg in segments:
        if seg.env_constrained or seg.task_constrained:
            if current is not None:
                regions.append(current)
                current = None
            continue
        current = (current or set()) | set(seg.active_dims)
    if current is not None:
        regions.append(current)
    counts = tuple(len(r) for r in regions)
    if not counts:
        return RegionTally(per_region=(), mean=0.0, std=0.0)
    mean = float(np.mean(counts))
    std = float(np.std(counts, ddof=1)) if len(counts) > 1 else 0.0
    return RegionTally(per_region=counts, mean=mean, std=std)


def pct_change(new: float, raw: float) -> float:
    """(new - raw) / raw in percent; negative means improvement."""
    if raw == 0.0:
        return 0.0
    return (new - raw) / raw * 100.0


@dataclass(frozen=True)
class MetricsReport:
    duration_s: float
    path_length_m: float
    histogram: ActivationHistogram
    max_dims: RegionTally
    pct_change: dict = None  # vs a named baseline, when given


def metrics_report(
    demo: Demonstration,
    cfg: ReconstructionConfig = None,
    baseline: Demonstration = None,
) -> MetricsReport:
    """All per-demonstration metrics, optionally with % change vs a baseline."""
    from .constraints import flag_constraints
    from .errors import EmptyResult
    from .segmentation import segment_by_mode

    if cfg is None:
        cfg = ReconstructionConfig()
    try:
        segs = flag_constraints(segment_by_mode(demo, cfg), cfg)
        tally = max_controllable_dims(segs)
    except EmptyResult:
        tally = RegionTally(per_region=(), mean=0.0, std=0.0)
    changes = None
    if baseline is not None:
        changes = {
            "time_pct": pct_change(execution_time(demo), execution_time(baseline)),
            "dist_pct": pct_change(path_length(demo), path_length(baseline)),
        }
    return MetricsReport(
        duration_s=execution_time(demo),
        path_length_m=path_length(demo),
        histogram=activation_histogram(demo, cfg),
        max_dims=tally,
        pct_change=changes,
    )


@dataclass(frozen=True)
class ComparisonRow:
    dataset: str
    metric: str
    values: tuple
    mean: float
    std: float
    pct_vs_raw: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple

    def row(self, dataset: str, metric: str) -> ComparisonRow:
        for r in self.rows:
            if r.dataset == dataset and r.metric == metric:
                return r
        raise KeyError((dataset, metric))

    def to_text(self) -> str:
        lines = [f"{'dataset':<14}{'metric':<10}{'mean':>12}{'std':>12}{'change':>10}"]
        for r in self.rows:
            lines.append(
                f"{r.dataset:<14}{r.metric:<10}{r.mean:>12.4f}{r.std:>12.4f}"
                f"{r.pct_vs_raw:>+9.1f}%"
            )
        return "\n".join(lines)


def _dataset_rows(name, demos, raw_means):
    times = [execution_time(d) for d in demos]
    dists = [path_length(d) for d in demos]
    rows = []
    for metric, vals in (("time_s", times), ("dist_m", dists)):
        mean = float(np.mean(vals))
        std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
        rows.append(
            ComparisonRow(
                dataset=name,
                metric=metric,
                values=tuple(vals),
                mean=mean,
                std=std,
                pct_vs_raw=pct_change(mean, raw_means[metric]),
            )
        )
    return rows


def compare(raw, smoothed=None, reconstructed=None) -> ComparisonReport:
    """Efficiency comparison table, percentages relative to the raw set.

    Accepts one demonstration or a sequence per dataset; datasets must be
    aligned (same demos in the same order).
    """

    def as_list(x):
        if x is None:
            return None
        return list(x) if isinstance(x, (list, tuple)) else [x]

    raw = as_list(raw)
    raw_means = {
        "time_s": float(np.mean([execution_time(d) for d in raw])),
        "dist_m": float(np.mean([path_length(d) for d in raw])),
    }
    rows = _dataset_rows("raw", raw, raw_means)
    for name, demos in (("smoothed", as_list(smoothed)), ("reconstructed", as_list(reconstructed))):
        if demos is not None:
            rows.extend(_dataset_rows(name, demos, raw_means))
    return ComparisonReport(rows=tuple(rows))


def save_activation_heatmap(histograms: dict, path: str) -> None:
    """Write an SVG heatmap of activation fractions, one row per label."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = list(histograms)
    data = np.array([histograms[k].fractions for k in labels])
    fig, ax = plt.subplots(figsize=(6, 0.6 * len(labels) + 1.5))
    im = ax.imshow(data, vmin=0.0, vmax=1.0, cmap="viridis", aspect="auto")
    ax.set_xticks(range(MOTION_DIMS), [str(k) for k in range(1, MOTION_DIMS + 1)])
    ax.set_yticks(range(len(labels)), labels)
    ax.set_xlabel("simultaneously active dims")
    for i in range(len(labels)):
        for j in range(MOTION_DIMS):
            if data[i, j] > 0.0:
                ax.text(j, i, f"{100 * data[i, j]:.0f}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax, label="fraction of motion timesteps")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def save_dimension_timeline(result, path: str, cfg: ReconstructionConfig = None) -> None:
    """Write an SVG of active-dim counts over time, raw vs reconstructed,
    with constrained spans shaded."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if cfg is None:
        cfg = ReconstructionConfig()

    fig, axes = plt.subplots(2, 1, figsize=(8, 4), sharex=False)
    for ax, demo, title in (
        (axes[0], result.raw, "raw"),
        (axes[1], result.reconstructed, "reconstructed"),
    ):
        scales = velocity_scales(demo.points)
        act = activity_matrix(demo.points, scales, cfg.activation_vel_threshold)
        counts = act[:, 0:MOTION_DIMS].sum(axis=1)
        ts = [p.t for p in demo.points]
        ax.step(ts, counts, where="post", lw=1)
        ax.set_ylabel(f"{title}\nactive dims")
        ax.set_ylim(-0.2, MOTION_DIMS + 0.2)
    t_cursor = 0.0
    for seg in result.segments_after:
        width = len(seg) * result.reconstructed.dt
        if seg.env_constrained or seg.task_constrained:
            axes[1].axvspan(t_cursor, t_cursor + width, color="tab:red", alpha=0.2)
        t_cursor += width
    axes[1].set_xlabel("time (s)")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
