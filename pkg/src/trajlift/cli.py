"""Command-line pipeline: generate, segment, reconstruct, smooth, measure."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fileio, metrics, simulate, smoothing
from .constraints import flag_constraints
from .errors import TrajliftError
from .model import (
    Demonstration,
    ReconstructionConfig,
    builtin_interfaces,
    get_interface,
    validate_demonstration,
)
from .reconstruction import reconstruct_demo
from .segmentation import segment_by_mode


def _load_scene(name_or_path):
    if os.path.exists(name_or_path):
        return fileio.read_scene(name_or_path)
    return simulate.get_scene(name_or_path)


def _config(args) -> ReconstructionConfig:
    kwargs = {}
    if getattr(args, "epsilon", None) is not None:
        kwargs["epsilon"] = args.epsilon
    if getattr(args, "delta", None) is not None:
        kwargs["delta"] = args.delta
    if getattr(args, "activation_threshold", None) is not None:
        kwargs["activation_vel_threshold"] = args.activation_threshold
    return ReconstructionConfig(**kwargs)


def _cmd_generate(args):
    scene = _load_scene(args.scene)
    spec = get_interface(args.interface)
    policy = simulate.DemonstratorPolicy(vel_jitter=args.jitter)
    demo = simulate.generate_demo(scene, policy, spec, dt=args.dt, seed=args.seed)
    report = validate_demonstration(demo, spec)
    if not report.ok:
        raise TrajliftError(f"generated demo failed validation: {report.violations[0]}")
    fileio.write_demo(demo, args.out)
    print(f"wrote {len(demo)} samples ({demo.duration:.2f}s) to {args.out}")
    return 0


def _cmd_segment(args):
    demo = fileio.read_demo(args.infile)
    cfg = _config(args)
    segs = flag_constraints(segment_by_mode(demo, cfg), cfg)
    for i, s in enumerate(segs):
        flags = "".join(
            c for c, on in (("E", s.env_constrained), ("T", s.task_constrained)) if on
        )
        dims = ",".join(str(d) for d in sorted(s.active_dims))
        print(
            f"segment {i}: {len(s)} samples ({s.duration:.2f}s) "
            f"mask={''.join('1' if b else '0' for b in s.mask)} "
            f"active=[{dims}] {flags}"
        )
    if args.json:
        with open(args.json, "w") as f:
            json.dump([fileio.segment_summary(s) for s in segs], f, indent=2)
            f.write("\n")
    return 0


def _cmd_reconstruct(args):
    demo = fileio.read_demo(args.infile)
    cfg = _config(args)
    result = reconstruct_demo(demo, cfg=cfg)
    fileio.write_demo(result.reconstructed, args.out)
    meta = args.meta or args.out + ".meta.json"
    fileio.write_result_bundle(result, meta)
    print(
        f"reconstructed {len(result.segments_before)} segments into "
        f"{len(result.segments_after)}; duration {demo.duration:.2f}s -> "
        f"{result.reconstructed.duration:.2f}s"
    )
    if args.svg:
        metrics.save_dimension_timeline(result, args.svg, cfg)
        print(f"wrote timeline plot to {args.svg}")
    return 0


def _cmd_smooth(args):
    demo = fileio.read_demo(args.infile)
    if args.filter == "butterworth":
        out = smoothing.butterworth_lowpass(
            demo, order=args.order, cutoff_hz=args.cutoff_hz, zero_phase=not args.single_pass
        )
    elif args.filter == "savgol":
        out = smoothing.savitzky_golay(demo, window=args.window, polyorder=args.polyorder)
    else:
        out = smoothing.bspline_smooth(demo, degree=args.degree, knot_spacing=args.knot_spacing)
    fileio.write_demo(out, args.out)
    print(f"smoothed with {args.filter}, wrote {args.out}")
    return 0


def _print_report(label, rep):
    print(f"[{label}] duration {rep.duration_s:.3f}s, path {rep.path_length_m:.4f}m")
    hist = ", ".join(
        f"k={k}: {100 * f:.1f}%" for k, f in enumerate(rep.histogram.fractions, start=1) if f > 0
    )
    print(f"[{label}] activation {hist or 'none'} (idle {100 * rep.histogram.idle_fraction:.1f}%)")
    if rep.max_dims.per_region:
        print(
            f"[{label}] controllable dims per region {list(rep.max_dims.per_region)} "
            f"(mean {rep.max_dims.mean:.2f} +/- {rep.max_dims.std:.2f})"
        )
    if rep.pct_change:
        print(
            f"[{label}] vs baseline: time {rep.pct_change['time_pct']:+.1f}%, "
            f"dist {rep.pct_change['dist_pct']:+.1f}%"
        )


def _cmd_metrics(args):
    demo = fileio.read_demo(args.infile)
    cfg = _config(args)
    baseline = fileio.read_demo(args.baseline) if args.baseline else None
    rep = metrics.metrics_report(demo, cfg, baseline=baseline)
    _print_report(demo.task_label or "demo", rep)
    if args.json:
        payload = {
            "duration_s": rep.duration_s,
            "path_length_m": rep.path_length_m,
            "activation_fractions": list(rep.histogram.fractions),
            "idle_fraction": rep.histogram.idle_fraction,
            "max_dims_per_region": list(rep.max_dims.per_region),
            "max_dims_mean": rep.max_dims.mean,
            "max_dims_std": rep.max_dims.std,
            "pct_change": rep.pct_change,
        }
        with open(args.json, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
    if args.svg:
        hists = {"demo": rep.histogram}
        if baseline is not None:
            hists["baseline"] = metrics.activation_histogram(baseline, cfg)
        metrics.save_activation_heatmap(hists, args.svg)
    return 0


def _cmd_compare(args):
    raw = [fileio.read_demo(p) for p in args.raw]
    smoothed = [fileio.read_demo(p) for p in args.smoothed] if args.smoothed else None
    recon = [fileio.read_demo(p) for p in args.recon] if args.recon else None
    report = metrics.compare(raw, smoothed, recon)
    text = report.to_text()
    print(text)
    if args.report:
        payload = [
            {
                "dataset": r.dataset,
                "metric": r.metric,
                "values": list(r.values),
                "mean": r.mean,
                "std": r.std,
                "pct_vs_raw": r.pct_vs_raw,
            }
            for r in report.rows
        ]
        with open(args.report, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
        print(f"wrote report to {args.report}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajlift",
        description="Lift interface-limited teleoperation demonstrations into "
        "the robot's full control space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emulate a demonstration of a scene")
    p.add_argument("--scene", required=True, help="builtin scene name or scene file")
    p.add_argument(
        "--interface",
        default="sippuff1d",
        choices=[s.name for s in builtin_interfaces()],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--jitter", type=float, default=0.0, help="relative velocity noise")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("segment", help="split a demonstration by control mode")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--epsilon", type=int, default=None, help="min segment length, samples")
    p.add_argument("--delta", type=float, default=None, help="obstacle clearance, meters")
    p.add_argument("--json", default=None, help="write segment summaries here")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("reconstruct", help="lift a demonstration into higher dims")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epsilon", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--meta", default=None, help="bundle path (default OUT.meta.json)")
    p.add_argument("--svg", default=None, help="write a dimension-vs-time plot")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("smooth", help="apply a filtering baseline")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--filter", choices=("butterworth", "savgol", "bspline"), default="butterworth")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--cutoff-hz", type=float, default=2.0)
    p.add_argument("--single-pass", action="store_true", help="causal instead of zero-phase")
    p.add_argument("--window", type=int, default=11)
    p.add_argument("--polyorder", type=int, default=3)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--knot-spacing", type=int, default=50)
    p.set_defaults(func=_cmd_smooth)

    p = sub.add_parser("metrics", help="report metrics for a demonstration")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--baseline", default=None, help="raw demo for % change")
    p.add_argument("--epsilon", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--activation-threshold", type=float, default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--svg", default=None, help="write an activation heatmap")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("compare", help="raw vs smoothed vs reconstructed table")
    p.add_argument("--raw", nargs="+", required=True)
    p.add_argument("--smoothed", nargs="*", default=None)
    p.add_argument("--recon", nargs="*", default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_compare)

    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 0
    try:
        return args.func(args)
    except TrajliftError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
