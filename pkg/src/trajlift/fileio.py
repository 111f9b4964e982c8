"""Line-delimited JSON storage for demonstrations and scenes.

A demonstration file starts with a header record carrying dt, interface
name, task label, and format version, followed by one record per timestep.
Floats are written with Python's shortest round-trip repr, so write-read
is lossless.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .errors import ParseError, VersionMismatch
from .model import Demonstration, TrajectoryPoint
from .simulate import Box, Scene, Sphere, StartState, Waypoint

FORMAT_VERSION = 1

_POINT_FIELDS = (
    "t",
    "px",
    "py",
    "pz",
    "qw",
    "qx",
    "qy",
    "qz",
    "vx",
    "vy",
    "vz",
    "wx",
    "wy",
    "wz",
    "gripper",
    "mask",
    "obstacle_dist",
)


def _point_record(p: TrajectoryPoint) -> dict:
    return {
        "t": p.t,
        "px": p.pos[0],
        "py": p.pos[1],
        "pz": p.pos[2],
        "qw": p.quat[0],
        "qx": p.quat[1],
        "qy": p.quat[2],
        "qz": p.quat[3],
        "vx": p.vel[0],
        "vy": p.vel[1],
        "vz": p.vel[2],
        "wx": p.vel[3],
        "wy": p.vel[4],
        "wz": p.vel[5],
        "gripper": p.gripper,
        "mask": "".join("1" if b else "0" for b in p.mask),
        "obstacle_dist": p.obstacle_dist,
    }


def _point_from_record(rec: dict, line_no: int) -> TrajectoryPoint:
    for key in _POINT_FIELDS:
        if key not in rec:
            raise ParseError(line_no, f"missing column {key!r}")
    mask = rec["mask"]
    if not isinstance(mask, str) or len(mask) != 7 or set(mask) - {"0", "1"}:
        raise ParseError(line_no, f"mask must be a 7-char bitstring, got {mask!r}")
    try:
        return TrajectoryPoint(
            t=rec["t"],
            pos=(rec["px"], rec["py"], rec["pz"]),
            quat=(rec["qw"], rec["qx"], rec["qy"], rec["qz"]),
            vel=(rec["vx"], rec["vy"], rec["vz"], rec["wx"], rec["wy"], rec["wz"]),
            gripper=rec["gripper"],
            mask=tuple(c == "1" for c in mask),
            obstacle_dist=rec["obstacle_dist"],
        )
    except (TypeError, ValueError) as e:
        raise ParseError(line_no, str(e)) from e


def write_demo(demo: Demonstration, path) -> None:
    with open(path, "w") as f:
        header = {
            "format_version": FORMAT_VERSION,
            "kind": "demonstration",
            "dt": demo.dt,
            "interface": demo.interface,
            "task_label": demo.task_label,
        }
        f.write(json.dumps(header) + "\n")
        for p in demo.points:
            f.write(json.dumps(_point_record(p)) + "\n")


def read_demo(path) -> Demonstration:
    with open(path) as f:
        lines = f.read().splitlines()
    header = None
    points = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(line_no, f"bad JSON: {e.msg}") from e
        if header is None:
            if not isinstance(rec, dict) or "format_version" not in rec:
                raise ParseError(line_no, "first record must be a header with format_version")
            if rec["format_version"] != FORMAT_VERSION:
                raise VersionMismatch(
                    f"format_version {rec['format_version']} (expected {FORMAT_VERSION})"
                )
            for key in ("dt", "interface"):
                if key not in rec:
                    raise ParseError(line_no, f"header missing {key!r}")
            header = rec
            continue
        points.append(_point_from_record(rec, line_no))
    if header is None:
        raise ParseError(1, "empty file")
    return Demonstration(
        points=tuple(points),
        dt=header["dt"],
        interface=header["interface"],
        task_label=header.get("task_label", ""),
    )


def _scene_to_dict(scene: Scene) -> dict:
    obstacles = []
    for ob in scene.obstacles:
        if isinstance(ob, Sphere):
            obstacles.append({"shape": "sphere", "center": list(ob.center), "radius": ob.radius})
        else:
            obstacles.append(
                {"shape": "box", "center": list(ob.center), "half_extents": list(ob.half_extents)}
            )
    return {
        "format_version": FORMAT_VERSION,
        "kind": "scene",
        "name": scene.name,
        "start": {
            "pos": list(scene.start.pos),
            "quat": list(scene.start.quat),
            "gripper": scene.start.gripper,
        },
        "workspace_min": list(scene.workspace_min),
        "workspace_max": list(scene.workspace_max),
        "obstacles": obstacles,
        "waypoints": [
            {
                "pos": list(wp.pos),
                "quat": None if wp.quat is None else list(wp.quat),
                "gripper": wp.gripper,
                "tol": wp.tol,
            }
            for wp in scene.waypoints
        ],
        "notes": scene.notes,
    }


def write_scene(scene: Scene, path) -> None:
    with open(path, "w") as f:
        json.dump(_scene_to_dict(scene), f, indent=2)
        f.write("\n")


def read_scene(path) -> Scene:
    with open(path) as f:
        try:
            rec = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(e.lineno, f"bad JSON: {e.msg}") from e
    if rec.get("format_version") != FORMAT_VERSION:
        raise VersionMismatch(f"format_version {rec.get('format_version')}")
    try:
        obstacles = []
        for ob in rec.get("obstacles", []):
            if ob["shape"] == "sphere":
                obstacles.append(Sphere(center=ob["center"], radius=ob["radius"]))
            elif ob["shape"] == "box":
                obstacles.append(Box(center=ob["center"], half_extents=ob["half_extents"]))
            else:
                raise ParseError(1, f"unknown obstacle shape {ob['shape']!r}")
        start = rec.get("start", {})
        return Scene(
            name=rec["name"],
            waypoints=tuple(
                Waypoint(
                    pos=wp["pos"],
                    quat=wp.get("quat"),
                    gripper=wp.get("gripper"),
                    tol=wp.get("tol"),
                )
                for wp in rec["waypoints"]
            ),
            obstacles=tuple(obstacles),
            start=StartState(
                pos=start.get("pos", (0.0, 0.0, 0.2)),
                quat=start.get("quat", (1.0, 0.0, 0.0, 0.0)),
                gripper=start.get("gripper", 1.0),
            ),
            workspace_min=rec.get("workspace_min", (-1.0, -1.0, -0.05)),
            workspace_max=rec.get("workspace_max", (1.0, 1.0, 1.0)),
            notes=rec.get("notes", ""),
        )
    except KeyError as e:
        raise ParseError(1, f"scene missing field {e.args[0]!r}") from e


def segment_summary(seg) -> dict:
    """JSON-ready description of one segment for result bundles."""
    return {
        "length": len(seg),
        "mask": "".join("1" if b else "0" for b in seg.mask),
        "active_dims": sorted(seg.active_dims),
        "env_constrained": seg.env_constrained,
        "task_constrained": seg.task_constrained,
        "provenance": [list(r) for r in seg.provenance],
        "t_start": seg.points[0].t,
        "t_end": seg.points[-1].t,
    }


def write_result_bundle(result, path) -> None:
    """Sidecar JSON with enough provenance to annotate dimension-vs-time
    plots: segment boundaries and constraint flags, before and after merging."""
    bundle = {
        "format_version": FORMAT_VERSION,
        "kind": "reconstruction_bundle",
        "raw_duration_s": result.raw.duration,
        "reconstructed_duration_s": result.reconstructed.duration,
        "segments_before": [segment_summary(s) for s in result.segments_before],
        "segments_after": [segment_summary(s) for s in result.segments_after],
    }
    with open(path, "w") as f:
        json.dump(bundle, f, indent=2)
        f.write("\n")
