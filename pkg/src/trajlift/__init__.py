"""trajlift: lift interface-limited teleoperation demonstrations into the
robot's full control space, with the simulation, filtering baselines, and
metrics needed to validate the reconstruction."""

from .constraints import (
    apply_constraints,
    environ_constrained,
    flag_constraints,
    mergeable,
    task_constrained,
)
from .errors import (
    ConstraintViolation,
    DegenerateSegment,
    EmptyResult,
    InvalidCutoff,
    InvalidWindow,
    OverlapError,
    ParseError,
    TooShort,
    TrajliftError,
    UnreachableWaypoint,
    VersionMismatch,
)
from .fileio import read_demo, read_scene, write_demo, write_scene
from .metrics import (
    ActivationHistogram,
    ComparisonReport,
    MetricsReport,
    RegionTally,
    activation_histogram,
    compare,
    execution_time,
    max_controllable_dims,
    metrics_report,
    path_length,
)
from .model import (
    DIM_LABELS,
    GRIPPER_DIM,
    MOTION_DIMS,
    NUM_DIMS,
    Demonstration,
    InterfaceSpec,
    ReconstructionConfig,
    TrajectoryPoint,
    ValidationReport,
    Violation,
    builtin_interfaces,
    get_interface,
    mask_from_dims,
    register_interface,
    validate_demonstration,
)
from .reconstruction import (
    ReconstructionResult,
    reconstruct_demo,
    reconstruct_segments,
    stitch_segments,
    time_warp,
)
from .segmentation import Segment, segment_by_mode
from .simulate import (
    Box,
    DemonstratorPolicy,
    Scene,
    Sphere,
    StartState,
    Waypoint,
    builtin_scenes,
    generate_demo,
    get_scene,
    scripted_motion_dims,
    scripted_spans,
)
from .smoothing import bspline_smooth, butterworth_lowpass, savitzky_golay

__version__ = "0.1.0"
