"""Exception types raised across the toolkit."""


class TrajliftError(Exception):
    """Base class for all toolkit errors."""


class UnreachableWaypoint(TrajliftError):
    """The scripted demonstrator made no progress toward a waypoint."""


class EmptyResult(TrajliftError):
    """Segmentation discarded every candidate segment."""


class DegenerateSegment(TrajliftError):
    """A segment is too short to warp or merge (fewer than 2 points)."""


class OverlapError(TrajliftError):
    """Two segments command the same dimension and cannot be composed."""


class ConstraintViolation(TrajliftError):
    """Attempted to compose a segment flagged as task- or env-constrained."""


class InvalidCutoff(TrajliftError):
    """Low-pass cutoff frequency is not inside (0, Nyquist)."""


class InvalidWindow(TrajliftError):
    """Savitzky-Golay window is even or not larger than the poly order."""


class TooShort(TrajliftError):
    """Channel has fewer samples than the spline fit requires."""


class ParseError(TrajliftError):
    """A demonstration or scene file could not be parsed.

    Carries the 1-based line number where parsing failed.
    """

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class VersionMismatch(TrajliftError):
    """File declares a format version this build does not understand."""
