"""Exception taxonomy shared across the package.

The CLI maps these onto its exit-code contract (see cli.py), so new error
types should subclass one of the four roots below rather than ValueError.
"""


class BodymetryError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(BodymetryError):
    """A config file, range table, or option set is malformed."""


class ValidationError(BodymetryError):
    """Input data violates a documented invariant (bad spec, missing key)."""


class StateError(BodymetryError):
    """An operation was called before its prerequisites exist
    (e.g. evaluating an unsplit manifest)."""


class GeometryError(BodymetryError):
    """Base for geometric failure modes."""


class EmptySectionError(GeometryError):
    """A slicing plane does not intersect the mesh."""


class EmptyRegionError(GeometryError):
    """An extremal-search region lies entirely outside the mesh."""


class UnknownJointError(GeometryError, LookupError):
    """A joint name is not present in the skeleton."""


class OutOfFrameError(GeometryError):
    """The mesh does not fit inside the render frame at the configured scale."""


class DecodeError(BodymetryError):
    """An image file could not be read or decoded."""


class DivergenceError(BodymetryError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, message: str = ""):
        self.epoch = epoch
        super().__init__(message or f"non-finite loss at epoch {epoch}")
