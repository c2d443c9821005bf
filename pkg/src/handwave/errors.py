"""Exception types raised across the handwave package."""


class HandwaveError(Exception):
    """Base class for all handwave errors."""


class SourceNotFound(HandwaveError):
    """The requested frame source (path or device) does not exist."""


class UnsupportedFormat(HandwaveError):
    """An image file is not one of the supported codecs (PGM/PPM/PNG, 8-bit)."""


class NoHandCandidate(HandwaveError):
    """No threshold in the search range produced exactly one qualifying blob."""


class DegenerateHistogram(HandwaveError):
    """The histogram cannot be split into two non-empty intensity classes."""


class EmptyCalibration(HandwaveError):
    """Calibration saw no frames, or the sampling disc contains no pixels."""


class InvalidRange(HandwaveError):
    """A color range has min > max on at least one channel."""


class DimensionMismatch(HandwaveError):
    """Two frames that must share dimensions do not."""


class MissingAuxState(HandwaveError):
    """The selected segmentation method needs auxiliary state that is absent."""


class TooFewPoints(HandwaveError):
    """The contour has too few points for the requested operation."""


class InvalidDefectCount(HandwaveError):
    """More large convexity defects than any supported finger pose produces."""


class NoDefects(HandwaveError):
    """Orientation was requested but the defect list is empty."""


class IndeterminateOrientation(HandwaveError):
    """The orientation geometry is degenerate (midpoint equals depth point)."""


class EmptyContour(HandwaveError):
    """An operation that needs contour points received an empty contour."""


class ConfigInvalid(HandwaveError):
    """A configuration value violates its documented invariant."""


class BindFailed(HandwaveError):
    """The service could not bind its listening address."""
