"""Hand segmentation and gesture input from frame streams."""

from .errors import (
    ConfigInvalid,
    DegenerateHistogram,
    DimensionMismatch,
    EmptyCalibration,
    EmptyContour,
    HandwaveError,
    IndeterminateOrientation,
    InvalidDefectCount,
    InvalidRange,
    MissingAuxState,
    NoDefects,
    NoHandCandidate,
    SourceNotFound,
    TooFewPoints,
    UnsupportedFormat,
)
from .frame import BinaryMask, Frame, GrayFrame, Histogram, histogram, to_grayscale
from .sources import TaggedFrame, open_frame_source

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "ConfigInvalid",
    "DegenerateHistogram",
    "DimensionMismatch",
    "EmptyCalibration",
    "EmptyContour",
    "Frame",
    "GrayFrame",
    "HandwaveError",
    "Histogram",
    "IndeterminateOrientation",
    "InvalidDefectCount",
    "InvalidRange",
    "MissingAuxState",
    "NoDefects",
    "NoHandCandidate",
    "SourceNotFound",
    "TaggedFrame",
    "TooFewPoints",
    "UnsupportedFormat",
    "histogram",
    "open_frame_source",
    "to_grayscale",
    "__version__",
]
