"""Hand-candidate segmentation: six strategies behind one dispatch.

Gray-level routes (static, incremental, Otsu) binarize a GrayFrame with the
strict-greater rule: a pixel is foreground iff its intensity exceeds the
threshold. Color routes (calibrated, fixed color range) keep pixels whose
RGB lies inside an axis-aligned box, and background subtraction keeps
pixels whose absolute gray difference from a stored background exceeds a
configured gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ConfigInvalid,
    DegenerateHistogram,
    DimensionMismatch,
    EmptyCalibration,
    InvalidRange,
    MissingAuxState,
    NoHandCandidate,
)
from .frame import BinaryMask, Frame, GrayFrame, Histogram, histogram, to_grayscale

METHODS = ("static", "incremental", "otsu", "calibrated", "color_range", "background_sub")

DEFAULT_MIN_BLOB_AREA_FRACTION = 0.002


@dataclass(frozen=True)
class ThresholdValue:
    """A gray-level cut point in [0, 255]."""

    t: int

    def __post_init__(self) -> None:
        if not isinstance(self.t, (int, np.integer)) or isinstance(self.t, bool):
            raise ConfigInvalid(f"threshold must be an integer, got {self.t!r}")
        if not 0 <= self.t <= 255:
            raise ConfigInvalid(f"threshold {self.t} outside [0, 255]")

    def __int__(self) -> int:
        return int(self.t)


@dataclass(frozen=True)
class ColorRange:
    """Axis-aligned RGB box; valid instances have min <= max per channel.

    The relation is checked where the range is used, not at construction,
    so a bad range surfaces as InvalidRange from thresholding.
    """

    min: tuple[int, int, int]
    max: tuple[int, int, int]

    def __post_init__(self) -> None:
        for triple in (self.min, self.max):
            if len(triple) != 3 or not all(
                isinstance(c, (int, np.integer)) and 0 <= c <= 255 for c in triple
            ):
                raise ConfigInvalid(f"color bound {triple!r} is not an 8-bit RGB triple")

    @property
    def valid(self) -> bool:
        return all(lo <= hi for lo, hi in zip(self.min, self.max))


@dataclass(frozen=True)
class SegmentationConfig:
    """Parameters for all six methods; `method` picks the active one.

    min_blob_area of None means 0.2% of the frame area, resolved against
    the frame being segmented.
    """

    method: str = "otsu"
    static_t: ThresholdValue = field(default_factory=lambda: ThresholdValue(70))
    incr_lo: int = 20
    incr_hi: int = 160
    incr_step: int = 1
    calib_radius_fraction: float = 0.1
    bg_diff_threshold: int = 25
    min_blob_area: Optional[int] = None
    max_blob_area_fraction: float = 0.6
    color_range: Optional[ColorRange] = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ConfigInvalid(f"unknown segmentation method {self.method!r}")
        if self.incr_lo > self.incr_hi:
            raise ConfigInvalid(f"incr_lo {self.incr_lo} > incr_hi {self.incr_hi}")
        if self.incr_step < 1:
            raise ConfigInvalid(f"incr_step must be >= 1, got {self.incr_step}")
        for name in ("incr_lo", "incr_hi"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise ConfigInvalid(f"{name} {v} outside [0, 255]")
        if not 0 < self.calib_radius_fraction <= 0.5:
            raise ConfigInvalid(
                f"calib_radius_fraction {self.calib_radius_fraction} outside (0, 0.5]"
            )
        if not 0 <= self.bg_diff_threshold <= 255:
            raise ConfigInvalid(
                f"bg_diff_threshold {self.bg_diff_threshold} outside [0, 255]"
            )
        if self.min_blob_area is not None and self.min_blob_area < 0:
            raise ConfigInvalid(f"min_blob_area {self.min_blob_area} is negative")
        if not 0 < self.max_blob_area_fraction <= 1:
            raise ConfigInvalid(
                f"max_blob_area_fraction {self.max_blob_area_fraction} outside (0, 1]"
            )

    def with_threshold(self, t: int) -> "SegmentationConfig":
        return replace(self, static_t=ThresholdValue(t))


@dataclass(frozen=True)
class SegmentationAux:
    """Runtime state some methods need: a calibrated range, a background."""

    color_range: Optional[ColorRange] = None
    background: Optional[GrayFrame] = None


def resolve_min_blob_area(cfg: SegmentationConfig, width: int, height: int) -> int:
    if cfg.min_blob_area is not None:
        return cfg.min_blob_area
    return int(round(DEFAULT_MIN_BLOB_AREA_FRACTION * width * height))


def threshold_binary(gray: GrayFrame, t: ThresholdValue) -> BinaryMask:
    """Foreground iff intensity is strictly greater than t."""
    return BinaryMask.from_bool(gray.pixels > int(t))


def incremental_threshold(
    gray: GrayFrame, cfg: SegmentationConfig
) -> tuple[ThresholdValue, BinaryMask]:
    """Scan thresholds upward until exactly one plausibly-sized blob remains.

    A blob qualifies when its area is at least min_blob_area and at most
    max_blob_area_fraction of the frame; the first threshold producing
    exactly one qualifying blob wins.
    """
    from .topology import connected_components

    min_area = resolve_min_blob_area(cfg, gray.width, gray.height)
    cap = cfg.max_blob_area_fraction * gray.width * gray.height
    for t in range(cfg.incr_lo, cfg.incr_hi + 1, cfg.incr_step):
        mask = threshold_binary(gray, ThresholdValue(t))
        qualifying = [
            b for b in connected_components(mask, 8) if min_area <= b.area <= cap
        ]
        if len(qualifying) == 1:
            return ThresholdValue(t), mask
    raise NoHandCandidate(
        f"no threshold in [{cfg.incr_lo}, {cfg.incr_hi}] isolates a single blob"
    )


def otsu_threshold(h: Histogram) -> ThresholdValue:
    """Split the histogram where weighted within-class variance is minimal.

    Minimizing within-class variance over splits {<=t} / {>t} is the same
    as maximizing S0^2/n0 + S1^2/n1 (S = class intensity sum, n = class
    count), so candidates are compared with exact integer arithmetic on a
    shared-denominator form; ties go to the lowest t.
    """
    counts = [int(c) for c in h.bins]
    nonzero = [i for i, c in enumerate(counts) if c > 0]
    if not nonzero:
        raise DegenerateHistogram("empty histogram")
    if nonzero[0] == nonzero[-1]:
        raise DegenerateHistogram(
            f"all mass at intensity {nonzero[0]}; no two-class split exists"
        )

    best_t = -1
    best_num = 0
    best_den = 1
    n0 = 0
    s0 = 0
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    for t in range(nonzero[0], nonzero[-1]):
        n0 += counts[t]
        s0 += t * counts[t]
        n1 = total_n - n0
        s1 = total_s - s0
        # f(t) = s0^2/n0 + s1^2/n1 = (s0^2*n1 + s1^2*n0) / (n0*n1)
        num = s0 * s0 * n1 + s1 * s1 * n0
        den = n0 * n1
        if best_t < 0 or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return ThresholdValue(best_t)


def calibrate_color_range(
    frames: Iterable[Frame], cfg: SegmentationConfig
) -> ColorRange:
    """Componentwise min/max of every pixel inside each frame's central disc."""
    lo = np.full(3, 256, dtype=np.int64)
    hi = np.full(3, -1, dtype=np.int64)
    sampled = False
    for frame in frames:
        radius = cfg.calib_radius_fraction * min(frame.width, frame.height)
        cy = (frame.height - 1) / 2.0
        cx = (frame.width - 1) / 2.0
        yy, xx = np.mgrid[0 : frame.height, 0 : frame.width]
        disc = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
        pixels = frame.pixels[disc]
        if pixels.size == 0:
            continue
        sampled = True
        lo = np.minimum(lo, pixels.min(axis=0))
        hi = np.maximum(hi, pixels.max(axis=0))
    if not sampled:
        raise EmptyCalibration("no pixels fell inside any calibration disc")
    return ColorRange(tuple(int(c) for c in lo), tuple(int(c) for c in hi))


def threshold_color_range(frame: Frame, color_range: ColorRange) -> BinaryMask:
    """Foreground iff every channel lies inside the range, inclusive."""
    if not color_range.valid:
        raise InvalidRange(
            f"min {color_range.min} exceeds max {color_range.max} on some channel"
        )
    lo = np.asarray(color_range.min, dtype=np.uint8)
    hi = np.asarray(color_range.max, dtype=np.uint8)
    inside = np.logical_and(frame.pixels >= lo, frame.pixels <= hi).all(axis=2)
    return BinaryMask.from_bool(inside)


def background_subtract(
    gray: GrayFrame, background: GrayFrame, cfg: SegmentationConfig
) -> BinaryMask:
    """Foreground iff |frame - background| exceeds bg_diff_threshold."""
    if (gray.height, gray.width) != (background.height, background.width):
        raise DimensionMismatch(
            f"frame {gray.width}x{gray.height} vs "
            f"background {background.width}x{background.height}"
        )
    diff = np.abs(gray.pixels.astype(np.int16) - background.pixels.astype(np.int16))
    return BinaryMask.from_bool(diff > cfg.bg_diff_threshold)


def segment(
    frame: Frame, cfg: SegmentationConfig, aux: Optional[SegmentationAux] = None
) -> BinaryMask:
    """Dispatch to the configured method, checking required aux state."""
    if cfg.method == "static":
        return threshold_binary(to_grayscale(frame), cfg.static_t)
    if cfg.method == "incremental":
        _, mask = incremental_threshold(to_grayscale(frame), cfg)
        return mask
    if cfg.method == "otsu":
        gray = to_grayscale(frame)
        return threshold_binary(gray, otsu_threshold(histogram(gray)))
    if cfg.method == "calibrated":
        if aux is None or aux.color_range is None:
            raise MissingAuxState("method 'calibrated' needs a calibrated ColorRange")
        return threshold_color_range(frame, aux.color_range)
    if cfg.method == "color_range":
        if cfg.color_range is None:
            raise MissingAuxState(
                "method 'color_range' needs a color_range in the segmentation config"
            )
        return threshold_color_range(frame, cfg.color_range)
    if cfg.method == "background_sub":
        if aux is None or aux.background is None:
            raise MissingAuxState("method 'background_sub' needs a background frame")
        return background_subtract(to_grayscale(frame), aux.background, cfg)
    raise ConfigInvalid(f"unknown segmentation method {cfg.method!r}")
