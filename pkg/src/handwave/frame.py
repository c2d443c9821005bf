"""Raster containers (color, grayscale, binary) and basic intensity tools.

All containers wrap a read-only numpy array in row-major order with the
origin at the top-left corner, x growing rightward and y growing downward.
Instances are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# ITU-R BT.601 luma weights, applied with round-half-up.
_LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """An 8-bit RGB raster.

    ``pixels`` has shape (height, width, 3), dtype uint8, and is read-only.
    """

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame dimensions must be >= 1, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {self.pixels.dtype}")
        _freeze(self.pixels)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "Frame":
        a = np.ascontiguousarray(a, dtype=np.uint8)
        return cls(width=a.shape[1], height=a.shape[0], pixels=a)

    @classmethod
    def filled(cls, width: int, height: int, rgb: tuple[int, int, int]) -> "Frame":
        a = np.empty((height, width, 3), dtype=np.uint8)
        a[:, :] = rgb
        return cls(width=width, height=height, pixels=a)

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        r, g, b = self.pixels[y, x]
        return int(r), int(g), int(b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class GrayFrame:
    """An 8-bit grayscale raster; ``pixels`` has shape (height, width)."""

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame dimensions must be >= 1, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {self.pixels.dtype}")
        _freeze(self.pixels)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "GrayFrame":
        a = np.ascontiguousarray(a, dtype=np.uint8)
        return cls(width=a.shape[1], height=a.shape[0], pixels=a)

    @classmethod
    def filled(cls, width: int, height: int, value: int) -> "GrayFrame":
        return cls.from_array(np.full((height, width), value, dtype=np.uint8))

    def pixel(self, x: int, y: int) -> int:
        return int(self.pixels[y, x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayFrame):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """A {0,1} raster; 1 marks hand-candidate (object) pixels.

    ``pixels`` has shape (height, width), dtype uint8, values only 0 or 1.
    """

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"mask dimensions must be >= 1, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {self.pixels.dtype}")
        if not bool(np.all(self.pixels <= 1)):
            raise ValueError("mask values must be 0 or 1")
        _freeze(self.pixels)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "BinaryMask":
        a = np.ascontiguousarray(a, dtype=np.uint8)
        return cls(width=a.shape[1], height=a.shape[0], pixels=a)

    @classmethod
    def from_bool(cls, a: np.ndarray) -> "BinaryMask":
        return cls.from_array(a.astype(np.uint8))

    @classmethod
    def blank(cls, width: int, height: int) -> "BinaryMask":
        return cls.from_array(np.zeros((height, width), dtype=np.uint8))

    def foreground_count(self) -> int:
        return int(self.pixels.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class Histogram:
    """256 intensity-bin counts; ``total`` equals the source pixel count."""

    bins: np.ndarray = field(repr=False)
    total: int

    def __post_init__(self) -> None:
        if self.bins.shape != (256,):
            raise ValueError(f"histogram must have 256 bins, got shape {self.bins.shape}")
        if bool(np.any(self.bins < 0)):
            raise ValueError("histogram bins must be non-negative")
        if int(self.bins.sum()) != self.total:
            raise ValueError("histogram total does not match bin sum")
        _freeze(self.bins)

    @classmethod
    def from_counts(cls, counts) -> "Histogram":
        a = np.asarray(counts, dtype=np.int64)
        return cls(bins=a, total=int(a.sum()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.total == other.total and np.array_equal(self.bins, other.bins)


def to_grayscale(frame: Frame) -> GrayFrame:
    """Convert an RGB frame to grayscale.

    Per-pixel luma is 0.299r + 0.587g + 0.114b rounded half-up and clamped
    to [0, 255]; dimensions are preserved.
    """
    rgb = frame.pixels.astype(np.float64)
    wr, wg, wb = _LUMA_WEIGHTS
    luma = rgb[:, :, 0] * wr + rgb[:, :, 1] * wg + rgb[:, :, 2] * wb
    out = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    return GrayFrame(width=frame.width, height=frame.height, pixels=out)


def histogram(gray: GrayFrame) -> Histogram:
    """Count pixels per intensity value."""
    counts = np.bincount(gray.pixels.ravel(), minlength=256).astype(np.int64)
    return Histogram(bins=counts, total=gray.width * gray.height)
