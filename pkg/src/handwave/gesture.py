"""Gesture extraction: finger counts, orientation, fingertip dwell clicks.

Works on the geometry produced by the topology module. Every operation is
a pure function; the dwell tracker is a value (TrackerState) threaded
through updates rather than a mutable object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import ClassVar, Optional, Sequence, Union

from .errors import (
    ConfigInvalid,
    EmptyContour,
    IndeterminateOrientation,
    InvalidDefectCount,
    NoDefects,
)
from .topology import DEFAULT_LARGE_DEFECT_K, BBox, Contour, ConvexityDefect, Point

DEFAULT_DWELL_FRAMES = 30
DEFAULT_DWELL_RADIUS = 12.0
DEFAULT_MISS_LIMIT = 2


class FingerCount(Enum):
    """Discrete finger count; zero and one finger are indistinguishable."""

    AMBIGUOUS_ZERO_OR_ONE = "ambiguous_zero_or_one"
    TWO = "two"
    THREE = "three"
    FOUR = "four"
    FIVE = "five"


class Orientation(Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class TrackerState:
    """Dwell-click machine: a center, a hit counter, and a miss counter."""

    center: Optional[Point] = None
    counter: int = 0
    anti_counter: int = 0
    radius: float = DEFAULT_DWELL_RADIUS
    dwell_frames: int = DEFAULT_DWELL_FRAMES
    miss_limit: int = DEFAULT_MISS_LIMIT

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ConfigInvalid(f"dwell radius must be positive, got {self.radius}")
        if self.dwell_frames < 1:
            raise ConfigInvalid(f"dwell_frames must be >= 1, got {self.dwell_frames}")
        if self.miss_limit < 1:
            raise ConfigInvalid(f"miss_limit must be >= 1, got {self.miss_limit}")
        if self.counter < 0 or self.anti_counter < 0:
            raise ConfigInvalid("counters cannot be negative")


@dataclass(frozen=True)
class FingerCountEvent:
    kind: ClassVar[str] = "finger_count"
    value: FingerCount
    frame: int


@dataclass(frozen=True)
class OrientationEvent:
    kind: ClassVar[str] = "orientation"
    value: Orientation
    frame: int


@dataclass(frozen=True)
class PointerMovedEvent:
    kind: ClassVar[str] = "pointer_moved"
    point: Point
    frame: int


@dataclass(frozen=True)
class ClickEvent:
    kind: ClassVar[str] = "click"
    point: Point
    frame: int


@dataclass(frozen=True)
class HandLostEvent:
    kind: ClassVar[str] = "hand_lost"
    frame: int


GestureEvent = Union[
    FingerCountEvent, OrientationEvent, PointerMovedEvent, ClickEvent, HandLostEvent
]

DEFAULT_ORIENTATION_COMMANDS = {
    "up": "forward",
    "down": "backward",
    "left": "left",
    "right": "right",
}

DEFAULT_COUNT_COMMANDS = {
    "two": "forward",
    "three": "backward",
    "four": "right",
    "five": "stop",
    "ambiguous_zero_or_one": "left",
}


@dataclass(frozen=True)
class CommandMap:
    """Gesture key (enum wire value) to command string; unmapped keys yield nothing."""

    mapping: dict[str, str] = field(default_factory=dict)

    @classmethod
    def default(cls) -> "CommandMap":
        return cls({**DEFAULT_ORIENTATION_COMMANDS, **DEFAULT_COUNT_COMMANDS})


def large_defects(
    defects: Sequence[ConvexityDefect], bbox: BBox, k: float = DEFAULT_LARGE_DEFECT_K
) -> list[ConvexityDefect]:
    """Keep defects deep enough to be finger gaps: depth >= k * bbox height."""
    floor = k * bbox.y_extent
    return [d for d in defects if d.depth >= floor]


def count_fingers(large: Sequence[ConvexityDefect]) -> FingerCount:
    """n large defects mean n+1 fingers; none means zero-or-one, ambiguous."""
    n = len(large)
    if n == 0:
        return FingerCount.AMBIGUOUS_ZERO_OR_ONE
    if n > 4:
        raise InvalidDefectCount(f"{n} large defects exceed a five-finger hand")
    return (FingerCount.TWO, FingerCount.THREE, FingerCount.FOUR, FingerCount.FIVE)[n - 1]


def hand_orientation(
    defects: Sequence[ConvexityDefect], contour: Contour
) -> Orientation:
    """Direction from the deepest defect point toward its hull chord midpoint.

    Comparisons use doubled integer coordinates, so axis dominance and
    signs are exact; equal magnitudes fall to the vertical branch.
    """
    if not defects:
        raise NoDefects("orientation needs at least one convexity defect")
    deepest = max(defects, key=lambda d: d.depth)
    s = contour.points[deepest.start_index]
    e = contour.points[deepest.end_index]
    d = contour.points[deepest.farthest_index]
    dx2 = s.x + e.x - 2 * d.x
    dy2 = s.y + e.y - 2 * d.y
    if dx2 == 0 and dy2 == 0:
        raise IndeterminateOrientation("defect midpoint coincides with depth point")
    if abs(dy2) >= abs(dx2):
        return Orientation.UP if dy2 < 0 else Orientation.DOWN
    return Orientation.RIGHT if dx2 > 0 else Orientation.LEFT


def track_fingertip(contour: Contour) -> Point:
    """Topmost contour point; the leftmost one if several share the top row."""
    if not contour.points:
        raise EmptyContour("cannot track a fingertip on an empty contour")
    return min(contour.points, key=lambda p: (p.y, p.x))


def dwell_click_update(
    state: TrackerState, fingertip: Optional[Point]
) -> tuple[TrackerState, Optional[Point]]:
    """Advance the dwell machine one frame; a click fires at the dwell center.

    A fingertip within `radius` of the center (inclusive) counts toward
    dwell_frames; misses accumulate in anti_counter, and hitting
    miss_limit resets the count and recenters on the current fingertip.
    """
    if state.center is None and fingertip is not None:
        return replace(state, center=fingertip, counter=1, anti_counter=0), None
    if (
        fingertip is not None
        and state.center is not None
        and math.hypot(fingertip.x - state.center.x, fingertip.y - state.center.y)
        <= state.radius
    ):
        counter = state.counter + 1
        if counter == state.dwell_frames:
            return replace(state, counter=0, anti_counter=0), state.center
        return replace(state, counter=counter, anti_counter=0), None
    anti = state.anti_counter + 1
    if anti == state.miss_limit:
        return replace(state, counter=0, anti_counter=0, center=fingertip), None
    return replace(state, anti_counter=anti), None


def map_command(event: GestureEvent, command_map: CommandMap) -> Optional[str]:
    """Command string for count/orientation events; other events map to nothing."""
    if isinstance(event, (FingerCountEvent, OrientationEvent)):
        return command_map.mapping.get(event.value.value)
    return None
