"""Per-frame pipeline: segmentation, topology, gesture, event emission.

process_frame is a pure transition: (frame, config, state) in, (events,
annotated frame, state') out. Stage failures on a frame are demoted to
diagnostics (the hand is simply absent that frame); a live source must
outlive bad frames.

Event records serialize to JSON lines with a synthetic millisecond
timestamp derived from the frame index at a nominal 30 fps, so identical
inputs produce byte-identical event streams.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from .draw import AnnotatedFrame, DefectMarker
from .errors import ConfigInvalid, HandwaveError
from .frame import Frame
from .gesture import (
    ClickEvent,
    CommandMap,
    FingerCountEvent,
    GestureEvent,
    HandLostEvent,
    OrientationEvent,
    PointerMovedEvent,
    TrackerState,
    count_fingers,
    dwell_click_update,
    hand_orientation,
    large_defects,
    map_command,
    track_fingertip,
)
from .segmentation import (
    SegmentationAux,
    SegmentationConfig,
    resolve_min_blob_area,
)
from .segmentation import segment as segment_frame
from .topology import (
    DEFAULT_LARGE_DEFECT_K,
    Contour,
    convex_hull,
    convexity_defects,
    extract_contours,
    is_hand,
    largest_contour,
)

log = logging.getLogger(__name__)

EVENT_TIMEBASE_FPS = 30

MODES = ("count", "orientation", "pointer", "all")


@dataclass(frozen=True)
class GeometryConfig:
    """Blob-to-contour stage knobs; min_area of None means 0.2% of frame area."""

    connectivity: int = 8
    min_area: Optional[float] = None

    def __post_init__(self) -> None:
        if self.connectivity not in (4, 8):
            raise ConfigInvalid(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.min_area is not None and self.min_area < 0:
            raise ConfigInvalid(f"min_area {self.min_area} is negative")


@dataclass(frozen=True)
class GestureConfig:
    large_defect_k: float = DEFAULT_LARGE_DEFECT_K
    dwell_frames: int = 30
    radius: float = 12.0
    miss_limit: int = 2
    mode: str = "all"

    def __post_init__(self) -> None:
        if self.large_defect_k <= 0:
            raise ConfigInvalid(f"large_defect_k must be positive, got {self.large_defect_k}")
        if self.dwell_frames < 1:
            raise ConfigInvalid(f"dwell_frames must be >= 1, got {self.dwell_frames}")
        if self.radius <= 0:
            raise ConfigInvalid(f"dwell radius must be positive, got {self.radius}")
        if self.miss_limit < 1:
            raise ConfigInvalid(f"miss_limit must be >= 1, got {self.miss_limit}")
        if self.mode not in MODES:
            raise ConfigInvalid(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class OutputConfig:
    annotate: bool = False
    annotate_dir: Optional[str] = None
    events: str = "-"

    def __post_init__(self) -> None:
        if self.annotate and not self.annotate_dir:
            raise ConfigInvalid("annotate is on but annotate_dir is not set")


@dataclass(frozen=True)
class PipelineConfig:
    segmentation: SegmentationConfig = field(default_factory=SegmentationConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    gesture: GestureConfig = field(default_factory=GestureConfig)
    command_map: CommandMap = field(default_factory=CommandMap.default)
    output: OutputConfig = field(default_factory=OutputConfig)

    def tracker(self) -> TrackerState:
        return TrackerState(
            radius=self.gesture.radius,
            dwell_frames=self.gesture.dwell_frames,
            miss_limit=self.gesture.miss_limit,
        )


@dataclass(frozen=True)
class PipelineState:
    """Everything that persists across frames."""

    tracker: TrackerState = field(default_factory=TrackerState)
    hand_present: bool = False
    aux: SegmentationAux = field(default_factory=SegmentationAux)

    @classmethod
    def initial(cls, cfg: PipelineConfig, aux: Optional[SegmentationAux] = None
               ) -> "PipelineState":
        return cls(tracker=cfg.tracker(), hand_present=False, aux=aux or SegmentationAux())


def _detect(frame: Frame, cfg: PipelineConfig, aux: SegmentationAux) -> Optional[tuple]:
    """Segment and validate; returns (contour, hull, defects) or None."""
    mask = segment_frame(frame, cfg.segmentation, aux)
    contours = extract_contours(mask)
    gate = cfg.geometry.min_area
    if gate is None:
        gate = resolve_min_blob_area(cfg.segmentation, frame.width, frame.height)
    contour = largest_contour(contours, gate)
    if contour is None or len(contour.points) < 3:
        return None
    hull = convex_hull(contour)
    defects = convexity_defects(contour, hull)
    ok, _score = is_hand(
        contour,
        defects,
        frame.width,
        frame.height,
        min_area=resolve_min_blob_area(cfg.segmentation, frame.width, frame.height),
        max_blob_area_fraction=cfg.segmentation.max_blob_area_fraction,
        large_defect_k=cfg.gesture.large_defect_k,
    )
    if not ok:
        return None
    return contour, hull, defects


def process_frame(
    frame: Frame,
    cfg: PipelineConfig,
    state: PipelineState,
    frame_index: int = 0,
) -> tuple[list[GestureEvent], AnnotatedFrame, PipelineState]:
    """Run one frame through the pipeline and advance the state."""
    mode = cfg.gesture.mode
    try:
        found = _detect(frame, cfg, state.aux)
    except HandwaveError as exc:
        log.warning("frame %d: %s", frame_index, exc)
        found = None

    events: list[GestureEvent] = []
    tracker = state.tracker

    if found is None:
        if mode in ("pointer", "all"):
            tracker, _click = dwell_click_update(tracker, None)
        if state.hand_present:
            events.append(HandLostEvent(frame=frame_index))
        annotated = AnnotatedFrame(
            frame=frame,
            dwell_center=tracker.center if mode in ("pointer", "all") else None,
            dwell_radius=tracker.radius if mode in ("pointer", "all") else 0.0,
            dwell_progress=tracker.counter / tracker.dwell_frames,
        )
        return events, annotated, replace(state, tracker=tracker, hand_present=False)

    contour, hull, defects = found
    large = large_defects(defects, contour.bbox, cfg.gesture.large_defect_k)

    if mode in ("count", "all"):
        try:
            events.append(FingerCountEvent(value=count_fingers(large), frame=frame_index))
        except HandwaveError as exc:
            log.warning("frame %d: %s", frame_index, exc)
    if mode in ("orientation", "all"):
        try:
            events.append(
                OrientationEvent(value=hand_orientation(defects, contour), frame=frame_index)
            )
        except HandwaveError as exc:
            log.warning("frame %d: %s", frame_index, exc)

    fingertip = None
    if mode in ("pointer", "all"):
        fingertip = track_fingertip(contour)
        events.append(PointerMovedEvent(point=fingertip, frame=frame_index))
        tracker, click = dwell_click_update(tracker, fingertip)
        if click is not None:
            events.append(ClickEvent(point=click, frame=frame_index))

    annotated = AnnotatedFrame(
        frame=frame,
        contour=contour.points,
        hull=tuple(contour.points[i] for i in hull.indices),
        defects=tuple(
            DefectMarker(
                start=contour.points[d.start_index],
                end=contour.points[d.end_index],
                farthest=contour.points[d.farthest_index],
            )
            for d in large
        ),
        fingertip=fingertip,
        dwell_center=tracker.center if mode in ("pointer", "all") else None,
        dwell_radius=tracker.radius if mode in ("pointer", "all") else 0.0,
        dwell_progress=tracker.counter / tracker.dwell_frames,
    )
    return events, annotated, replace(state, tracker=tracker, hand_present=True)


def event_to_wire(
    event: GestureEvent,
    command_map: Optional[CommandMap] = None,
    fps: int = EVENT_TIMEBASE_FPS,
) -> dict:
    """Flat JSON-ready record: type, value/coords, frame, synthetic ts_ms."""
    record: dict = {"type": event.kind}
    if isinstance(event, (FingerCountEvent, OrientationEvent)):
        record["value"] = event.value.value
    elif isinstance(event, (PointerMovedEvent, ClickEvent)):
        record["x"] = event.point.x
        record["y"] = event.point.y
    record["frame"] = event.frame
    record["ts_ms"] = round(event.frame * 1000 / fps)
    if command_map is not None:
        command = map_command(event, command_map)
        if command is not None:
            record["command"] = command
    return record


def event_to_json_line(
    event: GestureEvent,
    command_map: Optional[CommandMap] = None,
    fps: int = EVENT_TIMEBASE_FPS,
) -> str:
    return json.dumps(event_to_wire(event, command_map, fps), separators=(",", ":"))
