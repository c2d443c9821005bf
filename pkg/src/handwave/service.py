"""Local streaming service: MJPEG frames, WebSocket events, runtime control.

One worker thread owns the pipeline and is the only writer of config and
state; HTTP/WS handlers validate control messages synchronously against a
config snapshot, ack, and enqueue the change, which the worker applies
between frames. Subscribers get bounded queues (256 events, 8 frames);
overflowing a queue disconnects that subscriber instead of stalling the
pipeline.
"""

import asyncio
import io
import json
import logging
import socket
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, AsyncIterator, Callable, Optional

from .config import color_range_to_json, config_to_json
from .errors import BindFailed, ConfigInvalid, HandwaveError
from .draw import render
from .gesture import TrackerState
from .pipeline import (
    EVENT_TIMEBASE_FPS,
    PipelineConfig,
    PipelineState,
    event_to_wire,
    process_frame,
)
from .segmentation import (
    METHODS,
    SegmentationAux,
    ThresholdValue,
    calibrate_color_range,
)
from .sources import open_frame_source

log = logging.getLogger(__name__)

EVENT_BACKLOG = 256
FRAME_BACKLOG = 8
JPEG_QUALITY = 80
DEFAULT_CALIBRATION_FRAMES = 10


class _Subscriber:
    """Bounded asyncio queue fed from the worker thread.

    Overflow marks the subscriber dead and replaces the backlog with a
    single end-of-stream sentinel (None), so its handler wakes up and
    closes promptly.
    """

    def __init__(self, loop: asyncio.AbstractEventLoop, maxsize: int):
        self.loop = loop
        self.queue: asyncio.Queue = asyncio.Queue(maxsize=maxsize)
        self.dead = False

    def push_threadsafe(self, item: Any) -> None:
        try:
            self.loop.call_soon_threadsafe(self._push, item)
        except RuntimeError:
            self.dead = True  # loop shut down
    def _push(self, item: Any) -> None:
        if self.dead:
            return
        try:
            self.queue.put_nowait(item)
        except asyncio.QueueFull:
            self.dead = True
            while not self.queue.empty():
                self.queue.get_nowait()
            self.queue.put_nowait(None)


@dataclass
class _Calibration:
    remaining: int
    frames: list = field(default_factory=list)


class StreamService:
    """Pipeline worker plus subscriber fan-out; the app wires HTTP onto this."""

    def __init__(
        self,
        cfg: PipelineConfig,
        source_descriptor: str,
        aux: Optional[SegmentationAux] = None,
        fps: float = float(EVENT_TIMEBASE_FPS),
    ):
        self._lock = threading.Lock()
        self.cfg = cfg
        self.aux = aux or SegmentationAux()
        self.source_descriptor = source_descriptor
        self.fps = fps
        self.last_frame = -1
        self.calibration: Optional[_Calibration] = None
        self.pending_background = False
        self._pending_cfg: list[PipelineConfig] = []
        self._event_subs: list[_Subscriber] = []
        self._frame_subs: list[_Subscriber] = []
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self._loop: Optional[asyncio.AbstractEventLoop] = None

    # -- lifecycle ---------------------------------------------------------
    def start(self, loop: asyncio.AbstractEventLoop) -> None:
        self._loop = loop
        self._thread = threading.Thread(target=self._run, name="pipeline", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=10)

    # -- subscriber management ----------------------------------------------
    def subscribe_events(self) -> _Subscriber:
        sub = _Subscriber(self._require_loop(), EVENT_BACKLOG)
        with self._lock:
            self._event_subs.append(sub)
        return sub

    def subscribe_frames(self) -> _Subscriber:
        sub = _Subscriber(self._require_loop(), FRAME_BACKLOG)
        with self._lock:
            self._frame_subs.append(sub)
        return sub

    def unsubscribe(self, sub: _Subscriber) -> None:
        sub.dead = True
        with self._lock:
            for pool in (self._event_subs, self._frame_subs):
                if sub in pool:
                    pool.remove(sub)

    def _require_loop(self) -> asyncio.AbstractEventLoop:
        if self._loop is None:
            raise RuntimeError("service not started")
        return self._loop

    # -- control -------------------------------------------------------------
    def apply_control(self, message: Any) -> dict:
        """Validate one control message and stage it; returns the ack."""
        try:
            kind, params = self._parse_control(message)
            handler = {
                "set_method": self._ctl_set_method,
                "set_param": self._ctl_set_param,
                "set_mode": self._ctl_set_mode,
                "start_calibration": self._ctl_start_calibration,
                "set_background": self._ctl_set_background,
            }[kind]
        except ConfigInvalid as exc:
            return {"ok": False, "error": str(exc)}
        except KeyError:
            return {"ok": False, "error": f"unknown control kind {kind!r}"}
        try:
            handler(params)
        except HandwaveError as exc:
            return {"ok": False, "error": str(exc)}
        except (TypeError, ValueError) as exc:
            return {"ok": False, "error": str(exc)}
        return {"ok": True}

    @staticmethod
    def _parse_control(message: Any) -> tuple[str, dict]:
        if not isinstance(message, dict) or len(message) != 1:
            raise ConfigInvalid(
                "control message must be an object with exactly one key"
            )
        kind, params = next(iter(message.items()))
        if params is None:
            params = {}
        if not isinstance(params, dict):
            raise ConfigInvalid(f"parameters of {kind!r} must be an object")
        return kind, params

    def _stage_config(self, build: Callable[[PipelineConfig], PipelineConfig]) -> None:
        with self._lock:
            base = self._pending_cfg[-1] if self._pending_cfg else self.cfg
            candidate = build(base)  # dataclass validation runs here
            self._pending_cfg.append(candidate)

    def _ctl_set_method(self, params: dict) -> None:
        method = params.get("method")
        if method not in METHODS:
            raise ConfigInvalid(f"unknown method {method!r}")
        with self._lock:
            aux = self.aux
            cfg = self._pending_cfg[-1] if self._pending_cfg else self.cfg
        if method == "calibrated" and aux.color_range is None:
            raise ConfigInvalid("no calibrated range yet; run start_calibration first")
        if method == "background_sub" and aux.background is None:
            raise ConfigInvalid("no background captured yet; run set_background first")
        if method == "color_range" and cfg.segmentation.color_range is None:
            raise ConfigInvalid("config has no color_range for method 'color_range'")
        self._stage_config(
            lambda c: replace(c, segmentation=replace(c.segmentation, method=method))
        )

    _INT_SEG_PARAMS = ("incr_lo", "incr_hi", "incr_step", "bg_diff_threshold", "min_blob_area")
    _FLOAT_SEG_PARAMS = ("calib_radius_fraction", "max_blob_area_fraction")

    def _ctl_set_param(self, params: dict) -> None:
        if set(params) != {"name", "value"}:
            raise ConfigInvalid("set_param needs exactly 'name' and 'value'")
        name, value = params["name"], params["value"]
        if name == "thresh":
            t = ThresholdValue(int(value))
            self._stage_config(
                lambda c: replace(c, segmentation=replace(c.segmentation, static_t=t))
            )
        elif name in self._INT_SEG_PARAMS:
            v = None if value is None and name == "min_blob_area" else int(value)
            self._stage_config(
                lambda c: replace(c, segmentation=replace(c.segmentation, **{name: v}))
            )
        elif name in self._FLOAT_SEG_PARAMS:
            v = float(value)
            self._stage_config(
                lambda c: replace(c, segmentation=replace(c.segmentation, **{name: v}))
            )
        elif name in ("large_defect_k",):
            v = float(value)
            self._stage_config(
                lambda c: replace(c, gesture=replace(c.gesture, large_defect_k=v))
            )
        elif name in ("dwell_frames", "miss_limit"):
            v = int(value)
            self._stage_config(
                lambda c: replace(c, gesture=replace(c.gesture, **{name: v}))
            )
        elif name in ("radius", "dwell_radius"):
            v = float(value)
            self._stage_config(
                lambda c: replace(c, gesture=replace(c.gesture, radius=v))
            )
        elif name == "connectivity":
            v = int(value)
            self._stage_config(
                lambda c: replace(c, geometry=replace(c.geometry, connectivity=v))
            )
        elif name == "min_area":
            v = None if value is None else float(value)
            self._stage_config(
                lambda c: replace(c, geometry=replace(c.geometry, min_area=v))
            )
        else:
            raise ConfigInvalid(f"unknown parameter {name!r}")

    def _ctl_set_mode(self, params: dict) -> None:
        mode = params.get("mode")
        self._stage_config(
            lambda c: replace(c, gesture=replace(c.gesture, mode=mode))
        )

    def _ctl_start_calibration(self, params: dict) -> None:
        n = int(params.get("n_frames", DEFAULT_CALIBRATION_FRAMES))
        if n < 1:
            raise ConfigInvalid(f"n_frames must be >= 1, got {n}")
        with self._lock:
            self.calibration = _Calibration(remaining=n)

    def _ctl_set_background(self, params: dict) -> None:
        if params:
            raise ConfigInvalid("set_background takes no parameters")
        with self._lock:
            self.pending_background = True

    # -- state ----------------------------------------------------------------
    def state_snapshot(self) -> dict:
        with self._lock:
            cfg = self.cfg
            aux = self.aux
            return {
                "config": config_to_json(cfg),
                "subscribers": len(self._event_subs) + len(self._frame_subs),
                "last_frame": self.last_frame,
                "calibrating": self.calibration is not None,
                "color_range": (
                    color_range_to_json(aux.color_range)
                    if aux.color_range is not None
                    else None
                ),
                "has_background": aux.background is not None,
            }

    def snapshot_message(self) -> str:
        return json.dumps({"type": "snapshot", **self.state_snapshot()}, separators=(",", ":"))

    # -- worker -----------------------------------------------------------------
    def _apply_pending(self, state: PipelineState) -> PipelineState:
        with self._lock:
            if not self._pending_cfg:
                return state
            new_cfg = self._pending_cfg[-1]
            self._pending_cfg.clear()
            old_gesture = self.cfg.gesture
            self.cfg = new_cfg
        g = new_cfg.gesture
        if (g.radius, g.dwell_frames, g.miss_limit) != (
            old_gesture.radius,
            old_gesture.dwell_frames,
            old_gesture.miss_limit,
        ):
            tracker = replace(
                state.tracker,
                radius=g.radius,
                dwell_frames=g.dwell_frames,
                miss_limit=g.miss_limit,
                counter=min(state.tracker.counter, g.dwell_frames - 1),
                anti_counter=min(state.tracker.anti_counter, g.miss_limit - 1),
            )
            state = replace(state, tracker=tracker)
        return state

    def _collect_calibration(self, frame) -> None:
        with self._lock:
            cal = self.calibration
        if cal is None:
            return
        cal.frames.append(frame)
        cal.remaining -= 1
        if cal.remaining > 0:
            return
        try:
            color_range = calibrate_color_range(cal.frames, self.cfg.segmentation)
        except HandwaveError as exc:
            log.warning("calibration failed: %s", exc)
            color_range = None
        with self._lock:
            if color_range is not None:
                self.aux = replace(self.aux, color_range=color_range)
            self.calibration = None

    def _broadcast(self, pool: list[_Subscriber], item: Any) -> None:
        with self._lock:
            subs = [s for s in pool if not s.dead]
            pool[:] = subs
        for sub in subs:
            sub.push_threadsafe(item)

    def _encode_jpeg(self, frame) -> bytes:
        from PIL import Image as PILImage

        buf = io.BytesIO()
        PILImage.fromarray(frame.pixels).save(buf, format="JPEG", quality=JPEG_QUALITY)
        return buf.getvalue()

    def _run(self) -> None:
        interval = 1.0 / self.fps if self.fps > 0 else 0.0
        try:
            source = open_frame_source(self.source_descriptor, loop=True)
        except HandwaveError as exc:
            log.error("cannot open source: %s", exc)
            return
        state = PipelineState.initial(self.cfg, self.aux)
        next_deadline = time.monotonic()
        for tagged in source:
            if self._stop.is_set():
                break
            state = self._apply_pending(state)
            with self._lock:
                cfg = self.cfg
                aux = self.aux
                take_background = self.pending_background
                self.pending_background = False
            if take_background:
                from .frame import to_grayscale

                with self._lock:
                    self.aux = replace(self.aux, background=to_grayscale(tagged.frame))
                    aux = self.aux
            self._collect_calibration(tagged.frame)
            with self._lock:
                aux = self.aux
            if state.aux is not aux:
                state = replace(state, aux=aux)
            events, annotated, state = process_frame(
                tagged.frame, cfg, state, frame_index=tagged.index
            )
            for event in events:
                wire = event_to_wire(event, cfg.command_map)
                self._broadcast(self._event_subs, json.dumps(wire, separators=(",", ":")))
            with self._lock:
                has_frame_subs = bool(self._frame_subs)
                self.last_frame = tagged.index
            if has_frame_subs:
                jpeg = self._encode_jpeg(render(annotated))
                self._broadcast(self._frame_subs, jpeg)
            if interval > 0:
                next_deadline += interval
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    self._stop.wait(delay)
                else:
                    next_deadline = time.monotonic()


def build_app(service: StreamService, ui_dir: Optional[Path] = None):
    """FastAPI app over a StreamService; the service starts with the app."""
    from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
    from fastapi.responses import JSONResponse, StreamingResponse
    from fastapi.staticfiles import StaticFiles

    @asynccontextmanager
    async def lifespan(_: "FastAPI") -> AsyncIterator[None]:
        service.start(asyncio.get_running_loop())
        try:
            yield
        finally:
            service.stop()

    app = FastAPI(title="handwave", lifespan=lifespan)

    @app.get("/state")
    async def state() -> JSONResponse:
        return JSONResponse(service.state_snapshot())

    @app.post("/control")
    async def control(request: Request) -> JSONResponse:
        try:
            message = await request.json()
        except Exception:
            return JSONResponse({"ok": False, "error": "body must be JSON"}, status_code=400)
        ack = service.apply_control(message)
        return JSONResponse(ack)

    @app.websocket("/ws/events")
    async def ws_events(ws: WebSocket) -> None:
        await ws.accept()
        sub = service.subscribe_events()
        try:
            await ws.send_text(service.snapshot_message())
            while True:
                item = await sub.queue.get()
                if item is None:
                    break
                await ws.send_text(item)
        except WebSocketDisconnect:
            pass
        finally:
            service.unsubscribe(sub)

    @app.get("/stream.mjpg")
    async def stream() -> StreamingResponse:
        sub = service.subscribe_frames()

        async def parts():
            try:
                while True:
                    jpeg = await sub.queue.get()
                    if jpeg is None:
                        break
                    yield (
                        b"--frame\r\nContent-Type: image/jpeg\r\nContent-Length: "
                        + str(len(jpeg)).encode()
                        + b"\r\n\r\n"
                        + jpeg
                        + b"\r\n"
                    )
            finally:
                service.unsubscribe(sub)

        return StreamingResponse(
            parts(), media_type="multipart/x-mixed-replace; boundary=frame"
        )

    if ui_dir is None:
        ui_dir = Path("frontend") / "dist"
    if ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _check_bindable(host: str, port: int) -> None:
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        raise BindFailed(f"cannot bind {host}:{port}: {exc}") from None


def serve(
    cfg: PipelineConfig,
    source_descriptor: str,
    host: str = "127.0.0.1",
    port: int = 8765,
    aux: Optional[SegmentationAux] = None,
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    _check_bindable(host, port)
    service = StreamService(cfg, source_descriptor, aux=aux)
    app = build_app(service)
    uvicorn.run(app, host=host, port=port, log_level="warning")
