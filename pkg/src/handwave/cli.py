"""Command-line entry points: run, calibrate, serve.

`run` streams a frame source through the pipeline and writes JSON-lines
events. `calibrate` samples frames and writes a color range file.
`serve` starts the local stream service. Exit codes: 0 success, 1
runtime failure, 2 invalid configuration, 3 missing source.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .codecs import load_frame, save_image
from .config import load_config, load_color_range, save_color_range
from .draw import render
from .errors import ConfigInvalid, HandwaveError, SourceNotFound
from .frame import to_grayscale
from .gesture import CommandMap
from .pipeline import (
    OutputConfig,
    PipelineConfig,
    PipelineState,
    event_to_json_line,
    process_frame,
)
from .segmentation import METHODS, SegmentationAux, ThresholdValue, calibrate_color_range
from .sources import open_frame_source


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handwave",
        description="Hand segmentation and gesture input from frame streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="frame source: directory, image file, synth:<spec>, camera:<n>")
    common.add_argument("--config", help="pipeline config JSON file")
    common.add_argument("--method", choices=METHODS, help="segmentation method override")
    common.add_argument("--thresh", type=int, help="static threshold override (0..255)")
    common.add_argument("--range-file", help="color range JSON (input for run/serve, output for calibrate)")
    common.add_argument("--background", help="background image for background_sub")
    common.add_argument("--mode", choices=("count", "orientation", "pointer", "all"), help="gesture mode override")
    common.add_argument("--dwell-frames", type=int, help="frames of dwell needed for a click")
    common.add_argument("--dwell-radius", type=float, help="dwell area radius in pixels")

    run = sub.add_parser("run", parents=[common], help="process a frame source, emit events")
    run.add_argument("--emit-annotated", metavar="DIR", help="write annotated PNG frames here")
    run.add_argument("--events", default=None, metavar="PATH|-", help="events sink (default stdout)")
    run.add_argument(
        "--calibrate-frames",
        metavar="SOURCE",
        help="calibrate a color range from this source before running",
    )

    cal = sub.add_parser("calibrate", parents=[common], help="sample frames, write a color range file")

    serve = sub.add_parser("serve", parents=[common], help="start the local stream service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    _ = cal
    return parser


def _apply_overrides(cfg: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    seg = cfg.segmentation
    if args.method is not None:
        seg = replace(seg, method=args.method)
    if args.thresh is not None:
        seg = replace(seg, static_t=ThresholdValue(args.thresh))
    gesture = cfg.gesture
    if args.mode is not None:
        gesture = replace(gesture, mode=args.mode)
    if args.dwell_frames is not None:
        gesture = replace(gesture, dwell_frames=args.dwell_frames)
    if args.dwell_radius is not None:
        gesture = replace(gesture, radius=args.dwell_radius)
    output = cfg.output
    if getattr(args, "emit_annotated", None) is not None:
        output = replace(output, annotate=True, annotate_dir=args.emit_annotated)
    if getattr(args, "events", None) is not None:
        output = replace(output, events=args.events)
    return replace(cfg, segmentation=seg, gesture=gesture, output=output)


def _load_base_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    return _apply_overrides(cfg, args)


def _build_aux(cfg: PipelineConfig, args: argparse.Namespace) -> SegmentationAux:
    color_range = None
    background = None
    if getattr(args, "calibrate_frames", None):
        frames = [tagged.frame for tagged in open_frame_source(args.calibrate_frames)]
        color_range = calibrate_color_range(frames, cfg.segmentation)
    elif args.range_file:
        color_range = load_color_range(args.range_file)
    if args.background:
        background = to_grayscale(load_frame(args.background))
    method = cfg.segmentation.method
    if method == "calibrated" and color_range is None:
        raise ConfigInvalid(
            "method 'calibrated' needs --range-file or --calibrate-frames"
        )
    if method == "background_sub" and background is None:
        raise ConfigInvalid("method 'background_sub' needs --background")
    if method == "color_range" and cfg.segmentation.color_range is None:
        raise ConfigInvalid("method 'color_range' needs color_range in the config file")
    return SegmentationAux(color_range=color_range, background=background)


def _require_input(args: argparse.Namespace) -> str:
    if not args.input:
        raise ConfigInvalid("--input is required")
    return args.input


def _open_events_sink(output: OutputConfig):
    if output.events in ("-", "", "stdout"):
        return sys.stdout, False
    return open(output.events, "w", encoding="utf-8", newline="\n"), True


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_base_config(args)
    aux = _build_aux(cfg, args)
    source = open_frame_source(_require_input(args))

    annotate_dir: Optional[Path] = None
    if cfg.output.annotate:
        annotate_dir = Path(cfg.output.annotate_dir)
        annotate_dir.mkdir(parents=True, exist_ok=True)

    sink, owned = _open_events_sink(cfg.output)
    state = PipelineState.initial(cfg, aux)
    try:
        for tagged in source:
            events, annotated, state = process_frame(
                tagged.frame, cfg, state, frame_index=tagged.index
            )
            for event in events:
                sink.write(event_to_json_line(event, cfg.command_map) + "\n")
            if annotate_dir is not None:
                save_image(annotate_dir / f"frame_{tagged.index:06d}.png", render(annotated))
    except KeyboardInterrupt:
        return 130
    finally:
        sink.flush()
        if owned:
            sink.close()
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = _load_base_config(args)
    if not args.range_file:
        raise ConfigInvalid("calibrate needs --range-file to write the result to")
    frames = [tagged.frame for tagged in open_frame_source(_require_input(args))]
    color_range = calibrate_color_range(frames, cfg.segmentation)
    save_color_range(color_range, args.range_file)
    print(f"wrote {args.range_file}: min={color_range.min} max={color_range.max}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    cfg = _load_base_config(args)
    aux = _build_aux(cfg, args)
    serve(cfg, _require_input(args), host=args.host, port=args.port, aux=aux)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "calibrate": _cmd_calibrate, "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except KeyboardInterrupt:
        return 130
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SourceNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HandwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
