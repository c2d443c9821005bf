"""JSON config loading and saving for the pipeline.

The file shape mirrors PipelineConfig section by section; unknown keys
are rejected so typos fail loudly instead of silently using defaults.
A machine-readable schema ships in data/config.schema.json.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .errors import ConfigInvalid
from .gesture import CommandMap
from .pipeline import (
    GeometryConfig,
    GestureConfig,
    OutputConfig,
    PipelineConfig,
)
from .segmentation import ColorRange, SegmentationConfig, ThresholdValue


def _require_mapping(value: Any, where: str) -> Mapping:
    if not isinstance(value, Mapping):
        raise ConfigInvalid(f"{where} must be a JSON object, got {type(value).__name__}")
    return value


def _check_keys(d: Mapping, allowed: set[str], where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigInvalid(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _color_range_from_json(d: Any, where: str) -> ColorRange:
    m = _require_mapping(d, where)
    _check_keys(m, {"min", "max"}, where)
    try:
        lo = tuple(int(c) for c in m["min"])
        hi = tuple(int(c) for c in m["max"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"{where} needs integer 'min' and 'max' triples: {exc}") from None
    return ColorRange(lo, hi)


def color_range_to_json(r: ColorRange) -> dict:
    return {"min": list(r.min), "max": list(r.max)}


def load_color_range(path: Union[str, Path]) -> ColorRange:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigInvalid(f"range file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"range file {path} is not valid JSON: {exc}") from None
    return _color_range_from_json(raw, f"range file {path}")


def save_color_range(r: ColorRange, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(color_range_to_json(r), indent=2) + "\n")


def _segmentation_from_json(d: Mapping) -> SegmentationConfig:
    _check_keys(
        d,
        {
            "method",
            "static_t",
            "incr_lo",
            "incr_hi",
            "incr_step",
            "calib_radius_fraction",
            "bg_diff_threshold",
            "min_blob_area",
            "max_blob_area_fraction",
            "color_range",
        },
        "segmentation",
    )
    kwargs: dict[str, Any] = {}
    for key in ("method", "incr_lo", "incr_hi", "incr_step", "bg_diff_threshold"):
        if key in d:
            kwargs[key] = d[key]
    for key in ("calib_radius_fraction", "max_blob_area_fraction"):
        if key in d:
            kwargs[key] = float(d[key])
    if "static_t" in d:
        kwargs["static_t"] = ThresholdValue(d["static_t"])
    if "min_blob_area" in d and d["min_blob_area"] is not None:
        kwargs["min_blob_area"] = int(d["min_blob_area"])
    if d.get("color_range") is not None:
        kwargs["color_range"] = _color_range_from_json(
            d["color_range"], "segmentation.color_range"
        )
    return SegmentationConfig(**kwargs)


def _section(d: Mapping, name: str, cls, field_names: set[str]):
    sub = _require_mapping(d.get(name, {}), name)
    _check_keys(sub, field_names, name)
    return cls(**sub)


def config_from_json(raw: Any) -> PipelineConfig:
    d = _require_mapping(raw, "config")
    _check_keys(
        d, {"segmentation", "geometry", "gesture", "command_map", "output"}, "config"
    )
    try:
        segmentation = _segmentation_from_json(
            _require_mapping(d.get("segmentation", {}), "segmentation")
        )
        geometry = _section(
            d, "geometry", GeometryConfig, {"connectivity", "min_area"}
        )
        gesture = _section(
            d,
            "gesture",
            GestureConfig,
            {"large_defect_k", "dwell_frames", "radius", "miss_limit", "mode"},
        )
        output = _section(
            d, "output", OutputConfig, {"annotate", "annotate_dir", "events"}
        )
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from None
    command_map = CommandMap.default()
    if "command_map" in d:
        m = _require_mapping(d["command_map"], "command_map")
        for key, value in m.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise ConfigInvalid("command_map must map strings to strings")
        command_map = CommandMap(dict(m))
    return PipelineConfig(
        segmentation=segmentation,
        geometry=geometry,
        gesture=gesture,
        command_map=command_map,
        output=output,
    )


def load_config(path: Union[str, Path]) -> PipelineConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigInvalid(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config file {path} is not valid JSON: {exc}") from None
    return config_from_json(raw)


def config_to_json(cfg: PipelineConfig) -> dict:
    seg = asdict(cfg.segmentation)
    seg["static_t"] = cfg.segmentation.static_t.t
    seg["color_range"] = (
        color_range_to_json(cfg.segmentation.color_range)
        if cfg.segmentation.color_range is not None
        else None
    )
    return {
        "segmentation": seg,
        "geometry": asdict(cfg.geometry),
        "gesture": asdict(cfg.gesture),
        "command_map": dict(cfg.command_map.mapping),
        "output": asdict(cfg.output),
    }


def save_config(cfg: PipelineConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(config_to_json(cfg), indent=2) + "\n")
