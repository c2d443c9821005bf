import type {
  ClickEvent,
  HandLostEvent,
  PointerMovedEvent,
  SnapshotMessage,
} from "../src/types.js";

export function makeSnapshot(
  overrides: {
    method?: SnapshotMessage["config"]["segmentation"]["method"];
    static_t?: number;
    mode?: SnapshotMessage["config"]["gesture"]["mode"];
    dwell_frames?: number;
    radius?: number;
  } = {},
): SnapshotMessage {
  return {
    type: "snapshot",
    subscribers: 1,
    last_frame: 0,
    calibrating: false,
    color_range: null,
    has_background: false,
    config: {
      segmentation: {
        method: overrides.method ?? "otsu",
        static_t: overrides.static_t ?? 70,
        incr_lo: 20,
        incr_hi: 160,
        incr_step: 1,
        calib_radius_fraction: 0.1,
        bg_diff_threshold: 25,
        min_blob_area: null,
        max_blob_area_fraction: 0.6,
        color_range: null,
      },
      geometry: { connectivity: 8, min_area: null },
      gesture: {
        large_defect_k: 0.2,
        dwell_frames: overrides.dwell_frames ?? 30,
        radius: overrides.radius ?? 12,
        miss_limit: 2,
        mode: overrides.mode ?? "all",
      },
      command_map: {},
      output: { annotate: false, annotate_dir: null, events: "-" },
    },
  };
}

let seq = 0;

export function pointerMoved(x: number, y: number): PointerMovedEvent {
  seq += 1;
  return { type: "pointer_moved", x, y, frame: seq, ts_ms: seq * 33 };
}

export function click(x: number, y: number): ClickEvent {
  seq += 1;
  return { type: "click", x, y, frame: seq, ts_ms: seq * 33 };
}

export function handLost(): HandLostEvent {
  seq += 1;
  return { type: "hand_lost", frame: seq, ts_ms: seq * 33 };
}
