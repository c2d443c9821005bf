/** Wire schema shared with the streaming service. */

export const METHODS = [
  "static",
  "incremental",
  "otsu",
  "calibrated",
  "color_range",
  "background_sub",
] as const;
export type Method = (typeof METHODS)[number];

export const MODES = ["count", "orientation", "pointer", "all"] as const;
export type Mode = (typeof MODES)[number];

export interface ColorRangeWire {
  min: [number, number, number];
  max: [number, number, number];
}

export interface SegmentationConfigWire {
  method: Method;
  static_t: number;
  incr_lo: number;
  incr_hi: number;
  incr_step: number;
  calib_radius_fraction: number;
  bg_diff_threshold: number;
  min_blob_area: number | null;
  max_blob_area_fraction: number;
  color_range: ColorRangeWire | null;
}

export interface GestureConfigWire {
  large_defect_k: number;
  dwell_frames: number;
  radius: number;
  miss_limit: number;
  mode: Mode;
}

export interface PipelineConfigWire {
  segmentation: SegmentationConfigWire;
  geometry: { connectivity: number; min_area: number | null };
  gesture: GestureConfigWire;
  command_map: Record<string, string>;
  output: { annotate: boolean; annotate_dir: string | null; events: string };
}

/** Body of GET /state; the WS hello is the same object plus type: "snapshot". */
export interface StateSnapshot {
  config: PipelineConfigWire;
  subscribers: number;
  last_frame: number;
  calibrating: boolean;
  color_range: ColorRangeWire | null;
  has_background: boolean;
}

export interface SnapshotMessage extends StateSnapshot {
  type: "snapshot";
}

interface EventBase {
  frame: number;
  ts_ms: number;
}

export interface FingerCountEvent extends EventBase {
  type: "finger_count";
  value: string;
  command?: string;
}

export interface OrientationEvent extends EventBase {
  type: "orientation";
  value: string;
  command?: string;
}

export interface PointerMovedEvent extends EventBase {
  type: "pointer_moved";
  x: number;
  y: number;
}

export interface ClickEvent extends EventBase {
  type: "click";
  x: number;
  y: number;
}

export interface HandLostEvent extends EventBase {
  type: "hand_lost";
}

export type PipelineEvent =
  | FingerCountEvent
  | OrientationEvent
  | PointerMovedEvent
  | ClickEvent
  | HandLostEvent;

export type ServerMessage = SnapshotMessage | PipelineEvent;

export type ControlMessage =
  | { set_param: { name: string; value: number } }
  | { set_method: { method: Method } }
  | { set_mode: { mode: Mode } }
  | { start_calibration: { n_frames: number } }
  | { set_background: Record<string, never> };

export interface Ack {
  ok: boolean;
  error?: string;
}
