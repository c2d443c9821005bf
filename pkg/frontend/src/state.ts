/** Client-side UI state: event log, pointer, and dwell progress estimate. */

import type { PipelineEvent, SnapshotMessage } from "./types.js";

export const EVENT_LOG_CAPACITY = 500;

/** Fixed-capacity FIFO; once full, each push drops the oldest entry. */
export class RingBuffer<T> {
  private items: T[] = [];

  constructor(readonly capacity: number) {
    if (capacity < 1) {
      throw new RangeError(`capacity must be positive, got ${capacity}`);
    }
  }

  get length(): number {
    return this.items.length;
  }

  push(item: T): void {
    this.items.push(item);
    if (this.items.length > this.capacity) {
      this.items.shift();
    }
  }

  /** Oldest first; a copy, safe to keep. */
  toArray(): T[] {
    return this.items.slice();
  }

  /** Newest first, at most n entries. */
  latest(n: number): T[] {
    return this.items.slice(-n).reverse();
  }
}

export interface DwellParams {
  radius: number;
  dwellFrames: number;
}

/**
 * Client-side approximation of the tracker's dwell counter. The tracker's
 * internal state is not on the wire, so progress is derived from the
 * pointer_moved cadence: observations since the pointer last entered a new
 * area (moved farther than the dwell radius from the current anchor),
 * divided by dwell_frames.
 */
export class DwellEstimator {
  private anchorX: number | null = null;
  private anchorY: number | null = null;
  private frames = 0;

  /** Feed one pointer observation; returns progress in [0, 1]. */
  update(x: number, y: number, params: DwellParams): number {
    const entered =
      this.anchorX === null ||
      this.anchorY === null ||
      Math.hypot(x - this.anchorX, y - this.anchorY) > params.radius;
    if (entered) {
      this.anchorX = x;
      this.anchorY = y;
      this.frames = 0;
    } else {
      this.frames += 1;
    }
    return this.progress(params);
  }

  progress(params: DwellParams): number {
    if (params.dwellFrames < 1) {
      return 0;
    }
    return Math.min(1, this.frames / params.dwellFrames);
  }

  reset(): void {
    this.anchorX = null;
    this.anchorY = null;
    this.frames = 0;
  }
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

/**
 * Everything the page renders from, updated one server message at a time.
 * Event log order is arrival order; nothing here reorders events.
 */
export class UiState {
  status: ConnectionStatus = "connecting";
  snapshot: SnapshotMessage | null = null;
  readonly log = new RingBuffer<PipelineEvent>(EVENT_LOG_CAPACITY);
  pointer: { x: number; y: number } | null = null;
  dwellProgress = 0;
  hits = 0;
  misses = 0;
  private readonly dwell = new DwellEstimator();

  private dwellParams(): DwellParams {
    const gesture = this.snapshot?.config.gesture;
    return {
      radius: gesture?.radius ?? 12,
      dwellFrames: gesture?.dwell_frames ?? 30,
    };
  }

  /** A (re)connect snapshot replaces any stale live state. */
  applySnapshot(snapshot: SnapshotMessage): void {
    this.snapshot = snapshot;
    this.pointer = null;
    this.dwell.reset();
    this.dwellProgress = 0;
  }

  applyEvent(event: PipelineEvent): void {
    this.log.push(event);
    switch (event.type) {
      case "pointer_moved":
        this.pointer = { x: event.x, y: event.y };
        this.dwellProgress = this.dwell.update(event.x, event.y, this.dwellParams());
        break;
      case "click":
        this.dwell.reset();
        this.dwellProgress = 0;
        break;
      case "hand_lost":
        this.pointer = null;
        this.dwell.reset();
        this.dwellProgress = 0;
        break;
      case "finger_count":
      case "orientation":
        break;
    }
  }

  recordClickResult(hit: boolean): void {
    if (hit) {
      this.hits += 1;
    } else {
      this.misses += 1;
    }
  }
}
