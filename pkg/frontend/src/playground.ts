/**
 * Pointer playground model: large clickable tiles laid out over the frame,
 * a crosshair fed by pointer events, and per-tile hit counters.
 */

import type { ClickEvent, HandLostEvent, PointerMovedEvent } from "./types.js";

/** Big targets keep miss-clicks rare; side length in frame pixels. */
export const TILE_SIZE = 160;
const TILE_GAP = 40;

export interface Tile {
  id: number;
  x: number;
  y: number;
  size: number;
  hits: number;
}

/**
 * Grid of square tiles centered in a frameW x frameH area, as many as fit
 * with TILE_GAP spacing, always at least one.
 */
export function layoutTiles(
  frameW: number,
  frameH: number,
  size: number = TILE_SIZE,
): Tile[] {
  const cols = Math.max(1, Math.floor((frameW - TILE_GAP) / (size + TILE_GAP)));
  const rows = Math.max(1, Math.floor((frameH - TILE_GAP) / (size + TILE_GAP)));
  const gridW = cols * size + (cols - 1) * TILE_GAP;
  const gridH = rows * size + (rows - 1) * TILE_GAP;
  const left = (frameW - gridW) / 2;
  const top = (frameH - gridH) / 2;
  const tiles: Tile[] = [];
  for (let r = 0; r < rows; r += 1) {
    for (let c = 0; c < cols; c += 1) {
      tiles.push({
        id: tiles.length,
        x: left + c * (size + TILE_GAP),
        y: top + r * (size + TILE_GAP),
        size,
        hits: 0,
      });
    }
  }
  return tiles;
}

/** Tile containing (x, y), edges inclusive; null when the point is in a gap. */
export function tileAt(tiles: readonly Tile[], x: number, y: number): Tile | null {
  for (const tile of tiles) {
    if (
      x >= tile.x &&
      x <= tile.x + tile.size &&
      y >= tile.y &&
      y <= tile.y + tile.size
    ) {
      return tile;
    }
  }
  return null;
}

/** Pure playground state; the DOM board in main.ts renders from it. */
export class PlaygroundModel {
  readonly tiles: Tile[];
  pointer: { x: number; y: number } | null = null;
  progress = 0;
  hits = 0;
  misses = 0;

  constructor(
    readonly frameW: number,
    readonly frameH: number,
    tileSize: number = TILE_SIZE,
  ) {
    this.tiles = layoutTiles(frameW, frameH, tileSize);
  }

  pointerMoved(event: PointerMovedEvent, progress: number): void {
    this.pointer = { x: event.x, y: event.y };
    this.progress = progress;
  }

  /** Returns the tile hit, bumping its counter, or null for a miss. */
  click(event: ClickEvent): Tile | null {
    const tile = tileAt(this.tiles, event.x, event.y);
    if (tile) {
      tile.hits += 1;
      this.hits += 1;
    } else {
      this.misses += 1;
    }
    return tile;
  }

  handLost(_event: HandLostEvent): void {
    this.pointer = null;
    this.progress = 0;
  }
}
