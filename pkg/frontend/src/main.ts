/** Page bootstrap: stream view, playground board, controls, event log. */

import { LiveConnection, postControl } from "./connection.js";
import { ControlPanel } from "./controls.js";
import { PlaygroundModel } from "./playground.js";
import { UiState } from "./state.js";
import type { StateSnapshot } from "./types.js";

const FALLBACK_WIDTH = 640;
const FALLBACK_HEIGHT = 480;
const LOG_RENDER_LIMIT = 100;
const RING_RADIUS = 18;

function mustFind(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing #${id}`);
  }
  return el;
}

/** Renders a PlaygroundModel into a fixed-aspect board element. */
class Board {
  private readonly tiles: HTMLElement[] = [];
  private readonly crosshair: HTMLElement;
  private readonly ring: SVGCircleElement;
  private readonly circumference = 2 * Math.PI * RING_RADIUS;

  constructor(
    private readonly root: HTMLElement,
    private model: PlaygroundModel,
  ) {
    this.crosshair = document.createElement("div");
    this.crosshair.className = "crosshair hidden";
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 44 44");
    svg.classList.add("ring");
    this.ring = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    this.ring.setAttribute("cx", "22");
    this.ring.setAttribute("cy", "22");
    this.ring.setAttribute("r", String(RING_RADIUS));
    this.ring.style.strokeDasharray = String(this.circumference);
    svg.append(this.ring);
    this.crosshair.append(svg);
    this.rebuild(model);
  }

  rebuild(model: PlaygroundModel): void {
    this.model = model;
    this.root.replaceChildren();
    this.root.style.aspectRatio = `${model.frameW} / ${model.frameH}`;
    this.tiles.length = 0;
    for (const tile of model.tiles) {
      const el = document.createElement("div");
      el.className = "tile";
      el.style.left = this.pctX(tile.x);
      el.style.top = this.pctY(tile.y);
      el.style.width = this.pctX(tile.size);
      el.style.height = this.pctY(tile.size);
      el.textContent = "0";
      this.root.append(el);
      this.tiles.push(el);
    }
    this.root.append(this.crosshair);
  }

  render(): void {
    this.model.tiles.forEach((tile, i) => {
      const el = this.tiles[i];
      if (el.textContent !== String(tile.hits)) {
        el.textContent = String(tile.hits);
        el.classList.add("hit");
        setTimeout(() => el.classList.remove("hit"), 250);
      }
    });
    if (this.model.pointer) {
      this.crosshair.classList.remove("hidden");
      this.crosshair.style.left = this.pctX(this.model.pointer.x);
      this.crosshair.style.top = this.pctY(this.model.pointer.y);
      const gone = (1 - this.model.progress) * this.circumference;
      this.ring.style.strokeDashoffset = String(gone);
    } else {
      this.crosshair.classList.add("hidden");
    }
  }

  private pctX(v: number): string {
    return `${(v / this.model.frameW) * 100}%`;
  }

  private pctY(v: number): string {
    return `${(v / this.model.frameH) * 100}%`;
  }
}

function describeEvent(line: string): HTMLElement {
  const el = document.createElement("li");
  el.textContent = line;
  return el;
}

function bootstrap(): void {
  const base = location.origin;
  const state = new UiState();
  let model = new PlaygroundModel(FALLBACK_WIDTH, FALLBACK_HEIGHT);

  const stream = mustFind("stream") as HTMLImageElement;
  const statusDot = mustFind("status");
  const statusText = mustFind("status-text");
  const logList = mustFind("event-log");
  const tally = mustFind("tally");
  const board = new Board(mustFind("board"), model);
  let logStale = true;

  const fetchState = async (): Promise<StateSnapshot> => {
    const resp = await fetch(`${base}/state`);
    if (!resp.ok) {
      throw new Error(`state fetch failed: ${resp.status}`);
    }
    return (await resp.json()) as StateSnapshot;
  };

  const panel = new ControlPanel((msg) => postControl(base, msg), fetchState);
  mustFind("controls-slot").append(panel.root);

  const connection = new LiveConnection(base, {
    onStatus(status) {
      state.status = status;
    },
    onSnapshot(snapshot) {
      state.applySnapshot(snapshot);
      panel.refresh(snapshot);
    },
    onEvent(event) {
      state.applyEvent(event);
      logStale = true;
      switch (event.type) {
        case "pointer_moved":
          model.pointerMoved(event, state.dwellProgress);
          break;
        case "click":
          state.recordClickResult(model.click(event) !== null);
          break;
        case "hand_lost":
          model.handLost(event);
          break;
        case "finger_count":
        case "orientation":
          break;
      }
    },
  });

  stream.src = `${base}/stream.mjpg`;

  const render = (): void => {
    // Adopt the stream's real dimensions once the first frame arrives.
    if (
      stream.naturalWidth > 0 &&
      (stream.naturalWidth !== model.frameW || stream.naturalHeight !== model.frameH)
    ) {
      model = new PlaygroundModel(stream.naturalWidth, stream.naturalHeight);
      board.rebuild(model);
    }
    statusDot.dataset.status = state.status;
    const calibrating = state.snapshot?.calibrating ? ", calibrating" : "";
    statusText.textContent = state.status + calibrating;
    tally.textContent = `hits ${state.hits} / misses ${state.misses}`;
    board.render();
    if (logStale) {
      logStale = false;
      logList.replaceChildren(
        ...state.log
          .latest(LOG_RENDER_LIMIT)
          .map((ev) => describeEvent(JSON.stringify(ev))),
      );
    }
    requestAnimationFrame(render);
  };

  connection.start();
  requestAnimationFrame(render);
}

document.addEventListener("DOMContentLoaded", bootstrap);
