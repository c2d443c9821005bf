/**
 * Control panel: one validated control message per user change, ack shown
 * inline, and the panel converging to the service's acked state.
 */

import type {
  Ack,
  ControlMessage,
  Method,
  Mode,
  StateSnapshot,
} from "./types.js";
import { METHODS, MODES } from "./types.js";

/** Values the panel edits, as found in a state snapshot. */
export interface ControlValues {
  method: Method;
  thresh: number;
  mode: Mode;
  dwellFrames: number;
  dwellRadius: number;
}

export function controlValues(state: StateSnapshot): ControlValues {
  return {
    method: state.config.segmentation.method,
    thresh: state.config.segmentation.static_t,
    mode: state.config.gesture.mode,
    dwellFrames: state.config.gesture.dwell_frames,
    dwellRadius: state.config.gesture.radius,
  };
}

/** The manual threshold only drives static segmentation; other methods ignore it. */
export function sliderEnabled(method: Method): boolean {
  return method === "static";
}

/** Panel value after an ack: keep what was sent if accepted, else revert. */
export function valueAfterAck<T>(sent: T, ack: Ack, snapshotValue: T): T {
  return ack.ok ? sent : snapshotValue;
}

export type ControlField = keyof ControlValues;

export function controlMessageFor(
  field: ControlField,
  value: number | string,
): ControlMessage {
  switch (field) {
    case "method":
      return { set_method: { method: value as Method } };
    case "thresh":
      return { set_param: { name: "thresh", value: Number(value) } };
    case "mode":
      return { set_mode: { mode: value as Mode } };
    case "dwellFrames":
      return { set_param: { name: "dwell_frames", value: Number(value) } };
    case "dwellRadius":
      return { set_param: { name: "dwell_radius", value: Number(value) } };
  }
}

export const CALIBRATION_FRAMES = 30;

type Sender = (message: ControlMessage) => Promise<Ack>;
type StateFetcher = () => Promise<StateSnapshot>;

/** DOM panel over the pure helpers above. */
export class ControlPanel {
  readonly root: HTMLElement;
  private readonly methodSelect: HTMLSelectElement;
  private readonly threshSlider: HTMLInputElement;
  private readonly threshReadout: HTMLSpanElement;
  private readonly modeSelect: HTMLSelectElement;
  private readonly dwellFramesInput: HTMLInputElement;
  private readonly dwellRadiusInput: HTMLInputElement;
  private readonly ackLine: HTMLElement;
  private known: ControlValues | null = null;

  constructor(
    private readonly send: Sender,
    private readonly fetchState: StateFetcher,
  ) {
    this.root = document.createElement("div");
    this.root.className = "controls";

    this.methodSelect = this.addSelect("Method", METHODS, (v) =>
      this.changed("method", v),
    );
    const threshRow = this.addRow("Threshold");
    this.threshSlider = document.createElement("input");
    this.threshSlider.type = "range";
    this.threshSlider.min = "0";
    this.threshSlider.max = "255";
    this.threshSlider.step = "1";
    this.threshSlider.title = "manual threshold; active with the static method";
    this.threshReadout = document.createElement("span");
    this.threshReadout.className = "readout";
    this.threshSlider.addEventListener("input", () => {
      this.threshReadout.textContent = this.threshSlider.value;
    });
    this.threshSlider.addEventListener("change", () =>
      this.changed("thresh", this.threshSlider.value),
    );
    threshRow.append(this.threshSlider, this.threshReadout);

    this.modeSelect = this.addSelect("Mode", MODES, (v) =>
      this.changed("mode", v),
    );
    this.dwellFramesInput = this.addNumber("Dwell frames", 1, 1, (v) =>
      this.changed("dwellFrames", v),
    );
    this.dwellRadiusInput = this.addNumber("Dwell radius", 1, 0.5, (v) =>
      this.changed("dwellRadius", v),
    );

    const buttons = document.createElement("div");
    buttons.className = "row buttons";
    buttons.append(
      this.addButton("Calibrate", () =>
        this.sendShown({ start_calibration: { n_frames: CALIBRATION_FRAMES } }),
      ),
      this.addButton("Capture background", () =>
        this.sendShown({ set_background: {} }),
      ),
    );
    this.root.append(buttons);

    this.ackLine = document.createElement("div");
    this.ackLine.className = "ack";
    this.root.append(this.ackLine);
  }

  /** Repopulate every control from service truth. */
  refresh(state: StateSnapshot): void {
    this.known = controlValues(state);
    this.render(this.known);
  }

  private render(values: ControlValues): void {
    this.methodSelect.value = values.method;
    this.threshSlider.value = String(values.thresh);
    this.threshReadout.textContent = String(values.thresh);
    this.threshSlider.disabled = !sliderEnabled(values.method);
    this.modeSelect.value = values.mode;
    this.dwellFramesInput.value = String(values.dwellFrames);
    this.dwellRadiusInput.value = String(values.dwellRadius);
  }

  private async changed(field: ControlField, raw: string): Promise<void> {
    const ack = await this.sendShown(controlMessageFor(field, raw));
    if (!ack.ok && this.known) {
      this.render(this.known);
      return;
    }
    try {
      this.refresh(await this.fetchState());
    } catch {
      // keep current values; the next snapshot will converge the panel
    }
  }

  private async sendShown(message: ControlMessage): Promise<Ack> {
    const ack = await this.send(message);
    this.ackLine.textContent = ack.ok ? "ok" : `rejected: ${ack.error ?? "?"}`;
    this.ackLine.className = ack.ok ? "ack ok" : "ack error";
    return ack;
  }

  private addRow(label: string): HTMLElement {
    const row = document.createElement("label");
    row.className = "row";
    const caption = document.createElement("span");
    caption.className = "caption";
    caption.textContent = label;
    row.append(caption);
    this.root.append(row);
    return row;
  }

  private addSelect(
    label: string,
    options: readonly string[],
    onChange: (value: string) => void,
  ): HTMLSelectElement {
    const select = document.createElement("select");
    for (const option of options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      select.append(el);
    }
    select.addEventListener("change", () => onChange(select.value));
    this.addRow(label).append(select);
    return select;
  }

  private addNumber(
    label: string,
    min: number,
    step: number,
    onChange: (value: string) => void,
  ): HTMLInputElement {
    const input = document.createElement("input");
    input.type = "number";
    input.min = String(min);
    input.step = String(step);
    input.addEventListener("change", () => onChange(input.value));
    this.addRow(label).append(input);
    return input;
  }

  private addButton(label: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = label;
    button.addEventListener("click", onClick);
    return button;
  }
}
