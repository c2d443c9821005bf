/** Event socket with automatic retry, plus the control POST helper. */

import type {
  Ack,
  ControlMessage,
  PipelineEvent,
  ServerMessage,
  SnapshotMessage,
} from "./types.js";

export interface ConnectionDelegate {
  onStatus(status: "connecting" | "connected" | "disconnected"): void;
  onSnapshot(snapshot: SnapshotMessage): void;
  onEvent(event: PipelineEvent): void;
}

/** ws(s):// event-socket URL for an http(s):// service base. */
export function wsUrl(baseUrl: string): string {
  const url = new URL(baseUrl);
  url.protocol = url.protocol === "https:" ? "wss:" : "ws:";
  url.pathname = url.pathname.replace(/\/$/, "") + "/ws/events";
  url.search = "";
  url.hash = "";
  return url.toString();
}

export class LiveConnection {
  private socket: WebSocket | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(
    private readonly baseUrl: string,
    private readonly delegate: ConnectionDelegate,
    private readonly retryMs = 1000,
  ) {}

  start(): void {
    this.stopped = false;
    this.open();
  }

  stop(): void {
    this.stopped = true;
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    this.socket?.close();
    this.socket = null;
  }

  private open(): void {
    this.delegate.onStatus("connecting");
    const socket = new WebSocket(wsUrl(this.baseUrl));
    this.socket = socket;
    socket.onopen = () => this.delegate.onStatus("connected");
    socket.onmessage = (msg: MessageEvent<string>) => {
      let parsed: ServerMessage;
      try {
        parsed = JSON.parse(msg.data) as ServerMessage;
      } catch {
        return;
      }
      if (parsed.type === "snapshot") {
        this.delegate.onSnapshot(parsed);
      } else {
        this.delegate.onEvent(parsed);
      }
    };
    socket.onclose = () => this.scheduleRetry();
    socket.onerror = () => socket.close();
  }

  private scheduleRetry(): void {
    this.socket = null;
    if (this.stopped) {
      return;
    }
    this.delegate.onStatus("disconnected");
    if (this.retryTimer === null) {
      this.retryTimer = setTimeout(() => {
        this.retryTimer = null;
        if (!this.stopped) {
          this.open();
        }
      }, this.retryMs);
    }
  }
}

/** POST one control message; any failure becomes an error ack. */
export async function postControl(
  baseUrl: string,
  message: ControlMessage,
): Promise<Ack> {
  try {
    const resp = await fetch(`${baseUrl}/control`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(message),
    });
    return (await resp.json()) as Ack;
  } catch (err) {
    return { ok: false, error: String(err) };
  }
}
