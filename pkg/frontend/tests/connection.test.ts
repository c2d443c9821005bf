import { describe, expect, it } from "vitest";

import { wsUrl } from "../src/connection.js";

describe("wsUrl", () => {
  it("maps http to ws and appends the events path", () => {
    expect(wsUrl("http://127.0.0.1:8765")).toBe("ws://127.0.0.1:8765/ws/events");
  });

  it("maps https to wss", () => {
    expect(wsUrl("https://example.test")).toBe("wss://example.test/ws/events");
  });

  it("tolerates a trailing slash", () => {
    expect(wsUrl("http://localhost:8765/")).toBe("ws://localhost:8765/ws/events");
  });

  it("drops query and hash", () => {
    expect(wsUrl("http://localhost:8765/?x=1#top")).toBe(
      "ws://localhost:8765/ws/events",
    );
  });
});
