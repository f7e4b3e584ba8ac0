import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  ProtocolError,
  decodeMessage,
  encodeMessage,
  validateControl,
} from "../src/messages.js";

const GOLDEN = new URL("../../tests/fixtures/golden_transcript.jsonl", import.meta.url);

describe("message codec", () => {
  it("round-trips every kind", () => {
    const samples = [
      { dir: "to_console", kind: "Precheck", seq: 0, t: 0, payload: { test_id: "t1" } },
      { dir: "to_console", kind: "Plan", seq: 1, t: 9.9, payload: { role: "RPIC", hit_id: "1" } },
      { dir: "to_console", kind: "Telemetry", seq: 2, t: 10, payload: { z: 12.5 } },
      { dir: "from_console", kind: "RoleAck", seq: 0, t: 0, payload: { role: "RPIC" } },
      {
        dir: "from_console",
        kind: "Control",
        seq: 1,
        t: 0,
        payload: { role: "RPIC", control: { kind: "SET_MODE", mode: "STABILIZED" } },
      },
    ] as const;
    for (const sample of samples) {
      const message = { ...sample, payload: { ...sample.payload } };
      expect(decodeMessage(encodeMessage(message))).toEqual(message);
    }
  });

  it("rejects kinds on the wrong direction", () => {
    const line = JSON.stringify({
      dir: "from_console",
      kind: "Telemetry",
      seq: 0,
      t: 0,
      payload: {},
    });
    expect(() => decodeMessage(line)).toThrow(ProtocolError);
  });

  it("rejects malformed sequence numbers and payloads", () => {
    expect(() =>
      decodeMessage(JSON.stringify({ dir: "to_console", kind: "Plan", seq: -1, t: 0, payload: {} })),
    ).toThrow(ProtocolError);
    expect(() =>
      decodeMessage(JSON.stringify({ dir: "to_console", kind: "Plan", seq: 0, t: 0, payload: 7 })),
    ).toThrow(ProtocolError);
    expect(() => decodeMessage("{ not json")).toThrow(ProtocolError);
  });

  it("validates control documents", () => {
    expect(validateControl({ kind: "SET_MODE", mode: "AUTO.RTL" }).mode).toBe("AUTO.RTL");
    expect(validateControl({ kind: "SET_THROTTLE", throttle_position: "MaxHIGH" })).toBeTruthy();
    expect(validateControl({ kind: "KILL_MOTORS" })).toBeTruthy();
    expect(() => validateControl({ kind: "SET_THROTTLE", throttle_position: "half" })).toThrow();
    expect(() => validateControl({ kind: "EJECT" })).toThrow();
    expect(() => validateControl({ kind: "SET_MODE" })).toThrow();
  });
});

describe("golden transcript contract", () => {
  const lines = readFileSync(GOLDEN, "utf-8").split("\n").filter((l) => l.trim());

  it("every recorded line decodes", () => {
    for (const line of lines) {
      decodeMessage(line);
    }
    expect(lines.length).toBeGreaterThan(100);
  });

  it("every Control in the transcript carries a valid manual input", () => {
    const controls = lines
      .map((line) => decodeMessage(line))
      .filter((message) => message.kind === "Control");
    expect(controls.length).toBeGreaterThan(0);
    for (const message of controls) {
      validateControl((message.payload as Record<string, unknown>)["control"]);
    }
  });
});
