import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { replayPrompts } from "../src/replay.js";

const GOLDEN = new URL("../../tests/fixtures/golden_transcript.jsonl", import.meta.url);

describe("transcript replay", () => {
  it("reconstructs the recorded session's prompt sequence", () => {
    const lines = readFileSync(GOLDEN, "utf-8").split("\n").filter((l) => l.trim());
    const prompts = replayPrompts(lines);
    const shape = prompts.map((p) => (p.type === "plan" || p.type === "go" ? `${p.type}:${p.role}/${p.hitId}` : p.type));
    expect(shape).toEqual([
      "precheck",
      "plan:RPIC/1",
      "go:RPIC/1",
      "plan:RPIC/2",
      "go:RPIC/2",
      "plan:MC/1",
      "go:MC/1",
      "no-more-tasks",
      "awareness",
      "awareness",
      "result",
    ]);
    const precheck = prompts[0];
    if (precheck.type !== "precheck") throw new Error("first prompt must be the precheck");
    expect(precheck.taskCounts).toEqual({ RPIC: 2, MC: 1 });
  });

  it("is deterministic and order-preserving", () => {
    const lines = readFileSync(GOLDEN, "utf-8").split("\n").filter((l) => l.trim());
    expect(replayPrompts(lines)).toEqual(replayPrompts(lines));
    // Telemetry and console-side lines never contribute prompt events.
    const withoutTelemetry = lines.filter((l) => !l.includes('"Telemetry"'));
    expect(replayPrompts(withoutTelemetry)).toEqual(replayPrompts(lines));
  });
});
