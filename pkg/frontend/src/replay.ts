/**
 * Transcript replay: rebuild the prompt sequence from a recorded session.
 *
 * A transcript is the raw line log of one session, both directions. The
 * prompt sequence a console rendered is a pure function of the server lines,
 * so replaying a transcript must reproduce it exactly; the session test
 * suite holds a live session's prompt log to this function's output.
 */

import { decodeMessage } from "./messages.js";
import type { PromptEvent } from "./session.js";

export function replayPrompts(lines: string[]): PromptEvent[] {
  const prompts: PromptEvent[] = [];
  for (const line of lines) {
    if (!line.trim()) continue;
    let message;
    try {
      message = decodeMessage(line);
    } catch {
      continue; // foreign lines in a transcript are ignored, as live
    }
    if (message.dir !== "to_console") continue;
    const payload = message.payload as Record<string, any>;
    switch (message.kind) {
      case "Precheck": {
        const taskCounts: Record<string, number> = {};
        for (const role of payload["roles"] ?? []) {
          taskCounts[role.role] = (role.tasks ?? []).length;
        }
        prompts.push({ type: "precheck", testId: String(payload["test_id"]), taskCounts });
        break;
      }
      case "Plan":
        prompts.push({
          type: "plan",
          role: String(payload["role"]),
          hitId: String(payload["hit_id"]),
          task: String(payload["task"]),
        });
        break;
      case "Go":
        prompts.push({
          type: "go",
          role: String(payload["role"]),
          hitId: String(payload["hit_id"]),
          task: String(payload["task"]),
        });
        break;
      case "NoMoreTasks":
        prompts.push({ type: "no-more-tasks" });
        break;
      case "AwarenessQuestion":
        prompts.push({ type: "awareness", questionId: String(payload["question_id"]) });
        break;
      case "TestResult":
        prompts.push({
          type: "result",
          testId: String(payload["test_id"]),
          outcome: String(payload["outcome"]),
        });
        break;
      default:
        break;
    }
  }
  return prompts;
}
