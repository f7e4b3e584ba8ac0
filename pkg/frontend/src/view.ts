/**
 * Screen models: what the console shows, as plain data.
 *
 * Rendering is split in two so the interesting logic stays testable without
 * a DOM: these pure functions map session state to a screen model, and the
 * thin DOM layer just prints the model.
 */

import type { ConsoleSession } from "./session.js";

export interface TelemetryPanel {
  altitudeM: number | null;
  distanceHomeM: number | null;
  mode: string;
  lifecycle: string;
  armed: boolean;
  fenceBadge: "ok" | "alert";
  staleBanner: boolean;
  altitudeWarning: boolean;
}

export interface RoleChecklist {
  role: string;
  device: string;
  tasks: string[];
  acked: boolean;
  observeOnly: boolean;
}

export type Screen =
  | { screen: "connecting" }
  | { screen: "disconnected" }
  | {
      screen: "precheck";
      testId: string;
      mission: string;
      wind: string;
      safetyNotes: string;
      roles: RoleChecklist[];
    }
  | { screen: "plan"; role: string; task: string; note: string }
  | { screen: "go"; role: string; task: string }
  | { screen: "observe"; doneWithTasks: boolean }
  | { screen: "awareness"; questionId: string; text: string }
  | { screen: "results"; outcomes: { testId: string; outcome: string }[] };

export function renderScreen(session: ConsoleSession): Screen {
  switch (session.phase) {
    case "connecting":
      return { screen: "connecting" };
    case "disconnected":
      return { screen: "disconnected" };
    case "precheck":
    case "awaiting-role": {
      const precheck = session.precheck!;
      return {
        screen: "precheck",
        testId: precheck.test_id,
        mission: precheck.mission,
        wind: precheck.wind,
        safetyNotes: precheck.safety_notes,
        roles: precheck.roles.map((role) => ({
          role: role.role,
          device: role.interaction_device,
          tasks: role.tasks.map((task) => `${task.task} when ${task.mode}/${task.state}`),
          acked: session.ackedRoles.has(role.role),
          observeOnly: role.tasks.length === 0,
        })),
      };
    }
    case "planning":
      return {
        screen: "plan",
        role: session.activePlan!.role,
        task: session.activePlan!.task,
        note: "upcoming task: get ready, do not act yet",
      };
    case "acting":
      return {
        screen: "go",
        role: session.activeGo!.role,
        task: session.activeGo!.task,
      };
    case "awareness":
      return session.pendingQuestion
        ? {
            screen: "awareness",
            questionId: session.pendingQuestion.question_id,
            text: session.pendingQuestion.text,
          }
        : { screen: "observe", doneWithTasks: true };
    case "done":
      if (session.results.length > 0 && session.pendingQuestion === null) {
        return {
          screen: "results",
          outcomes: session.results.map((r) => ({ testId: r.test_id, outcome: r.outcome })),
        };
      }
      return { screen: "observe", doneWithTasks: true };
    case "idle":
      return { screen: "observe", doneWithTasks: false };
  }
}

export function renderTelemetry(session: ConsoleSession): TelemetryPanel {
  const telemetry = session.telemetry;
  return {
    altitudeM: telemetry ? telemetry.z : null,
    distanceHomeM: telemetry ? telemetry.distance_home : null,
    mode: telemetry?.mode ?? "-",
    lifecycle: telemetry?.lifecycle ?? "-",
    armed: telemetry?.armed ?? false,
    fenceBadge: session.fenceBreached ? "alert" : "ok",
    staleBanner: session.telemetryStale,
    altitudeWarning: session.altitudeWarning,
  };
}
