/**
 * Wire protocol: newline-delimited JSON session messages.
 *
 * One message per line:
 *   {"dir": "...", "kind": "...", "seq": 0, "t": 0.0, "payload": {...}}
 *
 * `dir` is "to_console" (server -> operator) or "from_console"; each
 * direction has its own allowed kinds and an independent sequence counter
 * that strictly increases from 0. The console never invents state: every
 * phase change follows a decoded server message.
 */

export type Direction = "to_console" | "from_console";

export const KINDS_TO_CONSOLE = [
  "Precheck",
  "Plan",
  "Go",
  "NoMoreTasks",
  "AwarenessQuestion",
  "Telemetry",
  "TestResult",
  "Heartbeat",
] as const;

export const KINDS_FROM_CONSOLE = [
  "RoleAck",
  "AwarenessAnswer",
  "Control",
  "Heartbeat",
] as const;

export type ToConsoleKind = (typeof KINDS_TO_CONSOLE)[number];
export type FromConsoleKind = (typeof KINDS_FROM_CONSOLE)[number];

export interface SessionMessage {
  dir: Direction;
  kind: string;
  seq: number;
  t: number;
  payload: Record<string, unknown>;
}

export interface TaskItem {
  hit_id: string;
  task: string;
  mode: string;
  state: string;
}

export interface PrecheckRole {
  role: string;
  interaction_device: string;
  tasks: TaskItem[];
}

export interface PrecheckPayload {
  test_id: string;
  mission: string;
  wind: string;
  drone: string;
  geofence: { status: string; prediction: string; action: string };
  safety_notes: string;
  roles: PrecheckRole[];
  expected_acks: string[];
}

export interface PlanPayload {
  role: string;
  hit_id: string;
  task: string;
  mode: string;
  state: string;
}

export interface GoPayload {
  role: string;
  hit_id: string;
  task: string;
  expected_control: ControlDocument;
}

export interface TelemetryPayload {
  t: number;
  x: number;
  y: number;
  z: number;
  vx: number;
  vy: number;
  vz: number;
  mode: string;
  lifecycle: string;
  armed: boolean;
  motors_on: boolean;
  distance_home: number;
  fence_breached: boolean;
}

export interface AwarenessQuestionPayload {
  question_id: string;
  text: string;
}

export interface TestResultPayload {
  test_id: string;
  outcome: string;
  aborted: boolean;
  features: Record<string, unknown>;
}

export type ControlKind = "SET_MODE" | "SET_THROTTLE" | "SET_STICK" | "KILL_MOTORS";

export interface ControlDocument {
  kind: ControlKind;
  mode?: string;
  throttle_position?: string;
  stick?: [number, number];
}

export const THROTTLE_DETENTS = [
  "MaxLOW",
  "MedLOW",
  "JustBelow",
  "Neutral",
  "JustAbove",
  "MedHIGH",
  "MaxHIGH",
] as const;

export const FLIGHT_MODES = [
  "STABILIZED",
  "ALTCTL",
  "POSCTL",
  "OFFBOARD",
  "AUTO.LOITER",
  "AUTO.RTL",
  "AUTO.LAND",
] as const;

export class ProtocolError extends Error {}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/** Validate a control document; throws ProtocolError when it would not be
 * accepted as a manual input on the service side. */
export function validateControl(doc: unknown): ControlDocument {
  if (!isRecord(doc)) throw new ProtocolError("control must be an object");
  const kind = doc["kind"];
  if (kind === "SET_MODE") {
    if (typeof doc["mode"] !== "string" || !doc["mode"]) {
      throw new ProtocolError("SET_MODE requires a mode");
    }
    return { kind, mode: doc["mode"] };
  }
  if (kind === "SET_THROTTLE") {
    const pos = doc["throttle_position"];
    if (typeof pos !== "string" || !(THROTTLE_DETENTS as readonly string[]).includes(pos)) {
      throw new ProtocolError(`unknown throttle position ${String(pos)}`);
    }
    return { kind, throttle_position: pos };
  }
  if (kind === "SET_STICK") {
    const stick = doc["stick"];
    if (!Array.isArray(stick) || stick.length !== 2 || stick.some((v) => typeof v !== "number")) {
      throw new ProtocolError("SET_STICK requires a [pitch, roll] pair");
    }
    return { kind, stick: [stick[0], stick[1]] };
  }
  if (kind === "KILL_MOTORS") {
    return { kind };
  }
  throw new ProtocolError(`unknown control kind ${String(kind)}`);
}

export function decodeMessage(line: string): SessionMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(line);
  } catch (err) {
    throw new ProtocolError(`bad session message: ${String(err)}`);
  }
  if (!isRecord(doc)) throw new ProtocolError("session message must be an object");
  const dir = doc["dir"];
  const kind = doc["kind"];
  const seq = doc["seq"];
  if (dir !== "to_console" && dir !== "from_console") {
    throw new ProtocolError(`bad message direction ${String(dir)}`);
  }
  const allowed: readonly string[] = dir === "to_console" ? KINDS_TO_CONSOLE : KINDS_FROM_CONSOLE;
  if (typeof kind !== "string" || !allowed.includes(kind)) {
    throw new ProtocolError(`kind ${String(kind)} not allowed for direction ${dir}`);
  }
  if (typeof seq !== "number" || !Number.isInteger(seq) || seq < 0) {
    throw new ProtocolError("message seq must be a non-negative integer");
  }
  const payload = doc["payload"] ?? {};
  if (!isRecord(payload)) throw new ProtocolError("message payload must be an object");
  if (kind === "Control") {
    validateControl(payload["control"]);
  }
  const t = typeof doc["t"] === "number" ? doc["t"] : 0;
  return { dir, kind, seq, t, payload };
}

export function encodeMessage(message: SessionMessage): string {
  return JSON.stringify({
    dir: message.dir,
    kind: message.kind,
    seq: message.seq,
    t: message.t,
    payload: message.payload,
  });
}
