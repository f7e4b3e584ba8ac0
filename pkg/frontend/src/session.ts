/**
 * Console session state machine.
 *
 * The console is strictly server-driven: phases change only in response to
 * decoded messages, never optimistically. Controls can be emitted only in
 * the Idle, Acting, or Done phases; Precheck, AwaitingRole, Planning, and
 * Awareness gate them off. A Go whose HIT was never planned is surfaced as
 * a protocol error and does not enter Acting.
 */

import { ControlSurface, ThrottleDetent } from "./controls.js";
import {
  AwarenessQuestionPayload,
  ControlDocument,
  GoPayload,
  PlanPayload,
  PrecheckPayload,
  ProtocolError,
  SessionMessage,
  TelemetryPayload,
  TestResultPayload,
  decodeMessage,
  encodeMessage,
  validateControl,
} from "./messages.js";
import { Transport } from "./transport.js";

export type Phase =
  | "connecting"
  | "precheck"
  | "awaiting-role"
  | "idle"
  | "planning"
  | "acting"
  | "done"
  | "awareness"
  | "disconnected";

export interface Alert {
  kind: "mode-change" | "breach" | "altitude" | "stale" | "protocol-error";
  text: string;
  at: number;
}

export type PromptEvent =
  | { type: "precheck"; testId: string; taskCounts: Record<string, number> }
  | { type: "plan"; role: string; hitId: string; task: string }
  | { type: "go"; role: string; hitId: string; task: string }
  | { type: "no-more-tasks" }
  | { type: "awareness"; questionId: string }
  | { type: "result"; testId: string; outcome: string };

export interface SentControl {
  control: ControlDocument;
  phase: Phase;
  deviation: boolean;
  hitId: string | null;
}

export const STALE_AFTER_MS = 2000;
export const DEFAULT_ALTITUDE_CEILING_M = 50;

const CONTROL_PHASES: Phase[] = ["idle", "acting", "done"];

export interface SessionOptions {
  altitudeCeilingM?: number;
  now?: () => number;
}

export class ConsoleSession {
  phase: Phase = "connecting";
  precheck: PrecheckPayload | null = null;
  ackedRoles = new Set<string>();
  activePlan: PlanPayload | null = null;
  activeGo: GoPayload | null = null;
  telemetry: TelemetryPayload | null = null;
  pendingQuestion: AwarenessQuestionPayload | null = null;
  results: TestResultPayload[] = [];
  alerts: Alert[] = [];
  promptLog: PromptEvent[] = [];
  sentControls: SentControl[] = [];
  transcript: string[] = [];
  deviationCount = 0;
  altitudeWarning = false;
  surface = new ControlSurface();

  private readonly transport: Transport;
  private readonly now: () => number;
  private readonly altitudeCeiling: number;
  private sendSeq = 0;
  private lastRecvSeq = -1;
  private lastTelemetryAt: number | null = null;
  private changeHandlers: (() => void)[] = [];

  constructor(transport: Transport, options: SessionOptions = {}) {
    this.transport = transport;
    this.now = options.now ?? (() => Date.now());
    this.altitudeCeiling = options.altitudeCeilingM ?? DEFAULT_ALTITUDE_CEILING_M;
    transport.onLine((line) => this.handleLine(line));
    transport.onClose(() => {
      this.phase = "disconnected";
      this.emitChange();
    });
  }

  onChange(handler: () => void): void {
    this.changeHandlers.push(handler);
  }

  private emitChange(): void {
    for (const handler of this.changeHandlers) handler();
  }

  // -- inbound ---------------------------------------------------------------

  handleLine(line: string): void {
    let message: SessionMessage;
    try {
      message = decodeMessage(line);
    } catch (err) {
      this.pushAlert("protocol-error", `undecodable message: ${String(err)}`);
      this.emitChange();
      return;
    }
    if (message.dir !== "to_console" || message.seq <= this.lastRecvSeq) {
      this.pushAlert("protocol-error", `out-of-order or misdirected message seq ${message.seq}`);
      this.emitChange();
      return;
    }
    this.lastRecvSeq = message.seq;
    this.transcript.push(line);
    this.dispatch(message);
    this.emitChange();
  }

  private dispatch(message: SessionMessage): void {
    switch (message.kind) {
      case "Precheck":
        this.onPrecheck(message.payload as unknown as PrecheckPayload);
        break;
      case "Plan":
        this.onPlan(message.payload as unknown as PlanPayload);
        break;
      case "Go":
        this.onGo(message.payload as unknown as GoPayload);
        break;
      case "NoMoreTasks":
        this.promptLog.push({ type: "no-more-tasks" });
        this.phase = "done";
        this.activePlan = null;
        this.activeGo = null;
        break;
      case "AwarenessQuestion":
        this.pendingQuestion = message.payload as unknown as AwarenessQuestionPayload;
        this.promptLog.push({ type: "awareness", questionId: this.pendingQuestion.question_id });
        this.phase = "awareness";
        break;
      case "Telemetry":
        this.onTelemetry(message.payload as unknown as TelemetryPayload);
        break;
      case "TestResult": {
        const result = message.payload as unknown as TestResultPayload;
        this.results.push(result);
        this.promptLog.push({ type: "result", testId: result.test_id, outcome: result.outcome });
        this.phase = "done";
        break;
      }
      case "Heartbeat":
        break;
    }
  }

  private onPrecheck(payload: PrecheckPayload): void {
    this.precheck = payload;
    this.ackedRoles.clear();
    this.activePlan = null;
    this.activeGo = null;
    this.pendingQuestion = null;
    this.telemetry = null;
    this.altitudeWarning = false;
    this.phase = "precheck";
    const taskCounts: Record<string, number> = {};
    for (const role of payload.roles) taskCounts[role.role] = role.tasks.length;
    this.promptLog.push({ type: "precheck", testId: payload.test_id, taskCounts });
  }

  private onPlan(payload: PlanPayload): void {
    this.activePlan = payload;
    this.activeGo = null;
    this.phase = "planning";
    this.promptLog.push({ type: "plan", role: payload.role, hitId: payload.hit_id, task: payload.task });
  }

  private onGo(payload: GoPayload): void {
    this.promptLog.push({ type: "go", role: payload.role, hitId: payload.hit_id, task: payload.task });
    const planned =
      this.activePlan !== null &&
      this.activePlan.role === payload.role &&
      this.activePlan.hit_id === payload.hit_id;
    if (!planned) {
      // Acting is only reachable from Planning for the same task.
      this.pushAlert(
        "protocol-error",
        `Go for ${payload.role}/${payload.hit_id} without a matching Plan`,
      );
      return;
    }
    this.activeGo = payload;
    this.phase = "acting";
  }

  private onTelemetry(payload: TelemetryPayload): void {
    const previous = this.telemetry;
    this.telemetry = payload;
    this.lastTelemetryAt = this.now();
    if (previous && previous.mode !== payload.mode) {
      this.pushAlert("mode-change", `mode changed ${previous.mode} -> ${payload.mode}`);
    }
    if (payload.fence_breached && !(previous && previous.fence_breached)) {
      this.pushAlert("breach", "geofence breached");
    }
    if (payload.z > this.altitudeCeiling) {
      // Persistent: latched for the rest of the test once exceeded.
      if (!this.altitudeWarning) {
        this.pushAlert("altitude", `altitude ${payload.z.toFixed(1)}m above ceiling`);
      }
      this.altitudeWarning = true;
    }
  }

  private pushAlert(kind: Alert["kind"], text: string): void {
    this.alerts.push({ kind, text, at: this.now() });
  }

  /** True when no telemetry arrived for more than the staleness window. */
  get telemetryStale(): boolean {
    if (this.lastTelemetryAt === null) return false;
    return this.now() - this.lastTelemetryAt > STALE_AFTER_MS;
  }

  get fenceBreached(): boolean {
    return this.telemetry?.fence_breached ?? false;
  }

  // -- outbound ---------------------------------------------------------------

  private send(kind: string, payload: Record<string, unknown>): void {
    const message: SessionMessage = {
      dir: "from_console",
      kind,
      seq: this.sendSeq,
      t: this.telemetry?.t ?? 0,
      payload,
    };
    this.sendSeq += 1;
    const line = encodeMessage(message);
    this.transcript.push(line);
    this.transport.sendLine(line);
  }

  /** Explicit proceed tap for one role; acking twice is a no-op. */
  proceed(role: string): void {
    if (this.phase !== "precheck" && this.phase !== "awaiting-role") return;
    if (!this.precheck || !this.precheck.expected_acks.includes(role)) return;
    if (this.ackedRoles.has(role)) return;
    this.ackedRoles.add(role);
    this.send("RoleAck", { role });
    const allAcked = this.precheck.expected_acks.every((r) => this.ackedRoles.has(r));
    this.phase = allAcked ? "idle" : "awaiting-role";
    this.emitChange();
  }

  answer(questionId: string, text: string): void {
    if (this.phase !== "awareness" || !this.pendingQuestion) return;
    if (this.pendingQuestion.question_id !== questionId) return;
    this.send("AwarenessAnswer", { question_id: questionId, answer: text });
    this.pendingQuestion = null;
    this.emitChange();
  }

  /** Emit one manual control, subject to phase gating. Returns whether the
   * control went out. A control differing from the instructed one is sent
   * verbatim and flagged as a deviation, never blocked. */
  emitControl(control: ControlDocument): boolean {
    if (!CONTROL_PHASES.includes(this.phase)) {
      return false;
    }
    validateControl(control);
    const actingOn = this.phase === "acting" ? this.activeGo : null;
    const role = actingOn?.role ?? this.precheck?.expected_acks[0] ?? "RPIC";
    let deviation = false;
    if (actingOn) {
      deviation = JSON.stringify(control) !== JSON.stringify(actingOn.expected_control);
      if (deviation) this.deviationCount += 1;
    }
    this.send("Control", { role, control: control as unknown as Record<string, unknown> });
    this.sentControls.push({
      control,
      phase: this.phase,
      deviation,
      hitId: actingOn?.hit_id ?? null,
    });
    if (actingOn) {
      this.activeGo = null;
      this.activePlan = null;
      this.phase = "idle";
    }
    this.emitChange();
    return true;
  }

  // Control-surface conveniences: the widgets call these.

  tapMode(mode: string): boolean {
    return this.emitControl(this.surface.selectMode(mode));
  }

  dragThrottle(detent: ThrottleDetent): boolean {
    return this.emitControl(this.surface.moveThrottle(detent));
  }

  moveStick(pitch: number, roll: number): boolean {
    return this.emitControl(this.surface.deflectStick(pitch, roll));
  }

  killPress(): void {
    this.surface.killPress(this.now());
    this.emitChange();
  }

  killRelease(): boolean {
    const control = this.surface.killRelease(this.now());
    if (control === null) {
      this.emitChange();
      return false;
    }
    return this.emitControl(control);
  }

  downloadTranscript(): string {
    return this.transcript.join("\n") + "\n";
  }
}

export { ProtocolError };
