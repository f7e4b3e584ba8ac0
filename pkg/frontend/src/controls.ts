/**
 * Virtual RC control surface state.
 *
 * The throttle is a detented slider carrying exactly the seven named
 * positions of the fuzz space (never a free analog value), so everything a
 * human can do here stays inside the declared space while still allowing
 * wrong-detent mistakes. The kill button is guarded: press and hold for at
 * least 600 ms, then release to fire; an early release cancels.
 */

import { ControlDocument, THROTTLE_DETENTS } from "./messages.js";

export const KILL_HOLD_MS = 600;

export type ThrottleDetent = (typeof THROTTLE_DETENTS)[number];

export class ControlSurface {
  modeSelection: string | null = null;
  throttleDetent: ThrottleDetent = "Neutral";
  stick: [number, number] = [0, 0];
  private killPressedAt: number | null = null;

  selectMode(mode: string): ControlDocument {
    this.modeSelection = mode;
    return { kind: "SET_MODE", mode };
  }

  moveThrottle(detent: ThrottleDetent): ControlDocument {
    if (!THROTTLE_DETENTS.includes(detent)) {
      throw new Error(`not a throttle detent: ${detent}`);
    }
    this.throttleDetent = detent;
    return { kind: "SET_THROTTLE", throttle_position: detent };
  }

  deflectStick(pitch: number, roll: number): ControlDocument {
    this.stick = [pitch, roll];
    return { kind: "SET_STICK", stick: [pitch, roll] };
  }

  killPress(nowMs: number): void {
    this.killPressedAt = nowMs;
  }

  /** Returns the kill control when the hold was long enough, else null. */
  killRelease(nowMs: number): ControlDocument | null {
    const pressedAt = this.killPressedAt;
    this.killPressedAt = null;
    if (pressedAt === null || nowMs - pressedAt < KILL_HOLD_MS) {
      return null;
    }
    return { kind: "KILL_MOTORS" };
  }

  get killArmed(): boolean {
    return this.killPressedAt !== null;
  }
}
