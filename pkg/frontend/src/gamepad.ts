/**
 * Input sources. The browser gives float axes in [-1, 1]; the server owns
 * all calibration and deadzone math, so the client's only job is an exact,
 * monotone prescale onto the integer range its descriptor declares.
 */

import type { DeviceDescriptor } from "./protocol.js";

/** Map a float in [-1, 1] onto an integer axis range, center-preserving. */
export function prescale(value: number, lo: number, hi: number): number {
  const center = Math.floor((lo + hi) / 2);
  const v = Math.max(-1, Math.min(1, value));
  const span = v >= 0 ? hi - center : center - lo;
  const raw = center + Math.round(v * span);
  return Math.max(lo, Math.min(hi, raw));
}

/** Lateral/forward floats in [-1, 1]; null when the source is absent. */
export interface AxisSource {
  read(): [number, number] | null;
}

/**
 * Stamps outgoing samples with nondecreasing timestamps and prescales them
 * onto the descriptor's raw ranges, lateral axis first then forward —
 * matching the axis roles the descriptor declares.
 */
export class InputStreamer {
  private lastT = 0;

  constructor(private descriptor: DeviceDescriptor,
              private now: () => number) {}

  sample(lateral: number, forward: number): { t: number; axes: number[] } {
    const t = Math.max(this.lastT, this.now());
    this.lastT = t;
    const axes = this.descriptor.axis_ranges.map(([lo, hi], i) => {
      const role = this.descriptor.axis_roles[i];
      const v = role === "lateral" ? lateral : role === "forward" ? forward : 0;
      return prescale(v, lo, hi);
    });
    return { t, axes };
  }
}

/** Arrow keys (or on-screen buttons) as a stick: each axis in {-1, 0, 1}. */
export class KeyFallback implements AxisSource {
  private down = new Set<string>();

  press(key: string): void {
    this.down.add(key);
  }

  release(key: string): void {
    this.down.delete(key);
  }

  read(): [number, number] {
    const x = (this.down.has("ArrowRight") ? 1 : 0)
            - (this.down.has("ArrowLeft") ? 1 : 0);
    const y = (this.down.has("ArrowUp") ? 1 : 0)
            - (this.down.has("ArrowDown") ? 1 : 0);
    return [x, y];
  }
}

/**
 * First connected browser gamepad. Stick up is -1 in the Gamepad API but
 * +1 means forward on the wire, hence the sign flip.
 */
export class BrowserGamepad implements AxisSource {
  read(): [number, number] | null {
    if (typeof navigator === "undefined" || !navigator.getGamepads) return null;
    for (const pad of navigator.getGamepads()) {
      if (pad && pad.connected && pad.axes.length >= 2) {
        return [pad.axes[0], -pad.axes[1]];
      }
    }
    return null;
  }
}
