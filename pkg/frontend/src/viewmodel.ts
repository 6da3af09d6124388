/**
 * Client session state as a pure reducer over server messages.
 *
 * The UI never simulates: the chair on screen is exactly the last received
 * frame, so server and screen cannot disagree. Reducing a message returns
 * the next view plus the sounds that moment calls for; playing them (and
 * muting) is the audio layer's business, never state here.
 */

import type {
  FrameData,
  LevelDoc,
  ReportData,
  ServerMessage,
} from "./protocol.js";

export type Overlay = "none" | "smiley" | "fireworks";
export type Connection = "connecting" | "live" | "ended" | "error";
export type Sound = "move" | "applause";

export interface ChairShape {
  radius: number;
  trackWidth: number;
}

export interface ViewModel {
  connection: Connection;
  level: LevelDoc | null;
  chair: ChairShape;
  dt: number;
  frame: FrameData | null;
  /** level-completed seen (via frame event or final report) */
  completed: boolean;
  overlay: Overlay;
  visitedWaypoints: number[];
  report: ReportData | null;
  lastError: string | null;
}

export function initialView(): ViewModel {
  return {
    connection: "connecting",
    level: null,
    chair: { radius: 0.45, trackWidth: 0.6 },
    dt: 1 / 60,
    frame: null,
    completed: false,
    overlay: "none",
    visitedWaypoints: [],
    report: null,
    lastError: null,
  };
}

export interface Update {
  view: ViewModel;
  sounds: Sound[];
}

function chairShape(params: Record<string, unknown>): ChairShape {
  const chair = (params.chair ?? {}) as Record<string, unknown>;
  const radius = typeof chair.chair_radius === "number" ? chair.chair_radius : 0.45;
  const trackWidth = typeof chair.track_width === "number" ? chair.track_width : 0.6;
  return { radius, trackWidth };
}

export function applyMessage(view: ViewModel, msg: ServerMessage): Update {
  switch (msg.type) {
    case "welcome":
      return {
        view: {
          ...view,
          connection: "live",
          level: msg.level,
          chair: chairShape(msg.params),
          dt: msg.dt,
        },
        sounds: [],
      };

    case "frame": {
      const sounds: Sound[] = [];
      let completed = view.completed;
      let visited = view.visitedWaypoints;
      let starts = 0;
      for (const e of msg.frame.events) {
        if (e.kind === "move_started") {
          starts += 1;
          sounds.push("move");
        } else if (e.kind === "level_completed" && !completed) {
          completed = true;
          sounds.push("applause");
        } else if (e.kind === "waypoint_reached" && e.index !== undefined) {
          visited = [...visited, e.index];
        }
      }
      if (starts > 1) {
        // the motion hysteresis upstream makes this impossible; fail loudly
        throw new Error("move_started fired twice in one frame");
      }
      const overlay: Overlay =
        completed ? "fireworks" : msg.frame.on_track ? "smiley" : "none";
      return {
        view: { ...view, frame: msg.frame, completed, overlay,
                visitedWaypoints: visited },
        sounds,
      };
    }

    case "ended": {
      const sounds: Sound[] = [];
      let completed = view.completed;
      if (!completed && msg.report.metrics.completed) {
        completed = true;            // belt-and-braces; the frame normally wins
        sounds.push("applause");
      }
      return {
        view: {
          ...view,
          connection: "ended",
          report: msg.report,
          completed,
          overlay: completed ? "fireworks" : "none",
        },
        sounds,
      };
    }

    case "error":
      return {
        view: { ...view, lastError: `${msg.code}: ${msg.message}` },
        sounds: [],
      };
  }
}

/** Short human summary of a finished run, for the end-of-session panel. */
export function summarize(report: ReportData): string {
  const m = report.metrics;
  return (
    `${report.end_reason} after ${m.elapsed.toFixed(1)} s — ` +
    `on route ${m.on_route_time.toFixed(1)} s, ` +
    `off ${m.off_route_time.toFixed(1)} s, ` +
    `${m.waypoints_hit} waypoints, ${m.collision_count} collisions`
  );
}
