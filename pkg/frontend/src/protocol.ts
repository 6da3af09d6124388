/**
 * Wire schema for the `/session` websocket and the level documents the
 * HTTP side serves. Mirrors the server's JSON layout; unknown fields are
 * ignored so either side can grow.
 */

export type AxisRole = "lateral" | "forward" | "";

export interface DeviceDescriptor {
  device_id: string;
  axis_ranges: [number, number][];
  axis_roles: AxisRole[];
}

export interface CalibrationData {
  device_id: string;
  center: number[];
  deadzone: number;
  gain: number[];
  invert: boolean[];
}

export interface ChairPose {
  x: number;
  y: number;
  heading: number;
  v_left: number;
  v_right: number;
  wheel_spin?: number[];
}

export interface SimEventData {
  tick: number;
  kind: string;
  index?: number;
  obstacle_id?: string;
}

export interface MetricsData {
  elapsed: number;
  on_route_time: number;
  off_route_time: number;
  collision_count: number;
  waypoints_hit: number;
  completed: boolean;
  completion_time?: number;
}

export interface FrameData {
  tick: number;
  sim_time: number;
  chair: ChairPose;
  on_track: boolean;
  events: SimEventData[];
  metrics: MetricsData;
}

export interface ReportData {
  level_id: string;
  params: Record<string, unknown>;
  metrics: MetricsData;
  events: SimEventData[];
  trace: [number, number][];
  end_reason: string;
  created_at: string;
}

export interface LevelDoc {
  id: string;
  walls: number[][];
  circles: number[][];
  rects: number[][];
  route: number[][];
  corridor_half_width: number;
  start: number[];
  goal: number[];
  waypoints: number[][];
  palette: Record<string, string>;
  decoration_count?: number;
}

export type ServerMessage =
  | { type: "welcome"; level: LevelDoc; params: Record<string, unknown>; dt: number }
  | { type: "frame"; frame: FrameData }
  | { type: "ended"; report: ReportData }
  | { type: "error"; code: string; message: string };

export type ClientMessage =
  | { type: "hello"; level_id: string; device_descriptor?: DeviceDescriptor;
      calibration?: CalibrationData }
  | { type: "input"; t: number; axes: number[] }
  | { type: "end" };

/** The 16-bit two-axis descriptor browser sticks are prescaled onto. */
export const SYNTHETIC_GAMEPAD: DeviceDescriptor = {
  device_id: "gamepad",
  axis_ranges: [[0, 65535], [0, 65535]],
  axis_roles: ["lateral", "forward"],
};

export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

function bad(path: string, want: string): never {
  throw new Error(`${path}: expected ${want}`);
}

function num(v: unknown, path: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) bad(path, "a number");
  return v;
}

function obj(v: unknown, path: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) {
    bad(path, "an object");
  }
  return v as Record<string, unknown>;
}

function arr(v: unknown, path: string): unknown[] {
  if (!Array.isArray(v)) bad(path, "a list");
  return v;
}

function checkMetrics(v: unknown, path: string): MetricsData {
  const d = obj(v, path);
  for (const k of ["elapsed", "on_route_time", "off_route_time"]) {
    num(d[k], `${path}.${k}`);
  }
  if (typeof d.completed !== "boolean") bad(`${path}.completed`, "a boolean");
  return d as unknown as MetricsData;
}

function checkFrame(v: unknown, path: string): FrameData {
  const d = obj(v, path);
  num(d.tick, `${path}.tick`);
  num(d.sim_time, `${path}.sim_time`);
  const chair = obj(d.chair, `${path}.chair`);
  for (const k of ["x", "y", "heading"]) num(chair[k], `${path}.chair.${k}`);
  if (typeof d.on_track !== "boolean") bad(`${path}.on_track`, "a boolean");
  for (const [i, e] of arr(d.events, `${path}.events`).entries()) {
    const ev = obj(e, `${path}.events[${i}]`);
    if (typeof ev.kind !== "string") bad(`${path}.events[${i}].kind`, "a string");
  }
  checkMetrics(d.metrics, `${path}.metrics`);
  return d as unknown as FrameData;
}

/** Parse one server→client message; throws Error naming the bad field. */
export function decodeMessage(text: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    throw new Error("message: not valid JSON");
  }
  const d = obj(doc, "message");
  switch (d.type) {
    case "welcome": {
      const level = obj(d.level, "welcome.level") as unknown as LevelDoc;
      obj(level.palette, "welcome.level.palette");
      arr(level.route, "welcome.level.route");
      return { type: "welcome", level,
               params: obj(d.params ?? {}, "welcome.params"),
               dt: num(d.dt, "welcome.dt") };
    }
    case "frame":
      return { type: "frame", frame: checkFrame(d.frame, "frame.frame") };
    case "ended": {
      const report = obj(d.report, "ended.report");
      checkMetrics(report.metrics, "ended.report.metrics");
      if (typeof report.end_reason !== "string") {
        bad("ended.report.end_reason", "a string");
      }
      return { type: "ended", report: report as unknown as ReportData };
    }
    case "error": {
      if (typeof d.code !== "string" || typeof d.message !== "string") {
        bad("error", "code and message strings");
      }
      return { type: "error", code: d.code, message: d.message };
    }
    default:
      bad("message.type", "welcome | frame | ended | error");
  }
}
