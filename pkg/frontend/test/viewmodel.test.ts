import { describe, expect, it } from "vitest";

import type { FrameData, ServerMessage, SimEventData } from "../src/protocol.js";
import { applyMessage, initialView, summarize, ViewModel } from "../src/viewmodel.js";

function frame(tick: number, onTrack: boolean,
               events: SimEventData[] = [], completed = false): FrameData {
  return {
    tick,
    sim_time: tick / 60,
    chair: { x: tick * 0.02, y: 0, heading: 0, v_left: 0.5, v_right: 0.5 },
    on_track: onTrack,
    events,
    metrics: {
      elapsed: tick / 60, on_route_time: 0, off_route_time: 0,
      collision_count: 0, waypoints_hit: 0, completed,
    },
  };
}

const WELCOME: ServerMessage = {
  type: "welcome",
  level: {
    id: "t", walls: [], circles: [], rects: [],
    route: [[0, 0], [5, 0]], corridor_half_width: 1,
    start: [0, 0, 0], goal: [4, 0, 0.5], waypoints: [],
    palette: { background: "#FFFFFF", route: "#1565C0", chair: "#212121",
               obstacle: "#37474F", reward: "#B71C1C" },
  },
  params: { chair: { chair_radius: 0.4, track_width: 0.55 }, assist_gain: 0 },
  dt: 1 / 60,
};

function reduce(view: ViewModel, msgs: ServerMessage[]) {
  const sounds: string[] = [];
  for (const m of msgs) {
    const u = applyMessage(view, m);
    view = u.view;
    sounds.push(...u.sounds);
  }
  return { view, sounds };
}

describe("overlay state machine", () => {
  it("smiley equals on_track frame-by-frame until completion", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    const script = [true, true, false, false, true, false, true];
    script.forEach((onTrack, i) => {
      view = applyMessage(view, { type: "frame", frame: frame(i + 1, onTrack) }).view;
      expect(view.overlay).toBe(onTrack ? "smiley" : "none");
      expect(view.completed).toBe(false);
    });
  });

  it("fireworks and applause fire exactly once on completion", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    const done = frame(90, true,
                       [{ tick: 90, kind: "level_completed" }], true);
    const { view: v1, sounds } = reduce(view, [
      { type: "frame", frame: frame(1, true) },
      { type: "frame", frame: done },
      // defensive repeats: a duplicate event and a completed report
      { type: "frame", frame: frame(91, true, [{ tick: 90, kind: "level_completed" }], true) },
      { type: "ended", report: {
          level_id: "t", params: {}, metrics: done.metrics,
          events: done.events, trace: [], end_reason: "completed",
          created_at: "2026-08-16T00:00:00+00:00" } },
    ]);
    expect(v1.overlay).toBe("fireworks");
    expect(v1.connection).toBe("ended");
    expect(sounds.filter((s) => s === "applause")).toHaveLength(1);
  });

  it("completion beats on_track: no smiley after fireworks", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    view = reduce(view, [
      { type: "frame", frame: frame(5, true, [{ tick: 5, kind: "level_completed" }], true) },
      { type: "frame", frame: frame(6, true) },
    ]).view;
    expect(view.overlay).toBe("fireworks");
  });

  it("session that ends without completion clears the overlay", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    const { view: v1, sounds } = reduce(view, [
      { type: "frame", frame: frame(3, true) },
      { type: "ended", report: {
          level_id: "t", params: {}, metrics: frame(10800, true).metrics,
          events: [], trace: [], end_reason: "timeout",
          created_at: "2026-08-16T00:00:00+00:00" } },
    ]);
    expect(v1.overlay).toBe("none");
    expect(v1.completed).toBe(false);
    expect(sounds).toEqual([]);
  });
});

describe("feedback sounds", () => {
  it("each move_started event asks for one move sound", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    const { sounds } = reduce(view, [
      { type: "frame", frame: frame(1, true, [{ tick: 1, kind: "move_started" }]) },
      { type: "frame", frame: frame(2, true) },
      { type: "frame", frame: frame(9, true, [{ tick: 8, kind: "move_stopped" }]) },
      { type: "frame", frame: frame(30, true, [{ tick: 30, kind: "move_started" }]) },
    ]);
    expect(sounds).toEqual(["move", "move"]);
  });

  it("two move_started in a single frame is a hard error", () => {
    const view = applyMessage(initialView(), WELCOME).view;
    const doubled = frame(1, true, [
      { tick: 1, kind: "move_started" },
      { tick: 1, kind: "move_started" },
    ]);
    expect(() => applyMessage(view, { type: "frame", frame: doubled }))
      .toThrow(/twice/);
  });
});

describe("bookkeeping", () => {
  it("collects visited waypoint indexes from events", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    view = reduce(view, [
      { type: "frame", frame: frame(10, true, [{ tick: 10, kind: "waypoint_reached", index: 0 }]) },
      { type: "frame", frame: frame(40, true, [{ tick: 40, kind: "waypoint_reached", index: 2 }]) },
    ]).view;
    expect(view.visitedWaypoints).toEqual([0, 2]);
  });

  it("welcome carries chair shape and dt into the view", () => {
    const view = applyMessage(initialView(), WELCOME).view;
    expect(view.connection).toBe("live");
    expect(view.chair).toEqual({ radius: 0.4, trackWidth: 0.55 });
    expect(view.dt).toBeCloseTo(1 / 60, 12);
  });

  it("error messages land in lastError without touching the scene", () => {
    let view = applyMessage(initialView(), WELCOME).view;
    view = applyMessage(view, { type: "frame", frame: frame(1, true) }).view;
    const next = applyMessage(view, { type: "error", code: "bad_message",
                                      message: "nope" }).view;
    expect(next.lastError).toBe("bad_message: nope");
    expect(next.frame).toBe(view.frame);
    expect(next.overlay).toBe("smiley");
  });

  it("summarize reads like a sentence", () => {
    const report = {
      level_id: "t", params: {},
      metrics: { elapsed: 12.5, on_route_time: 10.0, off_route_time: 2.5,
                 collision_count: 1, waypoints_hit: 3, completed: true },
      events: [], trace: [] as [number, number][],
      end_reason: "completed", created_at: "",
    };
    expect(summarize(report)).toBe(
      "completed after 12.5 s — on route 10.0 s, off 2.5 s, 3 waypoints, 1 collisions");
  });
});
