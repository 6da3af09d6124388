import { describe, expect, it } from "vitest";

import type { LevelDoc, ServerMessage } from "../src/protocol.js";
import { DrawCmd, renderScene } from "../src/renderer.js";
import { applyMessage, initialView, ViewModel } from "../src/viewmodel.js";

const PALETTE = {
  background: "#102027", route: "#80DEEA", chair: "#FFD600",
  obstacle: "#EEEEEE", reward: "#FF8A65",
};

const LEVEL: LevelDoc = {
  id: "scene-test",
  walls: [[-1, -2, 10, -2], [-1, 2, 10, 2]],
  circles: [[3, -0.6, 0.35]],
  rects: [[6, 1.0, 7, 1.8]],
  route: [[0, 0], [9, 0]],
  corridor_half_width: 1.0,
  start: [0, 0, 0],
  goal: [8.5, 0, 0.5],
  waypoints: [[3, 0, 0.6], [6, 0, 0.6]],
  palette: PALETTE,
};

const WELCOME: ServerMessage = {
  type: "welcome", level: LEVEL,
  params: { chair: { chair_radius: 0.45, track_width: 0.6 } }, dt: 1 / 60,
};

function withFrame(onTrack: boolean, events: { tick: number; kind: string; index?: number }[] = [],
                   completed = false): ViewModel {
  let view = applyMessage(initialView(), WELCOME).view;
  return applyMessage(view, {
    type: "frame",
    frame: {
      tick: 10, sim_time: 10 / 60,
      chair: { x: 1.5, y: 0.2, heading: 0.4, v_left: 0.5, v_right: 0.6 },
      on_track: onTrack, events,
      metrics: { elapsed: 10 / 60, on_route_time: 0, off_route_time: 0,
                 collision_count: 0, waypoints_hit: 0, completed },
    },
  }).view;
}

function colorsOf(cmds: DrawCmd[]): Set<string> {
  return new Set(cmds.map((c) => c.color));
}

describe("palette discipline", () => {
  const paletteColors = new Set(Object.values(PALETTE));

  it.each([
    ["on track", withFrame(true)],
    ["off track", withFrame(false)],
    ["celebrating", withFrame(true, [{ tick: 10, kind: "level_completed" }], true)],
  ])("scene colors are a subset of the palette: %s", (_name, view) => {
    const cmds = renderScene(view, 960, 540);
    expect(cmds.length).toBeGreaterThan(5);
    for (const color of colorsOf(cmds)) {
      expect(paletteColors.has(color)).toBe(true);
    }
  });

  it("draws nothing before the welcome", () => {
    expect(renderScene(initialView(), 960, 540)).toEqual([]);
  });
});

describe("scene contents", () => {
  it("chair is a body, four wheels, and a heading tick", () => {
    const cmds = renderScene(withFrame(true), 960, 540);
    const bodies = cmds.filter((c) => c.op === "circle" && c.fill
                                      && c.color === PALETTE.chair);
    const wheels = cmds.filter((c) => c.op === "seg" && c.color === PALETTE.chair);
    const nose = cmds.filter((c) => c.op === "seg" && c.color === PALETTE.background);
    expect(bodies).toHaveLength(1);
    expect(wheels).toHaveLength(4);
    expect(nose).toHaveLength(1);
  });

  it("before any frame, the chair stands at the start pose", () => {
    const view = applyMessage(initialView(), WELCOME).view;
    const cmds = renderScene(view, 960, 540);
    const body = cmds.find((c) => c.op === "circle" && c.fill
                                  && c.color === PALETTE.chair);
    expect(body).toBeDefined();
  });

  it("smiley appears only while on track", () => {
    const arcs = (v: ViewModel) =>
      renderScene(v, 960, 540).filter((c) => c.op === "arc");
    expect(arcs(withFrame(true)).length).toBe(1);
    expect(arcs(withFrame(false)).length).toBe(0);
  });

  it("fireworks replace the smiley after completion", () => {
    const view = withFrame(true, [{ tick: 10, kind: "level_completed" }], true);
    const cmds = renderScene(view, 960, 540);
    expect(cmds.filter((c) => c.op === "arc")).toHaveLength(0);
    // three bursts of ten rays, over the regular scene segments
    const raysAndSegs = cmds.filter((c) => c.op === "seg");
    expect(raysAndSegs.length).toBeGreaterThanOrEqual(30);
  });

  it("collected reward rings disappear from the scene", () => {
    const ringCount = (v: ViewModel) =>
      renderScene(v, 960, 540)
        .filter((c) => c.op === "circle" && !c.fill && c.color === PALETTE.reward)
        .length;
    // off-track frames so the smiley's own ring stays out of the count:
    // goal ring + 2 waypoint rings, then one waypoint collected
    expect(ringCount(withFrame(false))).toBe(3);
    expect(ringCount(withFrame(false, [{ tick: 10, kind: "waypoint_reached", index: 1 }])))
      .toBe(2);
  });

  it("world y points up on screen", () => {
    const cmds = renderScene(withFrame(true), 960, 540);
    const walls = cmds.filter((c): c is Extract<DrawCmd, { op: "seg" }> =>
      c.op === "seg" && c.color === PALETTE.obstacle);
    expect(walls).toHaveLength(2);
    // walls come out in level order: y=-2 first, y=+2 second; the higher
    // world wall must land higher on screen (smaller pixel y)
    const [low, high] = walls;
    expect(high.y1).toBeLessThan(low.y1);
  });
});
