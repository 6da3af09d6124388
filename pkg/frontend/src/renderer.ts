/**
 * Scene rendering as data: the view reduces to a list of draw commands,
 * each carrying an explicit color taken from the level palette. Keeping
 * the list pure makes "only palette colors ever reach the screen" a unit
 * assertion instead of a screenshot diff; `paint` below is the only code
 * that touches a canvas.
 */

import type { LevelDoc } from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export type DrawCmd =
  | { op: "clear"; color: string }
  | { op: "band"; points: [number, number][]; width: number; color: string }
  | { op: "seg"; x1: number; y1: number; x2: number; y2: number;
      width: number; color: string }
  | { op: "circle"; cx: number; cy: number; r: number; color: string;
      fill: boolean; width: number }
  | { op: "rect"; x: number; y: number; w: number; h: number; color: string }
  | { op: "arc"; cx: number; cy: number; r: number; a0: number; a1: number;
      width: number; color: string };

interface Transform {
  scale: number;
  toX(wx: number): number;
  toY(wy: number): number;
}

function fitLevel(level: LevelDoc, width: number, height: number): Transform {
  let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
  const grow = (x: number, y: number) => {
    minX = Math.min(minX, x); maxX = Math.max(maxX, x);
    minY = Math.min(minY, y); maxY = Math.max(maxY, y);
  };
  for (const [x1, y1, x2, y2] of level.walls) { grow(x1, y1); grow(x2, y2); }
  for (const [x, y] of level.route) grow(x, y);
  for (const [cx, cy, r] of level.circles) { grow(cx - r, cy - r); grow(cx + r, cy + r); }
  for (const [x1, y1, x2, y2] of level.rects) { grow(x1, y1); grow(x2, y2); }
  const margin = 0.5;
  minX -= margin; minY -= margin; maxX += margin; maxY += margin;
  const scale = Math.min(width / (maxX - minX), height / (maxY - minY));
  const ox = (width - (maxX - minX) * scale) / 2;
  const oy = (height - (maxY - minY) * scale) / 2;
  return {
    scale,
    toX: (wx) => ox + (wx - minX) * scale,
    // world y points up, screen y points down
    toY: (wy) => oy + (maxY - wy) * scale,
  };
}

function chairCmds(view: ViewModel, t: Transform, palette: Record<string, string>): DrawCmd[] {
  const level = view.level!;
  const pose = view.frame?.chair ?? {
    x: level.start[0], y: level.start[1], heading: level.start[2],
    v_left: 0, v_right: 0,
  };
  const { radius, trackWidth } = view.chair;
  const cx = t.toX(pose.x);
  const cy = t.toY(pose.y);
  const cmds: DrawCmd[] = [];

  // four wheels: short thick segments at the corners, rotated with the body
  const cos = Math.cos(pose.heading);
  const sin = Math.sin(pose.heading);
  const wheelLen = radius * 0.55;
  const lat = trackWidth / 2;
  const lon = radius * 0.62;
  for (const sx of [-1, 1]) {
    for (const sy of [-1, 1]) {
      const wx = pose.x + sx * lon * cos - sy * lat * sin;
      const wy = pose.y + sx * lon * sin + sy * lat * cos;
      cmds.push({
        op: "seg",
        x1: t.toX(wx - (wheelLen / 2) * cos), y1: t.toY(wy - (wheelLen / 2) * sin),
        x2: t.toX(wx + (wheelLen / 2) * cos), y2: t.toY(wy + (wheelLen / 2) * sin),
        width: Math.max(2, 0.1 * t.scale),
        color: palette.chair,
      });
    }
  }
  // body on top of the wheels, then a nose tick so the heading reads
  cmds.push({ op: "circle", cx, cy, r: radius * t.scale, color: palette.chair,
              fill: true, width: 1 });
  cmds.push({
    op: "seg", x1: cx, y1: cy,
    x2: t.toX(pose.x + radius * cos), y2: t.toY(pose.y + radius * sin),
    width: Math.max(2, 0.07 * t.scale),
    color: palette.background,
  });
  return cmds;
}

function overlayCmds(view: ViewModel, width: number, height: number,
                     palette: Record<string, string>): DrawCmd[] {
  if (view.overlay === "smiley") {
    const r = Math.min(width, height) * 0.07;
    const cx = width - r * 1.6;
    const cy = r * 1.6;
    return [
      { op: "circle", cx, cy, r, color: palette.reward, fill: false,
        width: Math.max(3, r * 0.14) },
      { op: "circle", cx: cx - r * 0.35, cy: cy - r * 0.25, r: r * 0.11,
        color: palette.reward, fill: true, width: 1 },
      { op: "circle", cx: cx + r * 0.35, cy: cy - r * 0.25, r: r * 0.11,
        color: palette.reward, fill: true, width: 1 },
      { op: "arc", cx, cy, r: r * 0.55, a0: Math.PI * 0.15, a1: Math.PI * 0.85,
        width: Math.max(3, r * 0.12), color: palette.reward },
    ];
  }
  if (view.overlay === "fireworks") {
    // deterministic celebratory bursts; phase follows the tick so the
    // rays twinkle under the fixed frame cadence
    const tick = view.frame?.tick ?? 0;
    const colors = [palette.reward, palette.route, palette.chair];
    const cmds: DrawCmd[] = [];
    const bursts: [number, number][] = [
      [0.25, 0.3], [0.5, 0.18], [0.75, 0.32],
    ];
    bursts.forEach(([fx, fy], b) => {
      const cx = fx * width;
      const cy = fy * height;
      const rOuter = Math.min(width, height) * (0.10 + 0.02 * ((tick + b) % 3));
      for (let k = 0; k < 10; k++) {
        const a = (Math.PI * 2 * k) / 10 + b;
        cmds.push({
          op: "seg",
          x1: cx + Math.cos(a) * rOuter * 0.35,
          y1: cy + Math.sin(a) * rOuter * 0.35,
          x2: cx + Math.cos(a) * rOuter,
          y2: cy + Math.sin(a) * rOuter,
          width: 3,
          color: colors[(k + b) % colors.length],
        });
      }
    });
    return cmds;
  }
  return [];
}

/**
 * Reduce the view to draw commands. Before the welcome there is nothing
 * to draw; afterwards the scene is: background, route corridor, goal and
 * pending reward rings, obstacles, the chair, and the active overlay.
 */
export function renderScene(view: ViewModel, width: number, height: number): DrawCmd[] {
  const level = view.level;
  if (!level) return [];
  const palette = level.palette;
  const t = fitLevel(level, width, height);
  const cmds: DrawCmd[] = [{ op: "clear", color: palette.background }];

  // route corridor: the drivable band around the centerline
  cmds.push({
    op: "band",
    points: level.route.map(([x, y]) => [t.toX(x), t.toY(y)] as [number, number]),
    width: 2 * level.corridor_half_width * t.scale,
    color: palette.route,
  });

  // goal ring and the reward rings not yet collected
  const [gx, gy, gr] = level.goal;
  cmds.push({ op: "circle", cx: t.toX(gx), cy: t.toY(gy), r: gr * t.scale,
              color: palette.reward, fill: false,
              width: Math.max(3, 0.1 * t.scale) });
  level.waypoints.forEach(([wx, wy, wr], i) => {
    if (!view.visitedWaypoints.includes(i)) {
      cmds.push({ op: "circle", cx: t.toX(wx), cy: t.toY(wy), r: wr * t.scale,
                  color: palette.reward, fill: false,
                  width: Math.max(2, 0.05 * t.scale) });
    }
  });

  // obstacles
  for (const [x1, y1, x2, y2] of level.walls) {
    cmds.push({ op: "seg", x1: t.toX(x1), y1: t.toY(y1),
                x2: t.toX(x2), y2: t.toY(y2),
                width: Math.max(3, 0.08 * t.scale), color: palette.obstacle });
  }
  for (const [cx, cy, r] of level.circles) {
    cmds.push({ op: "circle", cx: t.toX(cx), cy: t.toY(cy), r: r * t.scale,
                color: palette.obstacle, fill: true, width: 1 });
  }
  for (const [x1, y1, x2, y2] of level.rects) {
    cmds.push({ op: "rect", x: t.toX(x1), y: t.toY(y2),
                w: (x2 - x1) * t.scale, h: (y2 - y1) * t.scale,
                color: palette.obstacle });
  }

  cmds.push(...chairCmds(view, t, palette));
  cmds.push(...overlayCmds(view, width, height, palette));
  return cmds;
}

/** The single canvas-touching function: replay a command list. */
export function paint(ctx: CanvasRenderingContext2D, cmds: DrawCmd[],
                      width: number, height: number): void {
  for (const c of cmds) {
    switch (c.op) {
      case "clear":
        ctx.fillStyle = c.color;
        ctx.fillRect(0, 0, width, height);
        break;
      case "band":
        ctx.strokeStyle = c.color;
        ctx.lineWidth = c.width;
        ctx.lineCap = "round";
        ctx.lineJoin = "round";
        ctx.beginPath();
        c.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
        ctx.stroke();
        break;
      case "seg":
        ctx.strokeStyle = c.color;
        ctx.lineWidth = c.width;
        ctx.lineCap = "round";
        ctx.beginPath();
        ctx.moveTo(c.x1, c.y1);
        ctx.lineTo(c.x2, c.y2);
        ctx.stroke();
        break;
      case "circle":
        ctx.beginPath();
        ctx.arc(c.cx, c.cy, c.r, 0, Math.PI * 2);
        if (c.fill) {
          ctx.fillStyle = c.color;
          ctx.fill();
        } else {
          ctx.strokeStyle = c.color;
          ctx.lineWidth = c.width;
          ctx.stroke();
        }
        break;
      case "rect":
        ctx.fillStyle = c.color;
        ctx.fillRect(c.x, c.y, c.w, c.h);
        break;
      case "arc":
        ctx.strokeStyle = c.color;
        ctx.lineWidth = c.width;
        ctx.lineCap = "round";
        ctx.beginPath();
        ctx.arc(c.cx, c.cy, c.r, c.a0, c.a1);
        ctx.stroke();
        break;
    }
  }
}
