"""
A complete session without a server
===================================

Drives the slalom level to its end with a two-line steering rule, then
reads the report — the same code path the CLI's replay command uses. The
``on_frame`` hook feeds each tick's pose back into the input timeline, so
the "controller" is nothing but scheduled joystick samples.
"""

import math
from pathlib import Path

from wheelsim import InputHold, Session, load_level_file, run_headless

level = load_level_file(Path(__file__).resolve().parents[1]
                        / "levels" / "slalom.level.json")

# aim points: the reward rings, then the goal
targets = [(w.cx, w.cy) for w in level.waypoints] + [(level.goal.cx,
                                                      level.goal.cy)]

hold = InputHold()
session = Session(level, max_duration=60.0)


def steer(frame):
    # point the stick at the next target; 3/4 throttle keeps the turning
    # radius tight enough to thread the cones
    tx, ty = targets[min(frame.metrics.waypoints_hit, len(targets) - 1)]
    err = math.atan2(ty - frame.chair.y, tx - frame.chair.x) - frame.chair.heading
    err = math.atan2(math.sin(err), math.cos(err))
    hold.push(frame.sim_time, -max(-1.0, min(1.0, 2.5 * err)), 0.75)


report = run_headless(session, hold, on_frame=steer)

m = report.metrics
print(f"end: {report.end_reason} after {m.elapsed:.2f} s")
print(f"on route {m.on_route_time:.2f} s / off route {m.off_route_time:.2f} s")
print(f"collisions {m.collision_count}, waypoints {m.waypoints_hit}")
print()
print("event log:")
for e in report.events:
    extra = f" #{e.index}" if e.index is not None else ""
    extra += f" ({e.obstacle_id})" if e.obstacle_id else ""
    print(f"  tick {e.tick:4d}  {e.kind.value}{extra}")
