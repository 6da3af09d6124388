import math

import numpy as np
import pytest

from wheelsim.chair import JoystickSample
from wheelsim.errors import SessionEnded, SessionNotEnded
from wheelsim.events import EventKind
from wheelsim.level import parse_level
from wheelsim.session import (
    InputHold,
    Frame,
    Session,
    SessionReport,
    load_report_file,
    run_headless,
    save_report_file,
)
from wheelsim.simulate import SimConfig

FORWARD = JoystickSample(0.0, 1.0)
REST = JoystickSample(0.0, 0.0)


def drive(session, samples):
    return [session.tick(s) for s in samples]


def wiggle_samples(n=420):
    """Deterministic script that leaves and re-enters the slalom corridor."""
    out = [FORWARD] * 60
    out += [JoystickSample(-1.0, 0.5)] * 100   # hard left, drifts off-route
    out += [JoystickSample(1.0, 0.5)] * 110    # swing back
    out += [FORWARD] * max(0, n - len(out))
    return out[:n]


def seg_distance(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    L2 = vx * vx + vy * vy
    t = 0.0 if L2 == 0.0 else max(0.0, min(1.0, ((px - ax) * vx + (py - ay) * vy) / L2))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def on_route_oracle(level, x, y):
    verts = level.route.vertices
    best = min(seg_distance(x, y, *verts[i], *verts[i + 1])
               for i in range(len(verts) - 1))
    return best <= level.corridor_half_width


class TestCompletion:
    def test_forward_run_completes_sprint(self, sprint_level):
        sess = Session(sprint_level)
        hold = InputHold()
        hold.push(0.0, 0.0, 1.0)
        report = run_headless(sess, hold)

        assert report.end_reason == "completed"
        m = report.metrics
        assert m.completed is True
        assert m.elapsed == pytest.approx(125 / 60)
        assert m.completion_time == m.elapsed
        assert m.off_route_time == 0.0
        assert m.on_route_time == m.elapsed
        assert m.collision_count == 0 and m.waypoints_hit == 1
        assert [(e.tick, e.kind) for e in report.events] == [
            (1, EventKind.MOVE_STARTED),
            (71, EventKind.WAYPOINT_REACHED),
            (125, EventKind.LEVEL_COMPLETED),
        ]
        assert len(report.trace) == 125
        assert report.trace[0] == (0.0, 1.0)

    def test_delayed_input_shifts_run_by_schedule(self, sprint_level):
        # same command scheduled 0.5 s in: everything slides by 30 ticks
        sess = Session(sprint_level)
        hold = InputHold()
        hold.push(0.5, 0.0, 1.0)
        report = run_headless(sess, hold)
        assert report.trace[:30] == ((0.0, 0.0),) * 30
        assert report.trace[30] == (0.0, 1.0)
        assert report.metrics.completion_time == pytest.approx(155 / 60)

    def test_tick_after_end_raises(self, sprint_level):
        sess = Session(sprint_level)
        hold = InputHold()
        hold.push(0.0, 0.0, 1.0)
        run_headless(sess, hold)
        with pytest.raises(SessionEnded):
            sess.tick(FORWARD)

    def test_finalize_before_end_raises(self, sprint_level):
        with pytest.raises(SessionNotEnded):
            Session(sprint_level).finalize()


class TestTimeout:
    def test_idle_session_times_out(self, sprint_level):
        sess = Session(sprint_level, max_duration=2.0)
        frames = []
        while not sess.ended:
            frames.append(sess.tick(REST))
        last = frames[-1]
        assert last.tick == 120
        assert [e.kind for e in last.events] == [EventKind.SESSION_TIMEOUT]
        assert sess.end_reason == "timeout"
        m = sess.metrics()
        assert m.completed is False and m.completion_time is None
        assert m.elapsed == pytest.approx(2.0)
        assert m.on_route_time == m.elapsed     # parked at the start, on route
        assert m.collision_count == 0
        assert "completion_time" not in m.to_dict()

    def test_max_duration_must_be_positive(self, sprint_level):
        with pytest.raises(ValueError):
            Session(sprint_level, max_duration=0.0)


class TestRouteAccounting:
    def test_counters_match_independent_classifier(self, slalom_level):
        sess = Session(slalom_level, max_duration=60.0)
        frames = drive(sess, wiggle_samples())
        on = sum(on_route_oracle(slalom_level, f.chair.x, f.chair.y)
                 for f in frames)
        off = len(frames) - on
        assert off > 0 and on > 0          # the script must cross the edge
        m = sess.metrics()
        assert m.on_route_time == pytest.approx(on * sess.dt)
        assert m.off_route_time == pytest.approx(off * sess.dt)
        assert m.on_route_time + m.off_route_time == pytest.approx(m.elapsed)

    def test_track_events_alternate_and_pair_with_rewards(self, slalom_level):
        sess = Session(slalom_level, max_duration=60.0)
        drive(sess, wiggle_samples())
        track = [e for e in sess.event_log
                 if e.kind in (EventKind.ON_TRACK_ENTERED,
                               EventKind.ON_TRACK_EXITED)]
        assert track, "script should cross the corridor edge"
        assert track[0].kind is EventKind.ON_TRACK_EXITED   # starts on route
        for a, b in zip(track, track[1:]):
            assert a.kind is not b.kind
        entered = [e.tick for e in sess.event_log
                   if e.kind is EventKind.ON_TRACK_ENTERED]
        rewards = [e.tick for e in sess.event_log
                   if e.kind is EventKind.REWARD_SHOWN]
        assert rewards == entered

    def test_mid_run_metrics_equal_truncated_run(self, slalom_level):
        samples = wiggle_samples(200)
        full = Session(slalom_level, max_duration=60.0)
        frames = drive(full, samples)

        prefix = Session(slalom_level, max_duration=60.0)
        drive(prefix, samples[:100])
        assert frames[99].metrics == prefix.metrics()
        assert frames[99].chair == prefix.state


class TestWaypoints:
    def make_level(self, waypoints):
        return parse_level({
            "id": "wp",
            "route": [[0.0, 0.0], [10.0, 0.0]],
            "corridor_half_width": 1.0,
            "start": [0.0, 0.0, 0.0],
            "goal": [9.0, 0.0, 0.5],
            "waypoints": waypoints,
            "palette": {
                "background": "#FFFFFF", "route": "#1565C0",
                "chair": "#212121", "obstacle": "#37474F",
                "reward": "#B71C1C",
            },
        })

    def test_ordered_hits(self):
        level = self.make_level([[2.0, 0.0, 0.5], [5.0, 0.0, 0.5]])
        sess = Session(level, max_duration=30.0)
        hold = InputHold()
        hold.push(0.0, 0.0, 1.0)
        report = run_headless(sess, hold)
        hits = [e for e in report.events
                if e.kind is EventKind.WAYPOINT_REACHED]
        assert [e.index for e in hits] == [0, 1]
        assert report.metrics.waypoints_hit == 2

    def test_reaching_later_waypoint_skips_earlier(self):
        # index 0 sits beyond index 1 along the drive: entering 1 first
        # retires 0 permanently
        level = self.make_level([[5.0, 0.0, 0.5], [1.0, 0.0, 0.5]])
        sess = Session(level, max_duration=30.0)
        hold = InputHold()
        hold.push(0.0, 0.0, 1.0)
        report = run_headless(sess, hold)
        hits = [e for e in report.events
                if e.kind is EventKind.WAYPOINT_REACHED]
        assert [e.index for e in hits] == [1]
        assert report.metrics.waypoints_hit == 1
        assert report.end_reason == "completed"   # drove through x = 5 anyway


class TestReports:
    def test_canonical_json_is_run_deterministic(self, sprint_level):
        def run():
            sess = Session(sprint_level)
            hold = InputHold()
            hold.push(0.0, 0.2, 1.0)
            return run_headless(sess, hold)

        a, b = run(), run()
        assert a.canonical_json() == b.canonical_json()
        assert "created_at" not in a.canonical_body()
        assert a.to_dict()["created_at"]

    def test_report_file_round_trip(self, sprint_level, tmp_path):
        sess = Session(sprint_level)
        hold = InputHold()
        hold.push(0.0, 0.0, 1.0)
        report = run_headless(sess, hold)
        path = tmp_path / "report.json"
        save_report_file(report, path)
        loaded = load_report_file(path)
        assert loaded == report
        assert loaded.canonical_json() == report.canonical_json()

    def test_params_block_contents(self, sprint_level):
        sess = Session(sprint_level, cfg=SimConfig(assist_gain=0.25),
                       max_duration=9.0)
        sess.end("operator")
        report = sess.finalize()
        assert report.end_reason == "operator"
        assert report.params["assist_gain"] == 0.25
        assert report.params["max_duration"] == 9.0
        assert report.params["dt"] == sess.dt
        assert report.params["chair"]["track_width"] == sess.params.track_width
        assert report.metrics.elapsed == 0.0
        assert report.trace == ()

    def test_frame_round_trip(self, sprint_level):
        sess = Session(sprint_level)
        frame = sess.tick(FORWARD)
        assert Frame.from_dict(frame.to_dict()) == frame

    def test_report_dict_round_trip(self, sprint_level):
        sess = Session(sprint_level)
        sess.tick(FORWARD)
        sess.end()
        report = sess.finalize()
        assert SessionReport.from_dict(report.to_dict()) == report


class TestInputHold:
    def test_initial_value_is_neutral(self):
        assert InputHold().sample_at(10.0) == (0.0, 0.0)

    def test_holds_until_scheduled_time(self):
        hold = InputHold()
        hold.push(0.1, 0.5, 0.5)
        assert hold.sample_at(0.0999) == (0.0, 0.0)
        assert hold.sample_at(0.1) == (0.5, 0.5)
        assert hold.sample_at(5.0) == (0.5, 0.5)

    def test_equal_timestamps_keep_arrival_order(self):
        hold = InputHold()
        hold.push(1.0, 0.1, 0.1)
        hold.push(1.0, 0.9, 0.9)
        assert hold.sample_at(1.0) == (0.9, 0.9)

    def test_out_of_order_push_still_applies_by_time(self):
        hold = InputHold()
        hold.push(2.0, 0.3, 0.3)
        hold.push(1.0, 0.7, 0.7)
        assert hold.sample_at(1.5) == (0.7, 0.7)
        assert hold.sample_at(2.0) == (0.3, 0.3)
