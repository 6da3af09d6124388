import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wheelsim.chair import (
    ChairParams,
    ChairState,
    JoystickSample,
    WheelCommand,
    apply_slew,
    integrate_pose,
    map_joystick,
)


def euler_endpoint(x0, y0, h0, v, omega, total_t, n_steps):
    """Forward-Euler endpoint in closed form.

    Euler's heading sequence is theta_k = h0 + k*omega*h, so the position
    sums are Dirichlet kernels — evaluating them exactly gives the Euler
    iterate without running the loop.
    """
    h = total_t / n_steps
    phi = omega * h
    if abs(phi) < 1e-14:
        return (x0 + v * math.cos(h0) * total_t,
                y0 + v * math.sin(h0) * total_t,
                h0 + omega * total_t)
    k = math.sin(n_steps * phi / 2.0) / math.sin(phi / 2.0)
    mid = (n_steps - 1) * phi / 2.0
    x = x0 + v * h * k * math.cos(h0 + mid)
    y = y0 + v * h * k * math.sin(h0 + mid)
    return x, y, h0 + omega * total_t


class TestParams:
    def test_defaults_valid(self):
        p = ChairParams()
        assert p.track_width == 0.6 and p.max_speed == 1.5

    @pytest.mark.parametrize("field", ["track_width", "wheel_radius",
                                       "chair_radius", "max_speed",
                                       "max_yaw_rate", "max_accel"])
    def test_rejects_nonpositive(self, field):
        with pytest.raises(ValueError):
            ChairParams(**{field: 0.0})

    def test_round_trip(self):
        p = ChairParams(max_speed=2.0)
        assert ChairParams.from_dict(p.to_dict()) == p


class TestJoystickSample:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            JoystickSample(x=1.2, y=0.0)

    def test_corner_allowed(self):
        s = JoystickSample(x=1.0, y=-1.0)
        assert (s.x, s.y) == (1.0, -1.0)


class TestMapJoystick:
    def test_rest(self):
        cmd = map_joystick(JoystickSample(0.0, 0.0), ChairParams())
        assert cmd == WheelCommand(0.0, 0.0)

    def test_full_forward(self):
        cmd = map_joystick(JoystickSample(0.0, 1.0), ChairParams(max_speed=1.5))
        assert cmd == WheelCommand(1.5, 1.5)

    def test_spin_in_place_clockwise(self):
        p = ChairParams(max_yaw_rate=1.0, track_width=0.6)
        cmd = map_joystick(JoystickSample(1.0, 0.0), p)
        assert cmd.v_left == pytest.approx(0.3)
        assert cmd.v_right == pytest.approx(-0.3)

    def test_blended_forward_turn(self):
        p = ChairParams(max_speed=1.0, max_yaw_rate=1.0, track_width=0.6)
        cmd = map_joystick(JoystickSample(0.5, 0.5), p)
        assert cmd.v_left == pytest.approx(0.65)
        assert cmd.v_right == pytest.approx(0.35)

    @given(st.floats(-1, 1), st.floats(-1, 1))
    def test_clamped_to_max_speed(self, x, y):
        p = ChairParams()
        cmd = map_joystick(JoystickSample(x, y), p)
        assert abs(cmd.v_left) <= p.max_speed
        assert abs(cmd.v_right) <= p.max_speed

    @given(st.floats(-1, 1), st.floats(-1, 1))
    def test_mirror_symmetry(self, x, y):
        # Scale inputs so no clamp fires; then mirroring x swaps the wheels
        # exactly (IEEE: a - (-b) == a + b).
        p = ChairParams(max_speed=1.5, max_yaw_rate=1.2, track_width=0.6)
        scale = p.max_speed / (abs(y) * p.max_speed
                               + abs(x) * p.max_yaw_rate * p.track_width / 2
                               + 1e-9)
        if scale < 1.0:
            x, y = x * scale, y * scale
        a = map_joystick(JoystickSample(x, y), p)
        b = map_joystick(JoystickSample(-x, y), p)
        assert a.v_left == b.v_right
        assert a.v_right == b.v_left


class TestApplySlew:
    def test_rate_limited(self):
        st0 = ChairState(v_left=0.0, v_right=0.0)
        p = ChairParams(max_accel=2.0)
        vl, vr = apply_slew(st0, WheelCommand(1.0, 1.0), 0.1, p)
        assert vl == pytest.approx(0.2) and vr == pytest.approx(0.2)

    def test_reaches_target_within_step(self):
        st0 = ChairState(v_left=0.95, v_right=0.95)
        p = ChairParams(max_accel=2.0)
        vl, _ = apply_slew(st0, WheelCommand(1.0, 1.0), 0.1, p)
        assert vl == 1.0

    def test_fixed_point(self):
        st0 = ChairState(v_left=1.0, v_right=1.0)
        vl, vr = apply_slew(st0, WheelCommand(1.0, 1.0), 0.1, ChairParams())
        assert (vl, vr) == (1.0, 1.0)

    @given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5),
           st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_bound(self, v0l, v0r, cl, cr):
        p = ChairParams()
        dt = 1.0 / 60.0
        st0 = ChairState(v_left=v0l, v_right=v0r)
        vl, vr = apply_slew(st0, WheelCommand(cl, cr), dt, p)
        assert abs(vl - v0l) <= p.max_accel * dt + 1e-12
        assert abs(vr - v0r) <= p.max_accel * dt + 1e-12


class TestIntegratePose:
    def test_straight_line(self):
        st0 = ChairState(v_left=1.0, v_right=1.0)
        out = integrate_pose(st0, 0.5, ChairParams())
        assert (out.x, out.y, out.heading) == (0.5, 0.0, 0.0)

    def test_spin_in_place(self):
        st0 = ChairState(x=2.0, y=3.0, v_left=-0.5, v_right=0.5)
        out = integrate_pose(st0, 0.25, ChairParams())
        assert (out.x, out.y) == (2.0, 3.0)
        assert out.heading != 0.0

    def test_quarter_circle_arc(self):
        # v=1 m/s, omega=1 rad/s for pi/2 seconds: quarter circle of radius 1.
        p = ChairParams(track_width=0.6)
        st0 = ChairState(v_left=1.0 - 0.3, v_right=1.0 + 0.3)
        out = integrate_pose(st0, math.pi / 2.0, p)
        assert out.x == pytest.approx(1.0, abs=1e-9)
        assert out.y == pytest.approx(1.0, abs=1e-9)
        assert out.heading == pytest.approx(math.pi / 2.0, abs=1e-9)
        # and the million-step Euler endpoint lands on the same point
        ex, ey, eh = euler_endpoint(0, 0, 0, 1.0, 1.0, math.pi / 2.0, 10**6)
        assert out.x == pytest.approx(ex, abs=1e-5)
        assert out.y == pytest.approx(ey, abs=1e-5)
        assert out.heading == pytest.approx(eh, abs=1e-5)

    def test_straight_keeps_heading_bits(self):
        st0 = ChairState(heading=1.23456789, v_left=0.7, v_right=0.7)
        out = integrate_pose(st0, 1.0 / 60.0, ChairParams())
        assert out.heading == st0.heading

    def test_spin_keeps_position_bits(self):
        st0 = ChairState(x=-3.25, y=7.5, v_left=0.4, v_right=-0.4)
        out = integrate_pose(st0, 1.0 / 60.0, ChairParams())
        assert (out.x, out.y) == (st0.x, st0.y)

    @given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-10, 10))
    def test_heading_stays_normalized(self, vl, vr, h0):
        from wheelsim.geometry import normalize_angle
        st0 = ChairState(heading=normalize_angle(h0), v_left=vl, v_right=vr)
        out = integrate_pose(st0, 1.0 / 60.0, ChairParams())
        assert -math.pi < out.heading <= math.pi

    def test_wheel_spin_advances(self):
        p = ChairParams(wheel_radius=0.17)
        st0 = ChairState(v_left=1.0, v_right=1.0)
        out = integrate_pose(st0, 0.1, p)
        expected = (1.0 * 0.1 / 0.17) % math.tau
        assert out.wheel_spin == (expected,) * 4

    def test_matches_euler_against_random_commands(self):
        rng = np.random.default_rng(42)
        p = ChairParams()
        for _ in range(25):
            vl, vr = rng.uniform(-1.5, 1.5, size=2)
            h0 = rng.uniform(-math.pi, math.pi)
            n_ticks = int(rng.integers(1, 120))
            dt = 1.0 / 60.0
            stt = ChairState(heading=h0, v_left=vl, v_right=vr)
            for _ in range(n_ticks):
                stt = integrate_pose(stt, dt, p)
            v = 0.5 * (vl + vr)
            omega = (vr - vl) / p.track_width
            ex, ey, eh = euler_endpoint(0, 0, h0, v, omega, n_ticks * dt, 10**6)
            assert stt.x == pytest.approx(ex, abs=1e-5)
            assert stt.y == pytest.approx(ey, abs=1e-5)
            assert math.sin(stt.heading) == pytest.approx(math.sin(eh), abs=1e-5)
            assert math.cos(stt.heading) == pytest.approx(math.cos(eh), abs=1e-5)
