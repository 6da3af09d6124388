"""
Driving a circle with constant wheel speeds
===========================================

With the wheels held at two different speeds the chair traces a circle.
Integrating tick by tick for one full period should bring it back to the
start pose — a quick sanity check you can eyeball.
"""

import math

from wheelsim import ChairParams, ChairState, integrate_pose

p = ChairParams()
dt = 1 / 60

# outer wheel faster: curve to the left
st = ChairState(v_left=0.6, v_right=0.9)
omega = (st.v_right - st.v_left) / p.track_width
period = 2 * math.pi / omega
print(f"turn rate {omega:.3f} rad/s, full circle in {period:.2f} s")

n = round(period / dt)
for _ in range(n):
    st = integrate_pose(st, dt, p)

print(f"after {n} ticks: x={st.x:+.5f} y={st.y:+.5f} heading={st.heading:+.5f}")
print("(a perfect period would land on 0,0,0 — the residue is the "
      "mismatch between the rounded tick count and the true period)")
