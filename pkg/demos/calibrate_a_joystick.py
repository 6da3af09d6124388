"""
Calibrating a drifting joystick
===============================

A worn stick rarely rests at the electrical midpoint. Collect a second of
resting samples, fit the center and a deadzone wide enough to swallow the
tremor, then watch the same raw readings land where they should.
"""

import random

from wheelsim import adc_joystick, calibrate_center, normalize

dev = adc_joystick()          # 10-bit two-axis stick, 0..1023 per axis

# resting samples: off-center (530, 505) with a little hand tremor
rng = random.Random(3)
resting = [(530 + rng.randint(-6, 6), 505 + rng.randint(-6, 6))
           for _ in range(60)]

cal = calibrate_center(resting, dev)
print(f"fitted center {cal.center}, deadzone {cal.deadzone:.4f}")

for raw in [(530, 505), (536, 500), (1023, 505), (530, 0), (700, 700)]:
    s = normalize(raw, dev, cal)
    print(f"  raw {raw} -> ({s.x:+.4f}, {s.y:+.4f})")

print("the first two rows are tremor inside the deadzone: exactly zero, "
      "no creep")
