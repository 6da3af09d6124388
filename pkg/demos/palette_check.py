"""
Checking a palette before shipping a level
==========================================
"""

from itertools import combinations

from wheelsim import contrast_ratio

palette = {
    "background": "#FAFAFA",
    "route": "#1565C0",
    "chair": "#212121",
    "obstacle": "#78909C",   # borderline on purpose
    "reward": "#B71C1C",
}

bg = palette["background"]
print(f"against background {bg}:")
for key, color in palette.items():
    if key == "background":
        continue
    ratio = contrast_ratio(color, bg)
    verdict = "ok" if ratio >= 4.5 else "TOO LOW"
    print(f"  {key:9s} {color}  {ratio:5.2f}:1  {verdict}")

# overlays can sit on any surface, so check the full matrix too
worst = min((contrast_ratio(a, b), ka, kb)
            for (ka, a), (kb, b) in combinations(palette.items(), 2))
print(f"\nweakest pair overall: {worst[1]}/{worst[2]} at {worst[0]:.2f}:1")
