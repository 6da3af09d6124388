"""
Route corridors: who is on track?
=================================
"""

from pathlib import Path

from wheelsim import load_level_file

level = load_level_file(Path(__file__).resolve().parents[1]
                        / "levels" / "l_turn.level.json")

print(f"level '{level.id}': corridor half-width {level.corridor_half_width}")
print(f"route vertices: {level.route.vertices.tolist()}")
print()

# probe a few positions around the corner of the L
for pt in [(1.0, 0.0), (4.0, 0.3), (4.0, 2.0), (5.5, 0.0), (4.2, 4.0)]:
    dist, s = level.project_to_route(pt)
    tag = "on " if level.is_on_track(pt) else "off"
    print(f"  {pt}: {tag} track, {dist:.3f} m from the centerline "
          f"(projects to arc-length {s:.3f})")
