"""Color contrast math for accessibility validation (sRGB relative luminance)."""

from __future__ import annotations

from .errors import ParseError


def parse_hex_color(s: str) -> tuple[int, int, int]:
    """Parse '#RRGGBB' into an (r, g, b) tuple of 8-bit ints."""
    if not isinstance(s, str) or len(s) != 7 or s[0] != "#":
        raise ParseError(f"color must be '#RRGGBB', got {s!r}")
    try:
        return int(s[1:3], 16), int(s[3:5], 16), int(s[5:7], 16)
    except ValueError as exc:
        raise ParseError(f"color must be '#RRGGBB', got {s!r}") from exc


def _linearize(channel: int) -> float:
    s = channel / 255.0
    if s <= 0.04045:
        return s / 12.92
    return ((s + 0.055) / 1.055) ** 2.4


def relative_luminance(color: str) -> float:
    """Relative luminance of an '#RRGGBB' color from linearized sRGB."""
    r, g, b = parse_hex_color(color)
    return 0.2126 * _linearize(r) + 0.7152 * _linearize(g) + 0.0722 * _linearize(b)


def contrast_ratio(color_a: str, color_b: str) -> float:
    """Contrast ratio (L_lighter + 0.05) / (L_darker + 0.05), in [1, 21]."""
    la = relative_luminance(color_a)
    lb = relative_luminance(color_b)
    lighter, darker = (la, lb) if la >= lb else (lb, la)
    return (lighter + 0.05) / (darker + 0.05)
