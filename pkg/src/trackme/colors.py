"""Deterministic per-track colors.

Every (label, id) key maps to one of 64 high-contrast palette entries so an
object keeps its color across frames and sessions. The label hashes to a
palette offset and consecutive IDs walk the palette cycle from there, which
keeps neighbouring IDs of the same label visually distinct. Keys without an
ID get a reserved gray that is not part of the palette.
"""

from __future__ import annotations

import colorsys
import zlib

from .model import TrackKey

PALETTE_SIZE = 64
UNASSIGNED_COLOR = (128, 128, 128)

# Golden-ratio hue steps with two saturation/value tiers give 64 distinct,
# high-contrast RGB triples; generated once, stable across runs.
_GOLDEN = 0.6180339887498949


def _build_palette() -> list[tuple[int, int, int]]:
    palette: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int, int]] = set()
    i = 0
    while len(palette) < PALETTE_SIZE:
        hue = (i * _GOLDEN) % 1.0
        sat = 0.95 if i % 2 == 0 else 0.60
        val = 1.0 if i % 4 < 2 else 0.75
        rgb = tuple(round(c * 255) for c in colorsys.hsv_to_rgb(hue, sat, val))
        if rgb not in seen and rgb != UNASSIGNED_COLOR:
            seen.add(rgb)
            palette.append(rgb)  # type: ignore[arg-type]
        i += 1
    return palette


PALETTE: list[tuple[int, int, int]] = _build_palette()


def palette_index(key: TrackKey) -> int:
    """Palette slot for a non-null key: label offset plus ID along the cycle."""
    if key.track_id is None:
        raise ValueError("null-ID keys use the reserved unassigned color")
    offset = zlib.crc32(key.label.encode("utf-8"))
    return (offset + key.track_id) % PALETTE_SIZE


def color_for_key(key: TrackKey) -> tuple[int, int, int]:
    """Stable RGB color for a track key; null IDs get the reserved gray."""
    if key.track_id is None:
        return UNASSIGNED_COLOR
    return PALETTE[palette_index(key)]


def hex_for_key(key: TrackKey) -> str:
    r, g, b = color_for_key(key)
    return f"#{r:02x}{g:02x}{b:02x}"
