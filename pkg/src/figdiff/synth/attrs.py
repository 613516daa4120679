"""Per-region appearance attributes for the figure renderer.

Nine semantic slots cover the whole image. ``background`` is slot 0 so the
segmentation label of a slot equals its index and silhouette extraction is
``segmap != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SLOTS = (
    "background",
    "head",
    "hair",
    "headwear",
    "top",
    "bottom",
    "outwear",
    "shoes",
    "bag",
)

SLOT_INDEX = {name: i for i, name in enumerate(SLOTS)}

ALWAYS_PRESENT = ("background", "head", "hair", "top", "bottom", "shoes")
OPTIONAL_SLOTS = ("headwear", "outwear", "bag")

# 8-bit palette entries; quantised so float->PNG->float round-trips exactly.
COLOR_RGB = {
    "red": (204, 37, 41),
    "green": (62, 150, 81),
    "blue": (57, 106, 177),
    "yellow": (222, 207, 63),
    "orange": (218, 124, 48),
    "purple": (107, 76, 154),
    "white": (238, 238, 238),
    "black": (32, 32, 32),
}

COLORS = tuple(COLOR_RGB)

PATTERNS = ("solid", "stripes", "dots", "checker")

# Patterns are only legible on the large garment regions; everything else is
# rendered solid so the oracle classifier stays unambiguous.
PATTERNED_SLOTS = ("top", "bottom", "outwear")

KINDS = {
    "background": ("backdrop",),
    "head": ("face",),
    "hair": ("short-hair", "long-hair", "bun-hair"),
    "headwear": ("cap", "beanie"),
    "top": ("t-shirt", "long-sleeve", "sleeveless-tank"),
    "bottom": ("short-pants", "long-pants", "skirt", "dress"),
    "outwear": ("jacket", "long-coat"),
    "shoes": ("sneakers", "boots"),
    "bag": ("handbag",),
}


class AttributeError_(ValueError):
    """An attribute record is inconsistent with the slot grammar."""


@dataclass
class SlotRecord:
    present: bool
    kind: str = ""
    color: str = ""
    pattern: str = "solid"


@dataclass
class FigureAttributes:
    """One SlotRecord per semantic slot, keyed by slot name."""

    slots: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in SLOTS:
            if name not in self.slots:
                self.slots[name] = SlotRecord(present=False)

    def __getitem__(self, slot: str) -> SlotRecord:
        return self.slots[slot]

    def present_slots(self) -> list[str]:
        return [s for s in SLOTS if self.slots[s].present]

    def validate(self) -> "FigureAttributes":
        for name in ALWAYS_PRESENT:
            if not self.slots[name].present:
                raise AttributeError_(f"slot {name} must be present")
        for name, rec in self.slots.items():
            if name not in SLOTS:
                raise AttributeError_(f"unknown slot {name}")
            if not rec.present:
                continue
            if rec.kind not in KINDS[name]:
                raise AttributeError_(f"slot {name}: unknown kind {rec.kind!r}")
            if rec.color not in COLOR_RGB:
                raise AttributeError_(f"slot {name}: unknown color {rec.color!r}")
            if rec.pattern not in PATTERNS:
                raise AttributeError_(f"slot {name}: unknown pattern {rec.pattern!r}")
            if rec.pattern != "solid" and name not in PATTERNED_SLOTS:
                raise AttributeError_(f"slot {name} only supports solid rendering")
        return self

    def to_dict(self) -> dict:
        return {
            name: {
                "present": rec.present,
                "kind": rec.kind,
                "color": rec.color,
                "pattern": rec.pattern,
            }
            for name, rec in self.slots.items()
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FigureAttributes":
        slots = {
            name: SlotRecord(
                present=bool(rec["present"]),
                kind=rec.get("kind", ""),
                color=rec.get("color", ""),
                pattern=rec.get("pattern", "solid"),
            )
            for name, rec in d.items()
        }
        return cls(slots=slots)


def color_float(name: str) -> np.ndarray:
    """Palette colour as float RGB in [0, 1] (exact multiples of 1/255)."""
    return np.array(COLOR_RGB[name], dtype=np.float64) / 255.0


def accent_color(base: str) -> str:
    """Second colour used to draw stripes/dots/checker over a base colour."""
    return "black" if base in ("white", "yellow") else "white"


def sample_attrs(rng: np.random.Generator) -> FigureAttributes:
    """Draw attributes with per-slot uniform marginals."""
    slots = {}
    for name in SLOTS:
        present = True if name in ALWAYS_PRESENT else bool(rng.random() < 0.5)
        if not present:
            slots[name] = SlotRecord(present=False)
            continue
        kind = str(rng.choice(KINDS[name]))
        color = str(rng.choice(COLORS))
        pattern = str(rng.choice(PATTERNS)) if name in PATTERNED_SLOTS else "solid"
        slots[name] = SlotRecord(present=True, kind=kind, color=color, pattern=pattern)
    return FigureAttributes(slots=slots)
