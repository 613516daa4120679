"""Templated captions over figure attributes, plus the exact inverse parser.

Two caption modes mirror the content/style split of the conditioning:
content covers clothing kinds only (never colours or patterns), style is a
"<color> <pattern> <kind>" phrase per region. The grammar is a fixed
template over a closed vocabulary; `parse_content`/`parse_style` recover the
attributes exactly.
"""

from __future__ import annotations

from .attrs import COLORS, KINDS, PATTERNS, SLOTS, FigureAttributes

# Bottom kinds read as noun phrases in the content sentence.
_BOTTOM_TEXT = {
    "short-pants": "short pants",
    "long-pants": "long pants",
    "skirt": "a skirt",
    "dress": "a dress",
}
_BOTTOM_FROM_TEXT = {v: k for k, v in _BOTTOM_TEXT.items()}

_OUTWEAR_TEXT = {"jacket": "a jacket", "long-coat": "a long coat"}
_OUTWEAR_FROM_TEXT = {v: k for k, v in _OUTWEAR_TEXT.items()}

_HEADWEAR_TEXT = {"cap": "a cap", "beanie": "a beanie"}
_HEADWEAR_FROM_TEXT = {v: k for k, v in _HEADWEAR_TEXT.items()}


class CaptionError(KeyError):
    """Style caption requested for an absent region."""


def caption(attrs: FigureAttributes, mode: str, region: str | None = None) -> str:
    """Emit the content sentence or one region's style phrase."""
    if mode == "content":
        return content_caption(attrs)
    if mode == "style":
        if region is None:
            raise ValueError("style mode requires a region")
        return style_phrase(attrs, region)
    raise ValueError(f"unknown caption mode {mode!r}")


def content_caption(attrs: FigureAttributes) -> str:
    """Clothing-kind sentence; optional regions appear only when present."""
    parts = [f"a figure wearing a {attrs['top'].kind} top and {_BOTTOM_TEXT[attrs['bottom'].kind]}"]
    if attrs["headwear"].present:
        parts.append(_HEADWEAR_TEXT[attrs["headwear"].kind])
    if attrs["outwear"].present:
        parts.append(_OUTWEAR_TEXT[attrs["outwear"].kind])
    if attrs["bag"].present:
        parts.append("a bag")
    return ", ".join(parts)


def style_phrase(attrs: FigureAttributes, region: str) -> str:
    rec = attrs[region]
    if not rec.present:
        raise CaptionError(f"region {region} is absent")
    return f"{rec.color} {rec.pattern} {rec.kind}"


def style_phrases(attrs: FigureAttributes) -> dict:
    """Phrase map for every present region."""
    return {s: style_phrase(attrs, s) for s in SLOTS if attrs[s].present}


def parse_content(text: str) -> dict:
    """Recover clothing kinds and optional-region presence from a content sentence."""
    parts = text.split(", ")
    head = parts[0]
    prefix = "a figure wearing a "
    if not head.startswith(prefix) or " top and " not in head:
        raise ValueError(f"not a content caption: {text!r}")
    top_kind, bottom_text = head[len(prefix):].split(" top and ", 1)
    if top_kind not in KINDS["top"]:
        raise ValueError(f"unknown top kind {top_kind!r}")
    if bottom_text not in _BOTTOM_FROM_TEXT:
        raise ValueError(f"unknown bottom phrase {bottom_text!r}")
    out = {
        "top": top_kind,
        "bottom": _BOTTOM_FROM_TEXT[bottom_text],
        "headwear": None,
        "outwear": None,
        "bag": False,
    }
    for clause in parts[1:]:
        if clause in _HEADWEAR_FROM_TEXT:
            out["headwear"] = _HEADWEAR_FROM_TEXT[clause]
        elif clause in _OUTWEAR_FROM_TEXT:
            out["outwear"] = _OUTWEAR_FROM_TEXT[clause]
        elif clause == "a bag":
            out["bag"] = True
        else:
            raise ValueError(f"unknown clause {clause!r}")
    return out


def parse_style(phrase: str) -> tuple:
    """Recover (color, pattern, kind) from a style phrase."""
    toks = phrase.split()
    if len(toks) != 3:
        raise ValueError(f"style phrase must be three tokens: {phrase!r}")
    color, pattern, kind = toks
    if color not in COLORS:
        raise ValueError(f"unknown color {color!r}")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    if not any(kind in ks for ks in KINDS.values()):
        raise ValueError(f"unknown kind {kind!r}")
    return color, pattern, kind


def build_vocabulary() -> list:
    """Closed token list covering every caption the templates can emit."""
    tokens = set()
    tokens.update(COLORS)
    tokens.update(PATTERNS)
    for kinds in KINDS.values():
        tokens.update(kinds)
    tokens.update("a figure wearing top and".split())
    tokens.update("short long pants skirt dress".split())
    tokens.update("cap beanie jacket coat bag".split())
    # strip trailing commas at tokenisation time instead of storing variants
    return sorted(tokens)
