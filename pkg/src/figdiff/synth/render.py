"""Deterministic 2D articulated-figure renderer with segmentation oracle.

The renderer is a pure function of (pose, attributes): forward kinematics
places the limbs, each garment/body part is a signed test on the pixel grid,
and patterns are evaluated in part-local coordinates so texture sticks to the
body under pose and camera changes. It doubles as the ground-truth oracle for
segmentation maps, silhouettes, region crops and placement masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attrs import SLOTS, SLOT_INDEX, FigureAttributes, accent_color, color_float
from .pose import ToyPose

DEFAULT_HEIGHT = 64
DEFAULT_WIDTH = 48

CROP_SIZE = 32

# Figure geometry in pixel units at zoom 1 (y up, origin at the pelvis).
TORSO_LEN = 10.0
TORSO_HW = 3.0        # torso capsule half-width (bare body)
GARMENT_HW = 3.45     # top garment half-width
NECK_LEN = 1.6
HEAD_R = 3.2
HIP_OFF = 1.9
UPPER_ARM = 5.5
FOREARM = 4.8
ARM_R = 1.2
SLEEVE_R = 1.55
THIGH = 7.0
SHIN = 6.3
LEG_R = 1.6
SHIN_R = 1.3
PANTS_R = 2.05


class RenderError(RuntimeError):
    """The figure rasterised to an empty silhouette (fully outside frame)."""


@dataclass
class RenderedSample:
    """A rendered figure plus its oracle annotations."""

    image: np.ndarray
    segmap: np.ndarray
    silhouette: np.ndarray
    pose: ToyPose
    attrs: FigureAttributes
    content_caption: str
    style_phrases: dict
    arm_mask: np.ndarray = field(default=None, repr=False)


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass
class _Part:
    slot: str
    color: np.ndarray
    mask_fn: object
    pattern: str = "solid"
    accent: np.ndarray = None
    local_fn: object = None


def _capsule(a, b, r):
    """Membership test for a thick segment from a to b with radius r."""
    a = np.asarray(a, dtype=np.float64)
    d = np.asarray(b, dtype=np.float64) - a

    def fn(P):
        ap = P - a
        denom = float(d @ d)
        if denom < 1e-12:
            t = np.zeros(P.shape[0])
        else:
            t = np.clip((ap @ d) / denom, 0.0, 1.0)
        closest = a[None, :] + t[:, None] * d[None, :]
        return np.sum((P - closest) ** 2, axis=1) <= r * r

    return fn


def _disc(c, r):
    c = np.asarray(c, dtype=np.float64)

    def fn(P):
        return np.sum((P - c) ** 2, axis=1) <= r * r

    return fn


def _ring_sector(c, r_in, r_out, up, half_angle):
    """Annulus slice around direction `up`, used for hair caps and hats."""
    c = np.asarray(c, dtype=np.float64)
    up = np.asarray(up, dtype=np.float64)
    up = up / np.linalg.norm(up)
    cos_lim = np.cos(half_angle)

    def fn(P):
        v = P - c
        d = np.sqrt(np.sum(v ** 2, axis=1))
        with np.errstate(invalid="ignore", divide="ignore"):
            cosang = np.where(d > 1e-9, (v @ up) / np.maximum(d, 1e-9), 1.0)
        return (d >= r_in) & (d <= r_out) & (cosang >= cos_lim)

    return fn


def _quad(p0, p1, p2, p3):
    """Convex quadrilateral via half-plane tests (counter-clockwise points)."""
    pts = [np.asarray(p, dtype=np.float64) for p in (p0, p1, p2, p3)]

    def fn(P):
        inside = np.ones(P.shape[0], dtype=bool)
        for i in range(4):
            a, b = pts[i], pts[(i + 1) % 4]
            e = b - a
            inside &= (P[:, 0] - a[0]) * e[1] - (P[:, 1] - a[1]) * e[0] <= 1e-9
        return inside

    return fn


def _local_frame(origin, theta):
    origin = np.asarray(origin, dtype=np.float64)
    rot = _rot(-theta)

    def fn(P):
        q = (P - origin) @ rot.T
        return q[:, 0], q[:, 1]

    return fn


def _pattern_mask(pattern, u, v):
    if pattern == "stripes":
        return np.floor(v / 2.2).astype(np.int64) % 2 == 1
    if pattern == "dots":
        cu = np.mod(u, 2.6) - 1.3
        cv = np.mod(v, 2.6) - 1.3
        return cu * cu + cv * cv <= 0.75 * 0.75
    if pattern == "checker":
        return (np.floor(u / 2.4) + np.floor(v / 2.4)).astype(np.int64) % 2 == 0
    return np.zeros_like(u, dtype=bool)


@dataclass
class _Skeleton:
    pelvis: np.ndarray
    chest: np.ndarray
    neck_top: np.ndarray
    head_c: np.ndarray
    head_up: np.ndarray
    head_theta: float
    torso_theta: float
    legs_theta: float
    shoulders: dict
    elbows: dict
    wrists: dict
    arm_dirs: dict
    hips: dict
    knees: dict
    ankles: dict
    sl: float
    sw: float
    st: float
    sh: float


def _skeleton(pose: ToyPose) -> _Skeleton:
    j = {name: pose.angle(name) for name in
         ("neck", "head", "shoulder_l", "shoulder_r", "elbow_l", "elbow_r",
          "hip_l", "hip_r", "knee_l", "knee_r", "torso_lean", "global_rot")}
    sl, sw, st, sh = [float(x) for x in pose.shape]

    g = j["global_rot"]
    torso_theta = g + j["torso_lean"]
    pelvis = np.zeros(2)

    up_t = _rot(torso_theta) @ np.array([0.0, 1.0])
    side_t = _rot(torso_theta) @ np.array([1.0, 0.0])
    chest = pelvis + TORSO_LEN * st * up_t
    neck_theta = torso_theta + j["neck"]
    neck_top = chest + NECK_LEN * (_rot(neck_theta) @ np.array([0.0, 1.0]))
    head_theta = neck_theta + j["head"]
    head_up = _rot(head_theta) @ np.array([0.0, 1.0])
    head_c = neck_top + 0.75 * HEAD_R * sh * head_up

    shoulders, elbows, wrists, arm_dirs = {}, {}, {}, {}
    for side, sgn in (("l", -1.0), ("r", 1.0)):
        s = chest + sgn * (TORSO_HW * sw + 0.4) * side_t
        a_sh = j[f"shoulder_{side}"]
        a_el = j[f"elbow_{side}"]
        ua_dir = _rot(torso_theta) @ np.array([sgn * np.sin(a_sh), -np.cos(a_sh)])
        fa_ang = a_sh + a_el
        fa_dir = _rot(torso_theta) @ np.array([sgn * np.sin(fa_ang), -np.cos(fa_ang)])
        e = s + UPPER_ARM * sl * ua_dir
        w = e + FOREARM * sl * fa_dir
        shoulders[side], elbows[side], wrists[side] = s, e, w
        arm_dirs[side] = (ua_dir, fa_dir)

    side_g = _rot(g) @ np.array([1.0, 0.0])
    hips, knees, ankles = {}, {}, {}
    for side, sgn in (("l", -1.0), ("r", 1.0)):
        h = pelvis + sgn * HIP_OFF * sw * side_g
        a_hip = j[f"hip_{side}"]
        a_kne = j[f"knee_{side}"]
        th_dir = _rot(g) @ np.array([sgn * np.sin(a_hip), -np.cos(a_hip)])
        sh_ang = a_hip + a_kne
        sh_dir = _rot(g) @ np.array([sgn * np.sin(sh_ang), -np.cos(sh_ang)])
        k = h + THIGH * sl * th_dir
        a = k + SHIN * sl * sh_dir
        hips[side], knees[side], ankles[side] = h, k, a

    return _Skeleton(pelvis, chest, neck_top, head_c, head_up, head_theta,
                     torso_theta, g, shoulders, elbows, wrists, arm_dirs,
                     hips, knees, ankles, sl, sw, st, sh)


def _build_parts(sk: _Skeleton, attrs: FigureAttributes) -> list:
    parts = []
    skin = color_float(attrs["head"].color)
    feature = color_float("white" if attrs["head"].color == "black" else "black")

    def clothed(slot):
        rec = attrs[slot]
        base = color_float(rec.color)
        acc = color_float(accent_color(rec.color))
        return rec, base, acc

    torso_frame = _local_frame(sk.pelvis, sk.torso_theta)
    legs_frame = _local_frame(sk.pelvis, sk.legs_theta)

    hair = attrs["hair"]
    hair_col = color_float(hair.color)
    if hair.present and hair.kind == "long-hair":
        for sgn in (-1.0, 1.0):
            a = sk.head_c + sgn * (HEAD_R * sk.sh * 0.85) * (_rot(sk.head_theta) @ np.array([1.0, 0.0]))
            b = a - 6.0 * (_rot(sk.torso_theta) @ np.array([0.0, 1.0]))
            parts.append(_Part("hair", hair_col, _capsule(a, b, 1.0)))

    # legs (skin under garments; bare-leg pixels count as the bottom slot)
    for side in ("l", "r"):
        parts.append(_Part("bottom", skin, _capsule(sk.hips[side], sk.knees[side], LEG_R * sk.sw)))
        parts.append(_Part("bottom", skin, _capsule(sk.knees[side], sk.ankles[side], SHIN_R * sk.sw)))
        parts.append(_Part("bottom", skin, _disc(sk.ankles[side] + np.array([0.0, -0.8]), 1.0 * sk.sw)))

    shoes = attrs["shoes"]
    if shoes.present:
        sc = color_float(shoes.color)
        for side, sgn in (("l", -1.0), ("r", 1.0)):
            a = sk.ankles[side] + np.array([0.0, -0.7])
            b = a + np.array([sgn * 1.9, 0.0])
            parts.append(_Part("shoes", sc, _capsule(a, b, 1.15 * sk.sw)))
            if shoes.kind == "boots":
                top = sk.ankles[side] + np.array([0.0, 2.2])
                parts.append(_Part("shoes", sc, _capsule(sk.ankles[side], top, 1.45 * sk.sw)))

    bottom, b_base, b_acc = clothed("bottom")
    if bottom.kind in ("short-pants", "long-pants"):
        for side in ("l", "r"):
            end = sk.knees[side] if bottom.kind == "short-pants" else sk.ankles[side]
            frame = _local_frame(sk.hips[side], np.arctan2(*(sk.knees[side] - sk.hips[side])[::-1]))
            parts.append(_Part("bottom", b_base, _capsule(sk.hips[side], end, PANTS_R * sk.sw),
                               bottom.pattern, b_acc, frame))
        waist = _capsule(sk.hips["l"], sk.hips["r"], 1.95 * sk.sw)
        parts.append(_Part("bottom", b_base, waist, bottom.pattern, b_acc, legs_frame))
    else:  # skirt or dress: flared trapezoid hanging in the leg frame
        rot = _rot(sk.legs_theta)
        w_top = HIP_OFF * sk.sw + 1.1
        w_bot = HIP_OFF * sk.sw + 2.8
        y_top, y_bot = 1.0, -(THIGH * sk.sl + 1.2)
        quad = _quad(sk.pelvis + rot @ np.array([-w_top, y_top]),
                     sk.pelvis + rot @ np.array([-w_bot, y_bot]),
                     sk.pelvis + rot @ np.array([w_bot, y_bot]),
                     sk.pelvis + rot @ np.array([w_top, y_top]))
        parts.append(_Part("bottom", b_base, quad, bottom.pattern, b_acc, legs_frame))

    top, t_base, t_acc = clothed("top")
    up_t = _rot(sk.torso_theta) @ np.array([0.0, 1.0])
    if top.kind == "sleeveless-tank":
        # narrower cut: shoulder caps stay skin-coloured
        for side in ("l", "r"):
            parts.append(_Part("top", skin, _disc(sk.shoulders[side], 1.25 * sk.sw)))
        body_fn = _capsule(sk.pelvis + 0.4 * up_t, sk.chest - 1.0 * up_t, (GARMENT_HW - 0.65) * sk.sw)
    else:
        body_fn = _capsule(sk.pelvis + 0.4 * up_t, sk.chest, GARMENT_HW * sk.sw)
    parts.append(_Part("top", t_base, body_fn, top.pattern, t_acc, torso_frame))

    if bottom.kind == "dress":
        bodice_top = sk.chest - 2.4 * up_t  # collar strip of the top stays visible
        bodice = _capsule(sk.pelvis + 0.2 * up_t, bodice_top, (GARMENT_HW + 0.1) * sk.sw)
        parts.append(_Part("bottom", b_base, bodice, bottom.pattern, b_acc, torso_frame))

    outwear = attrs["outwear"]
    if outwear.present:
        _, o_base, o_acc = clothed("outwear")
        rot = _rot(sk.torso_theta)
        lo_y = 1.0 if outwear.kind == "jacket" else -(0.55 * THIGH * sk.sl)
        for sgn in (-1.0, 1.0):
            x = sgn * (TORSO_HW * sk.sw - 0.9)
            a = sk.pelvis + rot @ np.array([x, lo_y])
            b = sk.pelvis + rot @ np.array([x, TORSO_LEN * sk.st - 0.5])
            parts.append(_Part("outwear", o_base, _capsule(a, b, 0.85 * sk.sw),
                               outwear.pattern, o_acc, torso_frame))

    # arms: skin first, sleeves over; all arm pixels belong to the top slot
    for side in ("l", "r"):
        parts.append(_Part("top", skin, _capsule(sk.shoulders[side], sk.elbows[side], ARM_R * sk.sw)))
        parts.append(_Part("top", skin, _capsule(sk.elbows[side], sk.wrists[side], ARM_R * sk.sw * 0.92)))
        parts.append(_Part("top", skin, _disc(sk.wrists[side], 1.05 * sk.sw)))
    if top.kind in ("t-shirt", "long-sleeve"):
        for side in ("l", "r"):
            ua_dir, fa_dir = sk.arm_dirs[side]
            s = sk.shoulders[side]
            frame = _local_frame(s, np.arctan2(ua_dir[1], ua_dir[0]))
            if top.kind == "t-shirt":
                end = s + 0.45 * UPPER_ARM * sk.sl * ua_dir
                parts.append(_Part("top", t_base, _capsule(s, end, SLEEVE_R * sk.sw),
                                   top.pattern, t_acc, frame))
            else:
                parts.append(_Part("top", t_base, _capsule(s, sk.elbows[side], SLEEVE_R * sk.sw),
                                   top.pattern, t_acc, frame))
                frame2 = _local_frame(sk.elbows[side], np.arctan2(fa_dir[1], fa_dir[0]))
                parts.append(_Part("top", t_base,
                                   _capsule(sk.elbows[side], sk.wrists[side], SLEEVE_R * sk.sw * 0.92),
                                   top.pattern, t_acc, frame2))

    parts.append(_Part("head", skin, _capsule(sk.chest, sk.neck_top, 0.9 * sk.sw)))
    parts.append(_Part("head", color_float(attrs["head"].color), _disc(sk.head_c, HEAD_R * sk.sh)))
    side_h = _rot(sk.head_theta) @ np.array([1.0, 0.0])
    for sgn in (-1.0, 1.0):
        eye = sk.head_c + sgn * 0.38 * HEAD_R * sk.sh * side_h + 0.18 * HEAD_R * sk.sh * sk.head_up
        parts.append(_Part("head", feature, _disc(eye, 0.5 * sk.sh)))
    m0 = sk.head_c - 0.45 * HEAD_R * sk.sh * sk.head_up - 0.3 * HEAD_R * sk.sh * side_h
    m1 = sk.head_c - 0.45 * HEAD_R * sk.sh * sk.head_up + 0.3 * HEAD_R * sk.sh * side_h
    parts.append(_Part("head", feature, _capsule(m0, m1, 0.3 * sk.sh)))

    if hair.present:
        r = HEAD_R * sk.sh
        parts.append(_Part("hair", hair_col, _ring_sector(sk.head_c, r - 0.4, r + 1.0, sk.head_up, np.deg2rad(95))))
        if hair.kind == "bun-hair":
            bun = sk.head_c + (r + 1.3) * sk.head_up
            parts.append(_Part("hair", hair_col, _disc(bun, 1.35 * sk.sh)))

    headwear = attrs["headwear"]
    if headwear.present:
        hw_col = color_float(headwear.color)
        r = HEAD_R * sk.sh
        if headwear.kind == "cap":
            parts.append(_Part("headwear", hw_col, _ring_sector(sk.head_c, r + 0.1, r + 1.8, sk.head_up, np.deg2rad(70))))
            b0 = sk.head_c + 0.55 * r * sk.head_up - (r + 1.9) * side_h
            b1 = sk.head_c + 0.55 * r * sk.head_up + (r + 1.9) * side_h
            parts.append(_Part("headwear", hw_col, _capsule(b0, b1, 0.55)))
        else:  # beanie: taller dome, no brim
            parts.append(_Part("headwear", hw_col, _ring_sector(sk.head_c, r - 0.2, r + 2.1, sk.head_up, np.deg2rad(85))))

    bag = attrs["bag"]
    if bag.present:
        bg_col = color_float(bag.color)
        pos = sk.hips["r"] + _rot(sk.legs_theta) @ np.array([2.1 * sk.sw + 1.3, -1.0])
        parts.append(_Part("bag", bg_col, _capsule(sk.shoulders["r"], pos, 0.35)))
        parts.append(_Part("bag", bg_col, _disc(pos, 1.9)))

    return parts


def _body_parts(sk: _Skeleton) -> list:
    """Bare-body geometry (no garments/hair/accessories), for placement masks."""
    fns = [_disc(sk.head_c, HEAD_R * sk.sh),
           _capsule(sk.chest, sk.neck_top, 0.9 * sk.sw),
           _capsule(sk.pelvis, sk.chest, TORSO_HW * sk.sw)]
    for side in ("l", "r"):
        fns.append(_capsule(sk.shoulders[side], sk.elbows[side], ARM_R * sk.sw))
        fns.append(_capsule(sk.elbows[side], sk.wrists[side], ARM_R * sk.sw * 0.92))
        fns.append(_disc(sk.wrists[side], 1.05 * sk.sw))
        fns.append(_capsule(sk.hips[side], sk.knees[side], LEG_R * sk.sw))
        fns.append(_capsule(sk.knees[side], sk.ankles[side], SHIN_R * sk.sw))
        fns.append(_disc(sk.ankles[side] + np.array([0.0, -0.8]), 1.0 * sk.sw))
    return fns


def _pixel_grid(pose: ToyPose, height: int, width: int) -> np.ndarray:
    """Body-frame coordinates of every pixel centre (translate-then-zoom camera)."""
    ys, xs = np.mgrid[0:height, 0:width]
    qx = xs + 0.5 - width / 2.0
    qy = ys + 0.5 - height / 2.0
    bx = qx / pose.zoom - pose.tx * width
    by = qy / pose.zoom - pose.ty * height
    P = np.stack([bx.ravel(), -by.ravel()], axis=1)  # flip y: image rows grow down
    return P


def render_arrays(pose: ToyPose, attrs: FigureAttributes, *, height: int = DEFAULT_HEIGHT,
                  width: int = DEFAULT_WIDTH, regions=None):
    """Rasterise to (image, segmap, arm_mask); `regions` limits drawn slots."""
    pose.validate()
    attrs.validate()
    sk = _skeleton(pose)
    P = _pixel_grid(pose, height, width)
    n = height * width

    image = np.zeros((n, 3), dtype=np.float64)
    segmap = np.zeros(n, dtype=np.uint8)
    if regions is None or "background" in regions:
        image[:] = color_float(attrs["background"].color)

    for part in _build_parts(sk, attrs):
        if regions is not None and part.slot not in regions:
            continue
        m = part.mask_fn(P)
        if not m.any():
            continue
        image[m] = part.color
        if part.pattern != "solid" and part.local_fn is not None:
            u, v = part.local_fn(P[m])
            pm = _pattern_mask(part.pattern, u, v)
            idx = np.flatnonzero(m)[pm]
            image[idx] = part.accent
        segmap[m] = SLOT_INDEX[part.slot]

    arm = np.zeros(n, dtype=bool)
    for side in ("l", "r"):
        arm |= _capsule(sk.shoulders[side], sk.elbows[side], SLEEVE_R * sk.sw)(P)
        arm |= _capsule(sk.elbows[side], sk.wrists[side], SLEEVE_R * sk.sw)(P)
        arm |= _disc(sk.wrists[side], 1.05 * sk.sw)(P)

    return (image.reshape(height, width, 3), segmap.reshape(height, width),
            arm.reshape(height, width))


def render(pose: ToyPose, attrs: FigureAttributes, *, height: int = DEFAULT_HEIGHT,
           width: int = DEFAULT_WIDTH) -> RenderedSample:
    """Render a full sample; identical inputs produce bit-identical outputs."""
    from .captions import caption, style_phrases as _phrases

    image, segmap, arm = render_arrays(pose, attrs, height=height, width=width)
    silhouette = segmap != 0
    if not silhouette.any():
        raise RenderError("figure rasterised to an empty silhouette")
    return RenderedSample(
        image=image, segmap=segmap, silhouette=silhouette, pose=pose, attrs=attrs,
        content_caption=caption(attrs, "content"), style_phrases=_phrases(attrs),
        arm_mask=arm,
    )


def render_body_mask(pose: ToyPose, *, height: int = DEFAULT_HEIGHT,
                     width: int = DEFAULT_WIDTH) -> np.ndarray:
    """Binary mask of the unclothed body, computed from the pose alone."""
    pose.validate()
    sk = _skeleton(pose)
    P = _pixel_grid(pose, height, width)
    m = np.zeros(height * width, dtype=bool)
    for fn in _body_parts(sk):
        m |= fn(P)
    return m.reshape(height, width)


def body_extent(pose: ToyPose) -> tuple:
    """Unclipped float bounding box (x0, y0, x1, y1) of the figure in body frame."""
    sk = _skeleton(pose)
    pts = [sk.pelvis, sk.chest, sk.neck_top, sk.head_c]
    pads = [3.0, 3.0, 2.0, HEAD_R * sk.sh + 3.2]
    for side in ("l", "r"):
        for p in (sk.shoulders[side], sk.elbows[side], sk.wrists[side]):
            pts.append(p)
            pads.append(2.2)
        for p in (sk.hips[side], sk.knees[side], sk.ankles[side]):
            pts.append(p)
            pads.append(3.4)
    arr = np.array(pts)
    pad = np.array(pads)
    return (float(np.min(arr[:, 0] - pad)), float(np.min(arr[:, 1] - pad)),
            float(np.max(arr[:, 0] + pad)), float(np.max(arr[:, 1] + pad)))


def crop_region(image: np.ndarray, segmap: np.ndarray, slot: str,
                size: int = CROP_SIZE) -> np.ndarray:
    """Masked square crop of one region, nearest-resized to `size`x`size`.

    Pixels outside the region are zeroed so the crop carries only the
    region's own colour and texture.
    """
    label = SLOT_INDEX[slot]
    mask = segmap == label
    if not mask.any():
        raise KeyError(f"region {slot} owns no pixels")
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    r0, r1 = int(rows[0]), int(rows[-1]) + 1
    c0, c1 = int(cols[0]), int(cols[-1]) + 1
    masked = np.where(mask[..., None], image, 0.0)

    side = max(r1 - r0, c1 - c0)
    out = np.zeros((side, side, 3), dtype=np.float64)
    pr = (side - (r1 - r0)) // 2
    pc = (side - (c1 - c0)) // 2
    out[pr:pr + (r1 - r0), pc:pc + (c1 - c0)] = masked[r0:r1, c0:c1]

    idx = np.minimum((np.arange(size) + 0.5) * side / size, side - 1).astype(np.int64)
    return out[idx][:, idx]
