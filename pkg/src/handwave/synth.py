"""Procedural hand silhouettes: deterministic fixtures and demo streams.

A silhouette is a filled palm disc plus parallel finger capsules planted
across the palm's leading edge, pointing in one of the four cardinal
directions. The outermost finger edges run tangent to the palm circle, so
the only concavities are the slots between adjacent fingers: deep, while the
dips where fingers meet the palm stay negligible. The renderer is pure
geometry, so test fixtures carry constructed ground truth (finger count and
orientation) and frame streams replay identically for a given spec string.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .errors import SourceNotFound
from .frame import Frame, GrayFrame

DIRECTIONS = {
    "up": (0.0, -1.0),
    "down": (0.0, 1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
}

# Default geometry as fractions of min(width, height), except FINGER_BASE_FRAC
# which scales the palm radius. Spine starts sit inside the palm circle so
# every finger stays attached.
PALM_RADIUS_FRAC = 0.15
FINGER_LENGTH_FRAC = 0.30
FINGER_WIDTH_FRAC = 0.05
FINGER_BASE_FRAC = 0.3  # capsule start along the axis, as a fraction of palm radius
FINGER_DOME_FRAC = 0.15  # length drop at the outermost fingers, middle longest
CENTER_SHIFT_FRAC = 0.10  # palm center offset against the pointing direction

HAND_RGB = (205, 165, 130)
BACKGROUND_RGB = (30, 30, 30)


def _capsule_field(xs: np.ndarray, ys: np.ndarray, a: tuple[float, float],
                   b: tuple[float, float], radius: float) -> np.ndarray:
    """Boolean field of points within ``radius`` of segment a-b."""
    ax, ay = a
    vx, vy = b[0] - ax, b[1] - ay
    vv = vx * vx + vy * vy
    px, py = xs - ax, ys - ay
    if vv == 0.0:
        d2 = px * px + py * py
    else:
        t = np.clip((px * vx + py * vy) / vv, 0.0, 1.0)
        dx, dy = px - t * vx, py - t * vy
        d2 = dx * dx + dy * dy
    return d2 <= radius * radius


def hand_silhouette(
    width: int,
    height: int,
    fingers: int,
    direction: str = "up",
    *,
    center: tuple[float, float] | None = None,
    palm_radius: float | None = None,
    finger_length: float | None = None,
    finger_width: float | None = None,
) -> np.ndarray:
    """Render a boolean hand mask with ``fingers`` extended digits (0..5)."""
    if not 0 <= fingers <= 5:
        raise ValueError(f"fingers must be in 0..5, got {fingers}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    s = min(width, height)
    dx, dy = DIRECTIONS[direction]
    r = palm_radius if palm_radius is not None else PALM_RADIUS_FRAC * s
    length = finger_length if finger_length is not None else FINGER_LENGTH_FRAC * s
    fw = finger_width if finger_width is not None else FINGER_WIDTH_FRAC * s
    if center is None:
        cx = width / 2.0 - dx * CENTER_SHIFT_FRAC * s
        cy = height / 2.0 - dy * CENTER_SHIFT_FRAC * s
    else:
        cx, cy = center

    ys, xs = np.mgrid[0:height, 0:width]
    xs = xs.astype(np.float64)
    ys = ys.astype(np.float64)
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r

    # Spines run parallel to the pointing axis; lateral seats spread evenly
    # with the outer capsule edges tangent to the palm circle. Lengths follow
    # a dome profile (middle longest) so the fingertips sit on a convex arc
    # and every slot between neighbours spans its own hull edge.
    nx, ny = -dy, dx
    half_span = r - fw / 2.0
    if fingers > 1:
        seats = [-half_span + i * (2.0 * half_span / (fingers - 1)) for i in range(fingers)]
        spreads = [2.0 * i / (fingers - 1) - 1.0 for i in range(fingers)]
    else:
        seats = [0.0] * fingers
        spreads = [0.0] * fingers
    base = FINGER_BASE_FRAC * r
    for seat, spread in zip(seats, spreads):
        reach = length * (1.0 - FINGER_DOME_FRAC * spread * spread)
        sx, sy = cx + nx * seat, cy + ny * seat
        a = (sx + dx * base, sy + dy * base)
        b = (sx + dx * (base + reach), sy + dy * (base + reach))
        mask |= _capsule_field(xs, ys, a, b, fw / 2.0)
    return mask


def hand_gray(
    width: int,
    height: int,
    fingers: int,
    direction: str = "up",
    *,
    foreground: int = 200,
    background: int = 30,
    **geometry,
) -> GrayFrame:
    mask = hand_silhouette(width, height, fingers, direction, **geometry)
    a = np.where(mask, np.uint8(foreground), np.uint8(background)).astype(np.uint8)
    return GrayFrame.from_array(a)


def hand_frame(
    width: int,
    height: int,
    fingers: int,
    direction: str = "up",
    *,
    foreground: tuple[int, int, int] = HAND_RGB,
    background: tuple[int, int, int] = BACKGROUND_RGB,
    **geometry,
) -> Frame:
    mask = hand_silhouette(width, height, fingers, direction, **geometry)
    a = np.empty((height, width, 3), dtype=np.uint8)
    a[:, :] = background
    a[mask] = foreground
    return Frame.from_array(a)


def _parse_spec(spec: str) -> dict:
    opts = {
        "fingers": 3,
        "direction": "up",
        "width": 640,
        "height": 480,
        "frames": 0,  # 0 = endless
        "motion": "static",
    }
    if spec:
        for item in spec.split(","):
            if not item:
                continue
            key, sep, value = item.partition("=")
            if not sep or key not in opts:
                raise SourceNotFound(f"bad synthetic source option {item!r}")
            if key in ("direction", "motion"):
                opts[key] = value
            else:
                try:
                    opts[key] = int(value)
                except ValueError:
                    raise SourceNotFound(f"bad synthetic source option {item!r}") from None
    if opts["direction"] not in DIRECTIONS:
        raise SourceNotFound(f"bad synthetic direction {opts['direction']!r}")
    if opts["motion"] not in ("static", "sweep", "dwell"):
        raise SourceNotFound(f"bad synthetic motion {opts['motion']!r}")
    if not 0 <= opts["fingers"] <= 5:
        raise SourceNotFound("synthetic fingers must be in 0..5")
    return opts


def _motion_offset(motion: str, i: int, width: int) -> float:
    amp = 0.15 * width
    if motion == "static":
        return 0.0
    if motion == "sweep":
        return amp * math.sin(2.0 * math.pi * i / 120.0)
    # dwell: glide right for 60 frames, hold still for 90, repeat
    phase = i % 150
    return -amp + min(phase, 60) * (amp / 60.0)


def iter_synthetic(spec: str):
    """Frame stream for a ``synth:`` descriptor.

    Spec is a comma-separated key=value list; keys: fingers, direction,
    width, height, frames (0 = endless), motion (static|sweep|dwell).
    """
    from .sources import TaggedFrame

    opts = _parse_spec(spec)
    w, h = opts["width"], opts["height"]
    s = min(w, h)
    dx, dy = DIRECTIONS[opts["direction"]]
    base_cx = w / 2.0 - dx * CENTER_SHIFT_FRAC * s
    base_cy = h / 2.0 - dy * CENTER_SHIFT_FRAC * s

    def frames() -> Iterator[TaggedFrame]:
        i = 0
        while opts["frames"] == 0 or i < opts["frames"]:
            cx = base_cx + _motion_offset(opts["motion"], i, w)
            frame = hand_frame(
                w, h, opts["fingers"], opts["direction"], center=(cx, base_cy)
            )
            yield TaggedFrame(i, frame)
            i += 1

    return frames()
