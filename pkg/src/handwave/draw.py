"""Overlay rendering for annotated frames.

Primitives (Bresenham lines, midpoint circles, filled discs, progress
arcs) are rasterized directly into an RGB array with clipping, so a
rendered frame is a pure, deterministic function of the overlay data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .frame import Frame
from .topology import Point

CONTOUR_COLOR = (0, 255, 0)
HULL_COLOR = (0, 0, 255)
DEFECT_COLOR = (255, 0, 0)
FINGERTIP_COLOR = (0, 255, 0)
DWELL_RING_COLOR = (255, 255, 0)
DWELL_PROGRESS_COLOR = (0, 255, 0)

FINGERTIP_RADIUS = 4
DEFECT_POINT_RADIUS = 3


@dataclass(frozen=True)
class DefectMarker:
    start: Point
    end: Point
    farthest: Point


@dataclass(frozen=True)
class AnnotatedFrame:
    """A frame plus the overlay primitives detection produced for it."""

    frame: Frame
    contour: tuple[Point, ...] = ()
    hull: tuple[Point, ...] = ()
    defects: tuple[DefectMarker, ...] = ()
    fingertip: Optional[Point] = None
    dwell_center: Optional[Point] = None
    dwell_radius: float = 0.0
    dwell_progress: float = 0.0


def _put(img: np.ndarray, x: int, y: int, color: tuple[int, int, int]) -> None:
    if 0 <= x < img.shape[1] and 0 <= y < img.shape[0]:
        img[y, x] = color


def draw_line(
    img: np.ndarray, a: Point, b: Point, color: tuple[int, int, int]
) -> None:
    x0, y0, x1, y1 = a.x, a.y, b.x, b.y
    dx = abs(x1 - x0)
    sx = 1 if x0 < x1 else -1
    dy = -abs(y1 - y0)
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        _put(img, x0, y0, color)
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def draw_polyline(
    img: np.ndarray,
    points: Sequence[Point],
    color: tuple[int, int, int],
    closed: bool = True,
) -> None:
    if not points:
        return
    if len(points) == 1:
        _put(img, points[0].x, points[0].y, color)
        return
    for i in range(len(points) - 1):
        draw_line(img, points[i], points[i + 1], color)
    if closed:
        draw_line(img, points[-1], points[0], color)


def draw_circle(
    img: np.ndarray, center: Point, radius: float, color: tuple[int, int, int]
) -> None:
    r = int(round(radius))
    if r <= 0:
        _put(img, center.x, center.y, color)
        return
    cx, cy = center.x, center.y
    x, y, err = r, 0, 1 - r
    while x >= y:
        for px, py in (
            (cx + x, cy + y),
            (cx - x, cy + y),
            (cx + x, cy - y),
            (cx - x, cy - y),
            (cx + y, cy + x),
            (cx - y, cy + x),
            (cx + y, cy - x),
            (cx - y, cy - x),
        ):
            _put(img, px, py, color)
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1


def draw_disc(
    img: np.ndarray, center: Point, radius: int, color: tuple[int, int, int]
) -> None:
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            if dx * dx + dy * dy <= radius * radius:
                _put(img, center.x + dx, center.y + dy, color)


def draw_arc(
    img: np.ndarray,
    center: Point,
    radius: float,
    fraction: float,
    color: tuple[int, int, int],
) -> None:
    """Clockwise arc from the top of the circle covering `fraction` of a turn."""
    fraction = min(max(fraction, 0.0), 1.0)
    if fraction == 0.0 or radius <= 0:
        return
    steps = max(2, int(math.ceil(2 * math.pi * radius * fraction)) + 1)
    span = 2 * math.pi * fraction
    for i in range(steps):
        theta = -math.pi / 2 + span * i / (steps - 1)
        x = int(round(center.x + radius * math.cos(theta)))
        y = int(round(center.y + radius * math.sin(theta)))
        _put(img, x, y, color)


def render(annotated: AnnotatedFrame) -> Frame:
    """Rasterize the overlay onto a copy of the base frame."""
    img = annotated.frame.pixels.copy()
    if annotated.contour:
        draw_polyline(img, annotated.contour, CONTOUR_COLOR)
    if annotated.hull:
        draw_polyline(img, annotated.hull, HULL_COLOR)
    for marker in annotated.defects:
        draw_line(img, marker.start, marker.farthest, DEFECT_COLOR)
        draw_line(img, marker.end, marker.farthest, DEFECT_COLOR)
        draw_disc(img, marker.farthest, DEFECT_POINT_RADIUS, DEFECT_COLOR)
    if annotated.dwell_center is not None and annotated.dwell_radius > 0:
        draw_circle(img, annotated.dwell_center, annotated.dwell_radius, DWELL_RING_COLOR)
        draw_arc(
            img,
            annotated.dwell_center,
            annotated.dwell_radius,
            annotated.dwell_progress,
            DWELL_PROGRESS_COLOR,
        )
    if annotated.fingertip is not None:
        draw_disc(img, annotated.fingertip, FINGERTIP_RADIUS, FINGERTIP_COLOR)
    return Frame.from_array(img)
