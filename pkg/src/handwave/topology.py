"""Blob topology: components, outer contours, hulls, convexity defects.

Coordinates are image coordinates: x grows rightward, y grows downward,
origin at the top left. "Clockwise" below always means clockwise as seen
on screen under that convention.

Hull and defect geometry is computed with exact integer arithmetic (cross
products, squared distances compared via cross multiplication), so vertex
and farthest-point selection never depends on floating-point rounding;
only the final reported depth is a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import ndimage

from .errors import EmptyContour, TooFewPoints
from .frame import BinaryMask
from .segmentation import DEFAULT_MIN_BLOB_AREA_FRACTION

DEFAULT_LARGE_DEFECT_K = 0.2
DEFECT_DEPTH_CAP_FRACTION = 0.9

# Moore neighborhood in clockwise screen order starting north; (dx, dy).
_OFFSETS = ((0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1))
_DIR_INDEX = {off: i for i, off in enumerate(_OFFSETS)}


@dataclass(frozen=True, order=True)
class Point:
    """Integer pixel position."""

    x: int
    y: int


class BBox(NamedTuple):
    min_x: int
    min_y: int
    max_x: int
    max_y: int

    @property
    def x_extent(self) -> int:
        return self.max_x - self.min_x

    @property
    def y_extent(self) -> int:
        return self.max_y - self.min_y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.x_extent, self.y_extent)


@dataclass(frozen=True)
class Blob:
    """One connected foreground region of a mask."""

    label: int
    area: int
    labels: np.ndarray = field(repr=False, compare=False)

    @property
    def mask(self) -> np.ndarray:
        return self.labels == self.label


@dataclass(frozen=True)
class Contour:
    """Closed boundary walk of a blob, clockwise, 8-connected steps.

    Thin structures make the walk double back over pixels, so points may
    repeat; area is the shoelace area of the walk polygon.
    """

    points: tuple[Point, ...]
    area: float
    bbox: BBox

    @classmethod
    def from_points(cls, points: Sequence[Point]) -> "Contour":
        if not points:
            raise EmptyContour("contour needs at least one point")
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        twice_area = 0
        n = len(points)
        for i in range(n):
            j = (i + 1) % n
            twice_area += xs[i] * ys[j] - xs[j] * ys[i]
        return cls(
            points=tuple(points),
            area=abs(twice_area) / 2.0,
            bbox=BBox(min(xs), min(ys), max(xs), max(ys)),
        )

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        out = np.empty((len(self.points), 2), dtype=np.int64)
        for i, p in enumerate(self.points):
            out[i, 0] = p.x
            out[i, 1] = p.y
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class Hull:
    """Indices of the strictly convex hull vertices, clockwise on screen."""

    indices: tuple[int, ...]


@dataclass(frozen=True)
class ConvexityDefect:
    """Deepest contour excursion between two consecutive hull vertices."""

    start_index: int
    end_index: int
    farthest_index: int
    depth: float


def connected_components(mask: BinaryMask, connectivity: int = 8) -> list[Blob]:
    """Maximal foreground regions, labeled 1..k in row-major first-encounter order."""
    if connectivity == 8:
        structure = np.ones((3, 3), dtype=bool)
    elif connectivity == 4:
        structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    raw, count = ndimage.label(mask.pixels, structure=structure)
    if count == 0:
        return []
    flat = raw.ravel()
    # reorder labels by first appearance so numbering is scan-order deterministic
    first = np.full(count + 1, flat.size, dtype=np.int64)
    nonzero = np.flatnonzero(flat)
    np.minimum.at(first, flat[nonzero], nonzero)
    order = np.argsort(first[1:], kind="stable") + 1
    remap = np.zeros(count + 1, dtype=raw.dtype)
    remap[order] = np.arange(1, count + 1)
    labels = remap[raw]
    labels.setflags(write=False)
    areas = np.bincount(labels.ravel(), minlength=count + 1)
    return [Blob(label=i, area=int(areas[i]), labels=labels) for i in range(1, count + 1)]


def _trace_boundary(region: np.ndarray, start: tuple[int, int]) -> list[Point]:
    """Moore-neighbor walk around one blob, clockwise from its top-left pixel.

    The walk state is (pixel, backtrack pixel); stepping from a repeated
    state would retrace the cycle, so the walk stops there and keeps the
    cycle part. Stopping on the repeat of the initial state is the classic
    border-following criterion; accepting any repeated state also closes
    shapes (thin diagonals, dominoes) the classic rule loops on.
    """
    height, width = region.shape

    def fg(x: int, y: int) -> bool:
        return 0 <= x < width and 0 <= y < height and bool(region[y, x])

    sx, sy = start
    pos = (sx, sy)
    back = (sx - 1, sy)
    seen: dict[tuple[tuple[int, int], tuple[int, int]], int] = {}
    walk: list[tuple[int, int]] = []
    while (pos, back) not in seen:
        seen[(pos, back)] = len(walk)
        walk.append(pos)
        b_dir = _DIR_INDEX[(back[0] - pos[0], back[1] - pos[1])]
        nxt: Optional[tuple[int, int]] = None
        prev = back
        for step in range(1, 9):
            d = _OFFSETS[(b_dir + step) % 8]
            cand = (pos[0] + d[0], pos[1] + d[1])
            if fg(*cand):
                nxt = cand
                break
            prev = cand
        if nxt is None:
            return [Point(*pos)]
        pos, back = nxt, prev
    cycle = walk[seen[(pos, back)] :]
    # start the cycle at its topmost-then-leftmost pixel
    pivot = min(range(len(cycle)), key=lambda i: (cycle[i][1], cycle[i][0]))
    cycle = cycle[pivot:] + cycle[:pivot]
    return [Point(x, y) for x, y in cycle]


def extract_contours(mask: BinaryMask) -> list[Contour]:
    """One clockwise outer contour per blob; holes are ignored."""
    contours = []
    for blob in connected_components(mask, connectivity=8):
        region = blob.mask
        flat_index = int(np.argmax(region))
        sy, sx = divmod(flat_index, region.shape[1])
        contours.append(Contour.from_points(_trace_boundary(region, (sx, sy))))
    return contours


def largest_contour(
    contours: Sequence[Contour], min_area: float
) -> Optional[Contour]:
    """Biggest contour by area if it reaches min_area; ties keep the earliest."""
    best: Optional[Contour] = None
    for c in contours:
        if best is None or c.area > best.area:
            best = c
    if best is None or best.area < min_area:
        return None
    return best


def _cross(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(contour: Contour) -> Hull:
    """Strictly convex hull of the contour, clockwise on screen.

    Monotone chain over the distinct points; each hull vertex maps to its
    first occurrence in the contour, and the cycle starts at the smallest
    contour index.
    """
    if not contour.points:
        raise EmptyContour("cannot hull an empty contour")
    first_index: dict[tuple[int, int], int] = {}
    for i, p in enumerate(contour.points):
        first_index.setdefault((p.x, p.y), i)
    pts = sorted(first_index)
    if len(pts) == 1:
        return Hull(indices=(first_index[pts[0]],))
    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]
    indices = [first_index[p] for p in ring]
    pivot = indices.index(min(indices))
    return Hull(indices=tuple(indices[pivot:] + indices[:pivot]))


def _segment_distance_sq(
    a: tuple[int, int], b: tuple[int, int], p: tuple[int, int]
) -> tuple[int, int]:
    """Squared point-to-segment distance as an exact integer ratio (num, den)."""
    abx, aby = b[0] - a[0], b[1] - a[1]
    apx, apy = p[0] - a[0], p[1] - a[1]
    seg_len_sq = abx * abx + aby * aby
    if seg_len_sq == 0:
        return apx * apx + apy * apy, 1
    proj = apx * abx + apy * aby
    if proj <= 0:
        return apx * apx + apy * apy, 1
    if proj >= seg_len_sq:
        bpx, bpy = p[0] - b[0], p[1] - b[1]
        return bpx * bpx + bpy * bpy, 1
    cross = abx * apy - aby * apx
    return cross * cross, seg_len_sq


def convexity_defects(contour: Contour, hull: Hull) -> list[ConvexityDefect]:
    """Deepest contour point between each pair of consecutive hull vertices.

    Emitted only when some arc point sits strictly off the hull segment;
    farthest-point ties keep the lowest contour index.
    """
    n = len(contour.points)
    if n < 3:
        raise TooFewPoints(f"need at least 3 contour points, got {n}")
    h = len(hull.indices)
    if h < 2:
        return []
    pts = [(p.x, p.y) for p in contour.points]
    defects = []
    for k in range(h):
        ia = hull.indices[k]
        ib = hull.indices[(k + 1) % h]
        if ia == ib:
            continue
        a, b = pts[ia], pts[ib]
        best_j = -1
        best_num, best_den = 0, 1
        j = (ia + 1) % n
        while j != ib:
            num, den = _segment_distance_sq(a, b, pts[j])
            if num * best_den > best_num * den:
                best_j, best_num, best_den = j, num, den
            j = (j + 1) % n
        if best_j >= 0 and best_num > 0:
            defects.append(
                ConvexityDefect(
                    start_index=ia,
                    end_index=ib,
                    farthest_index=best_j,
                    depth=math.sqrt(best_num / best_den),
                )
            )
    return defects


def is_hand(
    contour: Contour,
    defects: Sequence[ConvexityDefect],
    frame_width: int,
    frame_height: int,
    *,
    min_area: Optional[float] = None,
    max_blob_area_fraction: float = 0.6,
    large_defect_k: float = DEFAULT_LARGE_DEFECT_K,
    depth_cap_fraction: float = DEFECT_DEPTH_CAP_FRACTION,
) -> tuple[bool, float]:
    """Structural plausibility test: size band, finger-gap count, depth cap.

    Returns (verdict, score) where score is the fraction of criteria met:
    (a) contour area inside [min_area, max_blob_area_fraction * frame area],
    (b) between 1 and 4 defects at least large_defect_floor deep,
    (c) no such defect deeper than depth_cap_fraction of the bbox diagonal.
    """
    from .gesture import large_defects

    if min_area is None:
        min_area = round(DEFAULT_MIN_BLOB_AREA_FRACTION * frame_width * frame_height)
    large = large_defects(defects, contour.bbox, large_defect_k)
    cap = depth_cap_fraction * contour.bbox.diagonal
    met = 0
    if min_area <= contour.area <= max_blob_area_fraction * frame_width * frame_height:
        met += 1
    if 1 <= len(large) <= 4:
        met += 1
    if all(d.depth <= cap for d in large):
        met += 1
    return met == 3, met / 3.0
