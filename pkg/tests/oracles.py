"""Independent reference routes the test suite checks the package against.

Everything here is deliberately brute force and shares no code with the
package: thresholds by exhaustive scan, hulls by half-plane tests, defect
depths by literal point-to-segment projection, dwell clicks by a direct
transliteration of the tracker rules. Exact comparisons use Fraction so a
mathematical tie in the oracle is a tie, not a rounding accident.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np


def _class_scatter(n: int, s: int, q: int) -> Fraction:
    """Exact sum of c_i * (i - mean)^2 from the class moments n, s, q."""
    mean = Fraction(s, n)
    return q - 2 * mean * s + mean * mean * n


def otsu_oracle(counts: Sequence[int]) -> Optional[int]:
    """Exhaustive argmin of within-class variance; lowest t wins ties.

    Scatter around each class mean is evaluated exactly from running
    moments. Returns None when no split leaves both classes nonempty.
    """
    n = len(counts)
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    total_q = sum(i * i * c for i, c in enumerate(counts))
    best_t = None
    best = None
    n0 = s0 = q0 = 0
    for t in range(n - 1):
        n0 += counts[t]
        s0 += t * counts[t]
        q0 += t * t * counts[t]
        n1 = total_n - n0
        if n0 == 0 or n1 == 0:
            continue
        within = _class_scatter(n0, s0, q0) + _class_scatter(
            n1, total_s - s0, total_q - q0
        )
        if best is None or within < best:
            best = within
            best_t = t
    return best_t


def hull_vertex_oracle(points: Sequence[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """Corner set of the convex hull by the O(n^3) half-plane test.

    p is a corner iff some line through p and another point q keeps every
    point on one side, with all collinear points on the p->q ray (so an
    edge-interior point, which has hull points behind it, never qualifies).
    """
    pts = np.unique(np.asarray(sorted(set(points)), dtype=np.int64), axis=0)
    if len(pts) == 1:
        return frozenset({(int(pts[0, 0]), int(pts[0, 1]))})
    vertices = set()
    for i in range(len(pts)):
        p = pts[i]
        rel = pts - p
        # Row q of C/D holds cross/dot of every point against direction p->q.
        C = np.outer(rel[:, 0], rel[:, 1]) - np.outer(rel[:, 1], rel[:, 0])
        D = np.outer(rel[:, 0], rel[:, 0]) + np.outer(rel[:, 1], rel[:, 1])
        one_side = np.all(C <= 0, axis=1) | np.all(C >= 0, axis=1)
        ray_ok = np.all(np.where(C == 0, D >= 0, True), axis=1)
        candidate_q = (rel != 0).any(axis=1)
        if np.any(candidate_q & one_side & ray_ok):
            vertices.add((int(p[0]), int(p[1])))
    return frozenset(vertices)


def _segment_distance_exact(
    p: tuple[int, int], a: tuple[int, int], b: tuple[int, int]
) -> Fraction:
    """Squared distance from p to segment a-b via projection, as a Fraction."""
    apx, apy = p[0] - a[0], p[1] - a[1]
    abx, aby = b[0] - a[0], b[1] - a[1]
    ab2 = abx * abx + aby * aby
    if ab2 == 0:
        return Fraction(apx * apx + apy * apy)
    t = Fraction(apx * abx + apy * aby, ab2)
    if t < 0:
        t = Fraction(0)
    elif t > 1:
        t = Fraction(1)
    dx = Fraction(apx) - t * abx
    dy = Fraction(apy) - t * aby
    return dx * dx + dy * dy


def defect_oracle(
    points: Sequence[tuple[int, int]], hull_indices: Sequence[int]
) -> list[tuple[int, int, int, float]]:
    """Brute-force defects: (start, end, farthest, depth) per hull edge.

    For each consecutive hull index pair, scans every contour point strictly
    between them in cyclic order, keeps the exact max squared distance to the
    chord (lowest index on ties), and emits the pair only when that max is
    positive. Depth is the float square root of the exact ratio.
    """
    n = len(points)
    h = len(hull_indices)
    out = []
    for k in range(h):
        ia = hull_indices[k]
        ib = hull_indices[(k + 1) % h]
        a = points[ia]
        b = points[ib]
        best: Optional[Fraction] = None
        best_i = -1
        i = (ia + 1) % n
        while i != ib:
            d2 = _segment_distance_exact(points[i], a, b)
            if best is None or d2 > best:
                best = d2
                best_i = i
            i = (i + 1) % n
        if best is not None and best > 0:
            out.append((ia, ib, best_i, math.sqrt(float(best))))
    return out


def dwell_reference(
    tips: Sequence[Optional[tuple[float, float]]],
    dwell_frames: int,
    radius: float,
    miss_limit: int,
) -> tuple[list[tuple[int, tuple[float, float]]], list[tuple]]:
    """Literal dwell-click interpreter.

    Returns (clicks, trace): clicks as (step, position) pairs, trace as the
    (center, counter, anti_counter) triple after every update.
    """
    center: Optional[tuple[float, float]] = None
    counter = 0
    anti = 0
    clicks = []
    trace = []
    for step, tip in enumerate(tips):
        if center is None and tip is not None:
            center = tip
            counter = 1
            anti = 0
        elif (
            tip is not None
            and center is not None
            and math.hypot(tip[0] - center[0], tip[1] - center[1]) <= radius
        ):
            anti = 0
            counter += 1
            if counter == dwell_frames:
                clicks.append((step, center))
                counter = 0
        else:
            anti += 1
            if anti == miss_limit:
                counter = 0
                center = tip
                anti = 0
        trace.append((center, counter, anti))
    return clicks, trace
