import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handwave.errors import (
    ConfigInvalid,
    EmptyContour,
    IndeterminateOrientation,
    InvalidDefectCount,
    NoDefects,
)
from handwave.gesture import (
    CommandMap,
    FingerCount,
    FingerCountEvent,
    Orientation,
    OrientationEvent,
    PointerMovedEvent,
    TrackerState,
    count_fingers,
    dwell_click_update,
    hand_orientation,
    large_defects,
    map_command,
    track_fingertip,
)
from handwave.topology import BBox, Contour, ConvexityDefect, Point
from oracles import dwell_reference


def defect(depth, s=0, e=1, f=2):
    return ConvexityDefect(start_index=s, end_index=e, farthest_index=f, depth=depth)


def orientation_fixture(s, e, d):
    """Contour holding exactly the three points a defect references."""
    c = Contour.from_points([Point(*s), Point(*e), Point(*d)])
    return c, [defect(50.0, 0, 1, 2)]


class TestLargeDefects:
    def test_threshold_on_bbox_height(self):
        bbox = BBox(0, 0, 50, 100)
        kept = large_defects([defect(3), defect(40), defect(55)], bbox, k=0.2)
        assert [d.depth for d in kept] == [40, 55]

    def test_empty_input(self):
        assert large_defects([], BBox(0, 0, 10, 10)) == []

    def test_all_below(self):
        assert large_defects([defect(1.0)], BBox(0, 0, 10, 100), k=0.2) == []

    def test_boundary_inclusive(self):
        bbox = BBox(0, 0, 10, 100)
        assert large_defects([defect(20.0)], bbox, k=0.2) == [defect(20.0)]


class TestCountFingers:
    @pytest.mark.parametrize(
        "n,want",
        [
            (1, FingerCount.TWO),
            (2, FingerCount.THREE),
            (3, FingerCount.FOUR),
            (4, FingerCount.FIVE),
        ],
    )
    def test_n_plus_one(self, n, want):
        assert count_fingers([defect(9.0)] * n) is want

    def test_zero_is_ambiguous(self):
        assert count_fingers([]) is FingerCount.AMBIGUOUS_ZERO_OR_ONE

    def test_too_many(self):
        with pytest.raises(InvalidDefectCount):
            count_fingers([defect(9.0)] * 5)


class TestHandOrientation:
    def test_down(self):
        c, defects = orientation_fixture((90, 120), (110, 120), (100, 80))
        assert hand_orientation(defects, c) is Orientation.DOWN

    def test_up(self):
        c, defects = orientation_fixture((90, 60), (110, 60), (100, 100))
        assert hand_orientation(defects, c) is Orientation.UP

    def test_right(self):
        c, defects = orientation_fixture((150, 90), (150, 110), (90, 100))
        assert hand_orientation(defects, c) is Orientation.RIGHT

    def test_left(self):
        c, defects = orientation_fixture((50, 90), (50, 110), (110, 100))
        assert hand_orientation(defects, c) is Orientation.LEFT

    def test_tie_goes_vertical(self):
        # |dx| == |dy| != 0: midpoint (10, 10) from depth point (0, 0).
        c, defects = orientation_fixture((0, 0), (20, 20), (0, 0))
        assert hand_orientation(defects, c) in (Orientation.UP, Orientation.DOWN)
        assert hand_orientation(defects, c) is Orientation.DOWN

    def test_deepest_defect_wins(self):
        pts = [Point(90, 120), Point(110, 120), Point(100, 80),
               Point(150, 90), Point(150, 110), Point(90, 100)]
        c = Contour.from_points(pts)
        shallow = ConvexityDefect(0, 1, 2, 10.0)   # points down
        deep = ConvexityDefect(3, 4, 5, 60.0)      # points right
        assert hand_orientation([shallow, deep], c) is Orientation.RIGHT

    def test_no_defects(self):
        c = Contour.from_points([Point(0, 0)])
        with pytest.raises(NoDefects):
            hand_orientation([], c)

    def test_indeterminate(self):
        c, defects = orientation_fixture((100, 100), (100, 100), (100, 100))
        with pytest.raises(IndeterminateOrientation):
            hand_orientation(defects, c)

    @given(
        st.integers(-200, 200), st.integers(-200, 200), st.integers(1, 4),
    )
    @settings(max_examples=60, deadline=None)
    def test_translation_and_scale_invariance(self, ox, oy, scale):
        base = [(90, 120), (110, 120), (100, 80)]
        c0, d0 = orientation_fixture(*base)
        moved = [((x + ox) * scale, (y + oy) * scale) for x, y in base]
        c1, d1 = orientation_fixture(*moved)
        assert hand_orientation(d0, c0) is hand_orientation(d1, c1)


class TestTrackFingertip:
    def test_unique_top(self):
        c = Contour.from_points([Point(5, 9), Point(3, 2), Point(7, 4)])
        assert track_fingertip(c) == Point(3, 2)

    def test_tie_leftmost(self):
        c = Contour.from_points([Point(9, 1), Point(4, 1), Point(6, 8)])
        assert track_fingertip(c) == Point(4, 1)

    def test_empty(self):
        c = Contour.from_points([Point(0, 0)])
        object.__setattr__(c, "points", ())
        with pytest.raises(EmptyContour):
            track_fingertip(c)


class TestTrackerState:
    def test_defaults(self):
        s = TrackerState()
        assert s.center is None and s.counter == 0 and s.anti_counter == 0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"radius": 0.0},
            {"radius": -2.0},
            {"dwell_frames": 0},
            {"miss_limit": 0},
            {"counter": -1},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ConfigInvalid):
            TrackerState(**kwargs)


class TestDwellClick:
    def run(self, tips, dwell_frames=4, radius=12.0, miss_limit=2):
        state = TrackerState(radius=radius, dwell_frames=dwell_frames, miss_limit=miss_limit)
        clicks = []
        trace = []
        for i, tip in enumerate(tips):
            state, click = dwell_click_update(state, tip)
            if click is not None:
                clicks.append((i, (click.x, click.y)))
            c = None if state.center is None else (state.center.x, state.center.y)
            trace.append((c, state.counter, state.anti_counter))
        return clicks, trace

    def test_four_in_area_frames_click(self):
        tips = [Point(100, 100)] * 4
        clicks, trace = self.run(tips, dwell_frames=4)
        assert clicks == [(3, (100, 100))]
        assert trace[-1] == ((100, 100), 0, 0)

    def test_isolated_miss_forgiven(self):
        inside = Point(100, 100)
        outside = Point(300, 300)
        clicks, _ = self.run([inside, outside, inside, inside, inside], dwell_frames=4)
        assert clicks == [(4, (100, 100))]

    def test_two_misses_recenter(self):
        inside = Point(100, 100)
        outside = Point(300, 300)
        clicks, trace = self.run([inside, outside, outside], dwell_frames=4)
        assert clicks == []
        assert trace[-1] == ((300, 300), 0, 0)

    def test_recentered_counter_starts_at_zero(self):
        inside = Point(100, 100)
        outside = Point(300, 300)
        # After recentering at step 2, dwell_frames more hits are needed.
        tips = [inside, outside, outside] + [outside] * 3
        clicks, _ = self.run(tips, dwell_frames=3)
        assert clicks == [(5, (300, 300))]

    def test_absence_clears_center_on_limit(self):
        clicks, trace = self.run([Point(100, 100), None, None])
        assert trace[-1] == (None, 0, 0)

    def test_radius_boundary_inclusive(self):
        center = Point(100, 100)
        edge = Point(112, 100)  # exactly radius 12 away
        clicks, _ = self.run([center, edge, edge, edge], dwell_frames=4, radius=12.0)
        assert clicks == [(3, (100, 100))]

    def test_click_lands_on_center_not_last_tip(self):
        center = Point(100, 100)
        nearby = Point(105, 100)
        clicks, _ = self.run([center, nearby, nearby, nearby], dwell_frames=4)
        assert clicks == [(3, (100, 100))]

    def test_pure_transition(self):
        s = TrackerState(center=Point(1, 1), counter=2, radius=5.0, dwell_frames=9)
        out1 = dwell_click_update(s, Point(2, 2))
        out2 = dwell_click_update(s, Point(2, 2))
        assert out1 == out2

    @given(
        st.lists(st.sampled_from(["in", "out", "none"]), min_size=1, max_size=20),
        st.integers(2, 5),
    )
    @settings(max_examples=80, deadline=None)
    def test_agrees_with_reference_interpreter(self, letters, dwell_frames):
        # Pre-simulate the reference to pick concrete positions per letter.
        radius, miss_limit = 10.0, 2
        tips = []
        center = None
        counter = anti = 0
        for i, letter in enumerate(letters):
            if letter == "none":
                tip = None
            elif letter == "in":
                tip = center if center is not None else (50 + i, 40)
            else:
                tip = (center[0] + 500, center[1]) if center is not None else (900, 900 + i)
            tips.append(tip)
            if center is None and tip is not None:
                center, counter, anti = tip, 1, 0
            elif tip is not None and center is not None and math.hypot(
                tip[0] - center[0], tip[1] - center[1]
            ) <= radius:
                anti = 0
                counter += 1
                if counter == dwell_frames:
                    counter = 0
            else:
                anti += 1
                if anti == miss_limit:
                    counter, center, anti = 0, tip, 0

        want_clicks, want_trace = dwell_reference(tips, dwell_frames, radius, miss_limit)
        got_clicks, got_trace = self.run(
            [None if t is None else Point(int(t[0]), int(t[1])) for t in tips],
            dwell_frames=dwell_frames,
            radius=radius,
            miss_limit=miss_limit,
        )
        assert got_clicks == [(i, (int(p[0]), int(p[1]))) for i, p in want_clicks]
        assert got_trace == [
            (None if c is None else (int(c[0]), int(c[1])), k, a)
            for c, k, a in want_trace
        ]


class TestCommandMap:
    def test_defaults_cover_both_families(self):
        m = CommandMap.default()
        assert map_command(OrientationEvent(Orientation.UP, 0), m) == "forward"
        assert map_command(FingerCountEvent(FingerCount.FIVE, 0), m) == "stop"
        assert map_command(FingerCountEvent(FingerCount.AMBIGUOUS_ZERO_OR_ONE, 0), m) == "left"

    def test_pointer_events_unmapped(self):
        m = CommandMap.default()
        assert map_command(PointerMovedEvent(Point(1, 2), 0), m) is None

    def test_unmapped_key_none(self):
        m = CommandMap({"up": "go"})
        assert map_command(FingerCountEvent(FingerCount.TWO, 0), m) is None
