import numpy as np

from handwave.draw import (
    CONTOUR_COLOR,
    DWELL_RING_COLOR,
    FINGERTIP_COLOR,
    HULL_COLOR,
    AnnotatedFrame,
    DefectMarker,
    draw_circle,
    draw_disc,
    draw_line,
    draw_polyline,
    render,
)
from handwave.frame import Frame
from handwave.pipeline import PipelineConfig, PipelineState, process_frame
from handwave.synth import hand_frame
from handwave.topology import Point


def blank(w=32, h=32):
    return np.zeros((h, w, 3), dtype=np.uint8)


class TestPrimitives:
    def test_line_endpoints_and_connectivity(self):
        img = blank()
        draw_line(img, Point(2, 3), Point(9, 7), (255, 0, 0))
        assert tuple(img[3, 2]) == (255, 0, 0)
        assert tuple(img[7, 9]) == (255, 0, 0)
        ys, xs = np.nonzero(img[:, :, 0])
        assert len(xs) >= 8  # one pixel per column along the major axis

    def test_horizontal_and_vertical_lines(self):
        img = blank()
        draw_line(img, Point(1, 5), Point(6, 5), (0, 255, 0))
        assert all(tuple(img[5, x]) == (0, 255, 0) for x in range(1, 7))
        draw_line(img, Point(3, 1), Point(3, 4), (0, 0, 255))
        assert all(tuple(img[y, 3]) == (0, 0, 255) for y in range(1, 5))

    def test_line_clips_out_of_bounds(self):
        img = blank(8, 8)
        draw_line(img, Point(-5, -5), Point(12, 12), (9, 9, 9))
        assert tuple(img[0, 0]) == (9, 9, 9)  # clipped but drawn inside

    def test_polyline_closes(self):
        img = blank()
        pts = (Point(2, 2), Point(10, 2), Point(10, 10))
        draw_polyline(img, pts, (1, 2, 3))
        assert tuple(img[6, 6]) == (1, 2, 3)  # on the closing diagonal

    def test_circle_radius_zero_is_point(self):
        img = blank()
        draw_circle(img, Point(5, 5), 0, (4, 4, 4))
        assert tuple(img[5, 5]) == (4, 4, 4)

    def test_circle_extremes(self):
        img = blank()
        draw_circle(img, Point(16, 16), 6, (7, 7, 7))
        for x, y in [(22, 16), (10, 16), (16, 22), (16, 10)]:
            assert tuple(img[y, x]) == (7, 7, 7)
        assert tuple(img[16, 16]) == (0, 0, 0)  # hollow

    def test_disc_fills(self):
        img = blank()
        draw_disc(img, Point(16, 16), 4, (8, 8, 8))
        assert tuple(img[16, 16]) == (8, 8, 8)
        assert tuple(img[13, 16]) == (8, 8, 8)


class TestRender:
    def _annotated(self):
        cfg = PipelineConfig()
        _, annotated, _ = process_frame(
            hand_frame(160, 120, 3, "up"), cfg, PipelineState.initial(cfg), 0
        )
        return annotated

    def test_base_frame_unmodified(self):
        f = Frame.filled(16, 16, (50, 50, 50))
        out = render(AnnotatedFrame(frame=f))
        assert out == f
        assert out is not f

    def test_overlays_present(self):
        out = render(self._annotated())
        px = out.pixels
        assert np.any(np.all(px == CONTOUR_COLOR, axis=2))
        assert np.any(np.all(px == HULL_COLOR, axis=2))

    def test_fingertip_marker(self):
        annotated = self._annotated()
        assert annotated.fingertip is not None
        out = render(annotated)
        assert np.any(np.all(out.pixels == FINGERTIP_COLOR, axis=2))

    def test_dwell_ring_when_tracking(self):
        annotated = self._annotated()
        assert annotated.dwell_center is not None
        out = render(annotated)
        assert np.any(np.all(out.pixels == DWELL_RING_COLOR, axis=2))

    def test_defect_markers_drawn(self):
        annotated = self._annotated()
        assert annotated.defects
        m = annotated.defects[0]
        assert isinstance(m, DefectMarker)
        out = render(annotated)
        assert out != annotated.frame
