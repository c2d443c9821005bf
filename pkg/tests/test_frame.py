import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from handwave.frame import (
    BinaryMask,
    Frame,
    GrayFrame,
    Histogram,
    histogram,
    to_grayscale,
)


class TestFrame:
    def test_from_array_shape_and_accessors(self):
        a = np.arange(24, dtype=np.uint8).reshape(2, 4, 3)
        f = Frame.from_array(a)
        assert (f.width, f.height) == (4, 2)
        assert f.pixel(1, 0) == (3, 4, 5)

    def test_filled(self):
        f = Frame.filled(3, 2, (9, 8, 7))
        assert f.pixel(2, 1) == (9, 8, 7)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            Frame.from_array(np.zeros((2, 2), dtype=np.uint8))

    def test_pixels_are_immutable(self):
        f = Frame.filled(2, 2, (0, 0, 0))
        with pytest.raises(ValueError):
            f.pixels[0, 0, 0] = 1

    def test_equality_is_by_content(self):
        a = Frame.filled(2, 2, (1, 2, 3))
        b = Frame.from_array(np.full((2, 2, 3), (1, 2, 3), dtype=np.uint8))
        assert a == b


class TestGrayscale:
    def test_luma_weights(self):
        f = Frame.filled(1, 1, (100, 50, 200))
        # 0.299*100 + 0.587*50 + 0.114*200 = 82.05 -> 82
        assert to_grayscale(f).pixel(0, 0) == 82

    def test_rounds_half_up(self):
        # 0.299*5 + 0.587*0 + 0.114*0 = 1.495; 0.299*115 = 34.385 + 0.114*5 = 34.955
        f = Frame.from_array(
            np.array([[[5, 0, 0], [115, 0, 5]]], dtype=np.uint8)
        )
        g = to_grayscale(f)
        assert g.pixel(0, 0) == 1
        assert g.pixel(1, 0) == 35

    def test_white_stays_white(self):
        f = Frame.filled(2, 2, (255, 255, 255))
        assert to_grayscale(f).pixel(0, 0) == 255

    @given(
        hnp.arrays(
            np.uint8,
            st.tuples(
                st.integers(min_value=1, max_value=8),
                st.integers(min_value=1, max_value=8),
                st.just(3),
            ),
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_matches_scalar_reference(self, a):
        g = to_grayscale(Frame.from_array(a))
        for y in range(a.shape[0]):
            for x in range(a.shape[1]):
                r, gg, b = (int(c) for c in a[y, x])
                want = int(np.clip(np.floor(0.299 * r + 0.587 * gg + 0.114 * b + 0.5), 0, 255))
                assert g.pixel(x, y) == want


class TestBinaryMask:
    def test_from_bool_and_count(self):
        m = BinaryMask.from_bool(np.array([[True, False], [True, True]]))
        assert m.foreground_count() == 3

    def test_blank(self):
        assert BinaryMask.blank(4, 3).foreground_count() == 0


class TestHistogram:
    def test_of_known_image(self):
        g = GrayFrame.from_array(np.array([[0, 0], [255, 7]], dtype=np.uint8))
        h = histogram(g)
        assert h.total == 4
        assert h.bins[0] == 2
        assert h.bins[7] == 1
        assert h.bins[255] == 1

    def test_total_must_match(self):
        with pytest.raises(ValueError):
            Histogram(bins=np.ones(256, dtype=np.int64), total=3)

    def test_needs_256_bins(self):
        with pytest.raises(ValueError):
            Histogram(bins=np.zeros(10, dtype=np.int64), total=0)

    @given(hnp.arrays(np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=16)))
    @settings(max_examples=50, deadline=None)
    def test_total_equals_pixel_count(self, a):
        h = histogram(GrayFrame.from_array(a))
        assert h.total == a.size
        assert int(h.bins.sum()) == a.size
