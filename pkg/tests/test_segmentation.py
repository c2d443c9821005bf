import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from handwave.errors import (
    ConfigInvalid,
    DegenerateHistogram,
    DimensionMismatch,
    EmptyCalibration,
    InvalidRange,
    MissingAuxState,
    NoHandCandidate,
)
from handwave.frame import Frame, GrayFrame, Histogram, histogram, to_grayscale
from handwave.segmentation import (
    ColorRange,
    SegmentationAux,
    SegmentationConfig,
    ThresholdValue,
    background_subtract,
    calibrate_color_range,
    incremental_threshold,
    otsu_threshold,
    resolve_min_blob_area,
    segment,
    threshold_binary,
    threshold_color_range,
)
from oracles import otsu_oracle


def disc_gray(width=64, height=64, value=200, background=30, radius=None):
    r = radius if radius is not None else min(width, height) * 0.3
    yy, xx = np.mgrid[0:height, 0:width]
    inside = (xx - width / 2) ** 2 + (yy - height / 2) ** 2 <= r * r
    return GrayFrame.from_array(
        np.where(inside, np.uint8(value), np.uint8(background))
    )


class TestThresholdValue:
    def test_bounds(self):
        assert int(ThresholdValue(0)) == 0
        assert int(ThresholdValue(255)) == 255

    @pytest.mark.parametrize("bad", [-1, 256, 2.5, "70", True])
    def test_rejects(self, bad):
        with pytest.raises(ConfigInvalid):
            ThresholdValue(bad)


class TestThresholdBinary:
    def test_strictly_greater(self):
        g = GrayFrame.from_array(np.array([[69, 70, 71]], dtype=np.uint8))
        m = threshold_binary(g, ThresholdValue(70))
        assert m.pixels.tolist() == [[False, False, True]]

    @given(
        hnp.arrays(np.uint8, (6, 6)),
        st.integers(min_value=0, max_value=254),
        st.integers(min_value=1, max_value=255),
    )
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_threshold(self, a, t1, gap):
        t2 = min(t1 + gap, 255)
        g = GrayFrame.from_array(a)
        hi = threshold_binary(g, ThresholdValue(t2)).pixels
        lo = threshold_binary(g, ThresholdValue(t1)).pixels
        assert not np.any(hi & ~lo)


class TestOtsu:
    def test_two_spike_histogram(self):
        counts = np.zeros(256, dtype=np.int64)
        counts[50] = 100
        counts[200] = 100
        assert int(otsu_threshold(Histogram.from_counts(counts))) == 50

    def test_degenerate_single_intensity(self):
        counts = np.zeros(256, dtype=np.int64)
        counts[128] = 999
        with pytest.raises(DegenerateHistogram):
            otsu_threshold(Histogram.from_counts(counts))

    def test_empty_histogram(self):
        with pytest.raises(DegenerateHistogram):
            otsu_threshold(Histogram.from_counts(np.zeros(256, dtype=np.int64)))

    def test_against_oracle_sample(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            counts = rng.integers(0, 50, size=256)
            if np.count_nonzero(counts) < 2:
                continue
            h = Histogram.from_counts(counts)
            assert int(otsu_threshold(h)) == otsu_oracle([int(c) for c in counts])

    def test_bimodal_image_end_to_end(self):
        g = disc_gray(value=200, background=30)
        t = otsu_threshold(histogram(g))
        assert 30 <= int(t) < 200
        m = threshold_binary(g, t)
        assert m.foreground_count() == int(np.sum(g.pixels == 200))


class TestIncremental:
    def test_disc_image_selects_lowest_isolating_threshold(self):
        # Background 30, disc 200: every t in [30, 199] isolates the disc,
        # so the scan from incr_lo=20 settles at t=30.
        g = disc_gray(value=200, background=30)
        t, mask = incremental_threshold(g, SegmentationConfig(method="incremental"))
        assert int(t) == 30
        assert mask.foreground_count() == int(np.sum(g.pixels == 200))

    def test_no_candidate(self):
        g = GrayFrame.filled(32, 32, 10)
        with pytest.raises(NoHandCandidate):
            incremental_threshold(g, SegmentationConfig(method="incremental"))

    def test_two_equal_blobs_never_qualify_together(self):
        a = np.full((20, 40), 10, dtype=np.uint8)
        a[5:15, 2:12] = 200
        a[5:15, 25:35] = 200
        g = GrayFrame.from_array(a)
        with pytest.raises(NoHandCandidate):
            incremental_threshold(
                g, SegmentationConfig(method="incremental", min_blob_area=50)
            )


class TestColorRange:
    def test_valid_flag(self):
        assert ColorRange((0, 0, 0), (10, 10, 10)).valid
        assert not ColorRange((20, 0, 0), (10, 255, 255)).valid

    def test_rejects_non_rgb(self):
        with pytest.raises(ConfigInvalid):
            ColorRange((0, 0), (1, 1))
        with pytest.raises(ConfigInvalid):
            ColorRange((0, 0, 300), (255, 255, 255))

    def test_threshold_inclusive_bounds(self):
        f = Frame.from_array(
            np.array([[[10, 10, 10], [11, 11, 11], [20, 20, 20], [21, 21, 21]]], dtype=np.uint8)
        )
        m = threshold_color_range(f, ColorRange((11, 11, 11), (20, 20, 20)))
        assert m.pixels.tolist() == [[False, True, True, False]]

    def test_invalid_range_raises_at_use(self):
        f = Frame.filled(2, 2, (5, 5, 5))
        with pytest.raises(InvalidRange):
            threshold_color_range(f, ColorRange((50, 0, 0), (10, 255, 255)))


class TestCalibration:
    def test_constant_color_gives_degenerate_range(self):
        f = Frame.filled(40, 40, (120, 80, 60))
        r = calibrate_color_range([f], SegmentationConfig())
        assert r.min == r.max == (120, 80, 60)

    def test_samples_only_central_disc(self):
        a = np.zeros((41, 41, 3), dtype=np.uint8)
        a[20, 20] = (200, 100, 50)  # center pixel
        a[0, 0] = (255, 255, 255)  # far corner, outside the disc
        r = calibrate_color_range([Frame.from_array(a)], SegmentationConfig())
        assert r.max == (200, 100, 50)

    def test_accumulates_across_frames(self):
        f1 = Frame.filled(20, 20, (10, 50, 90))
        f2 = Frame.filled(20, 20, (30, 40, 200))
        r = calibrate_color_range([f1, f2], SegmentationConfig())
        assert r.min == (10, 40, 90)
        assert r.max == (30, 50, 200)

    def test_zero_frames(self):
        with pytest.raises(EmptyCalibration):
            calibrate_color_range([], SegmentationConfig())


class TestBackgroundSubtract:
    def test_thresholded_absolute_difference(self):
        bg = GrayFrame.filled(3, 1, 100)
        g = GrayFrame.from_array(np.array([[100, 126, 74]], dtype=np.uint8))
        m = background_subtract(g, bg, SegmentationConfig(bg_diff_threshold=25))
        assert m.pixels.tolist() == [[False, True, True]]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            background_subtract(
                GrayFrame.filled(4, 4, 0), GrayFrame.filled(5, 4, 0), SegmentationConfig()
            )


class TestConfig:
    def test_defaults_valid(self):
        cfg = SegmentationConfig()
        assert cfg.method == "otsu"
        assert int(cfg.static_t) == 70

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"method": "histogram"},
            {"incr_lo": 100, "incr_hi": 50},
            {"incr_step": 0},
            {"incr_hi": 300},
            {"calib_radius_fraction": 0.0},
            {"calib_radius_fraction": 0.9},
            {"bg_diff_threshold": -1},
            {"min_blob_area": -5},
            {"max_blob_area_fraction": 0.0},
            {"max_blob_area_fraction": 1.5},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ConfigInvalid):
            SegmentationConfig(**kwargs)

    def test_min_blob_area_default_resolution(self):
        cfg = SegmentationConfig()
        assert resolve_min_blob_area(cfg, 640, 480) == round(0.002 * 640 * 480)
        assert resolve_min_blob_area(SegmentationConfig(min_blob_area=7), 640, 480) == 7


class TestSegmentDispatch:
    def test_static(self):
        f = Frame.filled(4, 4, (200, 200, 200))
        m = segment(f, SegmentationConfig(method="static"), SegmentationAux())
        assert m.foreground_count() == 16

    def test_calibrated_requires_aux(self):
        f = Frame.filled(4, 4, (0, 0, 0))
        with pytest.raises(MissingAuxState):
            segment(f, SegmentationConfig(method="calibrated"), SegmentationAux())

    def test_color_range_requires_config_range(self):
        f = Frame.filled(4, 4, (0, 0, 0))
        with pytest.raises(MissingAuxState):
            segment(f, SegmentationConfig(method="color_range"), SegmentationAux())

    def test_background_sub_requires_background(self):
        f = Frame.filled(4, 4, (0, 0, 0))
        with pytest.raises(MissingAuxState):
            segment(f, SegmentationConfig(method="background_sub"), SegmentationAux())

    def test_calibrated_uses_aux_range(self):
        f = Frame.filled(4, 4, (100, 100, 100))
        aux = SegmentationAux(color_range=ColorRange((90, 90, 90), (110, 110, 110)))
        m = segment(f, SegmentationConfig(method="calibrated"), aux)
        assert m.foreground_count() == 16

    def test_background_sub_end_to_end(self):
        bg = GrayFrame.filled(4, 4, 10)
        f = Frame.filled(4, 4, (200, 200, 200))
        m = segment(f, SegmentationConfig(method="background_sub"), SegmentationAux(background=bg))
        assert m.foreground_count() == 16
