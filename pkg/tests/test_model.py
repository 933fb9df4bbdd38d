"""Value types: boxes, corner normalization, track keys, frame invariants."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trackme.errors import ValidationError
from trackme.model import (
    BoundingBox,
    FrameAnnotation,
    ShapeRecord,
    TrackKey,
    clamp_box,
    normalize_corners,
)

finite_coord = st.floats(min_value=-5000, max_value=5000,
                         allow_nan=False, allow_infinity=False)


class TestBoundingBox:
    def test_corner_round_trip(self):
        box = BoundingBox(20, 20, 20, 20)
        assert box.corners() == (10, 10, 30, 30)
        assert BoundingBox.from_corners(*box.corners()) == box

    def test_rejects_sub_pixel(self):
        with pytest.raises(ValidationError):
            BoundingBox(10, 10, 0.5, 5)

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            BoundingBox(math.nan, 0, 5, 5)

    @given(finite_coord, finite_coord,
           st.floats(min_value=1, max_value=800),
           st.floats(min_value=1, max_value=800))
    def test_points_conversion_near_lossless(self, cx, cy, w, h):
        box = BoundingBox(cx, cy, w, h)
        back = BoundingBox.from_points(box.to_points())
        assert back.cx == pytest.approx(box.cx, abs=1e-9)
        assert back.cy == pytest.approx(box.cy, abs=1e-9)
        assert back.w == pytest.approx(box.w, abs=1e-9)
        assert back.h == pytest.approx(box.h, abs=1e-9)


class TestNormalizeCorners:
    def test_reorders(self):
        assert normalize_corners([[50, 80], [10, 20]]) == [[10, 20], [50, 80]]

    def test_mixed_order(self):
        assert normalize_corners([[50, 20], [10, 80]]) == [[10, 20], [50, 80]]

    @given(finite_coord, finite_coord, finite_coord, finite_coord)
    def test_idempotent(self, ax, ay, bx, by):
        if ax == bx or ay == by:
            return
        once = normalize_corners([[ax, ay], [bx, by]])
        assert normalize_corners(once) == once

    def test_degenerate_rejected(self):
        with pytest.raises(ValidationError):
            normalize_corners([[5, 5], [5, 9]])


class TestTrackKey:
    def test_equality_componentwise(self):
        assert TrackKey("bird", 3) == TrackKey("bird", 3)
        assert TrackKey("bird", 3) != TrackKey("bird", 4)
        assert TrackKey("bird", 3) != TrackKey("car", 3)

    def test_null_only_matches_null(self):
        assert TrackKey("bird", None) == TrackKey("bird", None)
        assert TrackKey("bird", None) != TrackKey("bird", 0)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            TrackKey("bird", -1)

    def test_sorting_puts_null_first(self):
        keys = [TrackKey("bird", 2), TrackKey("bird", None), TrackKey("bird", 0)]
        assert sorted(keys, key=TrackKey.sort_key) == [
            TrackKey("bird", None), TrackKey("bird", 0), TrackKey("bird", 2)]


class TestShapeRecord:
    def test_normalizes_on_construction(self):
        s = ShapeRecord(label="bird", track_id=3, points=[[50, 80], [10, 20]])
        assert s.points == [[10, 20], [50, 80]]

    def test_empty_label_rejected(self):
        with pytest.raises(ValidationError):
            ShapeRecord(label="", track_id=None, points=[[0, 0], [5, 5]])

    def test_negative_id_rejected(self):
        with pytest.raises(ValidationError):
            ShapeRecord(label="bird", track_id=-2, points=[[0, 0], [5, 5]])

    def test_box_property(self):
        s = ShapeRecord(label="bird", track_id=None, points=[[10, 10], [30, 30]])
        assert s.box == BoundingBox(20, 20, 20, 20)


class TestFrameInvariants:
    def _frame(self, shapes):
        return FrameAnnotation(
            image_path="f.jpg", image_width=100, image_height=100, shapes=shapes)

    def test_duplicate_non_null_key_detected(self):
        frame = self._frame([
            ShapeRecord("bird", 3, [[0, 0], [10, 10]]),
            ShapeRecord("bird", 3, [[20, 20], [30, 30]]),
        ])
        assert frame.duplicate_keys() == [TrackKey("bird", 3)]
        with pytest.raises(ValidationError):
            frame.check_invariants()

    def test_null_ids_never_duplicate(self):
        frame = self._frame([
            ShapeRecord("bird", None, [[0, 0], [10, 10]]),
            ShapeRecord("bird", None, [[20, 20], [30, 30]]),
        ])
        assert frame.duplicate_keys() == []
        frame.check_invariants()

    def test_disjoint_shape_detected(self):
        frame = self._frame([ShapeRecord("bird", 1, [[150, 150], [160, 160]])])
        assert frame.disjoint_shapes() == [0]
        with pytest.raises(ValidationError):
            frame.check_invariants()

    def test_overhanging_shape_is_not_disjoint(self):
        frame = self._frame([ShapeRecord("bird", 1, [[90, 90], [160, 160]])])
        assert frame.disjoint_shapes() == []
        assert frame.out_of_bounds_shapes() == [0]
        frame.check_invariants()


class TestClampBox:
    def test_noop_inside(self):
        box = BoundingBox(50, 50, 20, 20)
        assert clamp_box(box, 100, 100) == box

    def test_clips_overhang(self):
        clamped = clamp_box(BoundingBox(95, 50, 20, 20), 100, 100)
        x1, y1, x2, y2 = clamped.corners()
        assert x2 <= 100 and x1 >= 0
        assert clamped.w >= 1 and clamped.h >= 1

    def test_minimum_extent_preserved_at_edge(self):
        clamped = clamp_box(BoundingBox(99.7, 99.7, 4, 4), 100, 100)
        assert clamped.w >= 1 and clamped.h >= 1
        x1, y1, x2, y2 = clamped.corners()
        assert x2 <= 100 and y2 <= 100
