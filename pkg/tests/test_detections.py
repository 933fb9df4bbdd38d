"""Detection import: CSV and JSON formats, thresholds, replace semantics."""

import json

import pytest

from trackme.detections import import_detections
from trackme.errors import ValidationError
from trackme.storage import load_frame, open_project

from conftest import annotate, box_shape, make_images


def build_project(tmp_path, n=40):
    root = tmp_path / "p"
    make_images(root, n)
    return open_project(root)


def test_mot_row_maps_to_null_id_box(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.txt"
    det.write_text("1,-1,10,10,20,20,0.9,-1,-1,-1\n")
    summary = import_detections(project, det, min_confidence=0.5)
    assert summary["boxes_added"] == 1
    frame = load_frame(project.annotation_paths[0])
    assert len(frame.shapes) == 1
    s = frame.shapes[0]
    assert s.track_id is None
    assert s.points == [[10, 10], [30, 30]]
    assert s.label == "object"


def test_low_confidence_skipped(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.txt"
    det.write_text("1,-1,10,10,20,20,0.3,-1,-1,-1\n")
    summary = import_detections(project, det, min_confidence=0.5)
    assert summary["boxes_added"] == 0
    assert summary["rows_skipped"] == 1
    assert summary["low_confidence"] == 1
    assert not project.annotation_exists(0)


def test_forty_frame_fixture_counts(tmp_path):
    project = build_project(tmp_path, n=40)
    rows = []
    expected = 0
    for f in range(1, 41):
        for j in range(2):
            conf = 0.9 if (f + j) % 3 else 0.2  # a third fall below threshold
            if conf >= 0.5:
                expected += 1
            rows.append(f"{f},-1,{10 + 30 * j},10,20,20,{conf},0,-1,-1")
    det = tmp_path / "dets.txt"
    det.write_text("\n".join(rows) + "\n")
    summary = import_detections(project, det, label_map={0: "bird"},
                                min_confidence=0.5)
    assert summary["boxes_added"] == expected
    total = sum(
        len(load_frame(project.annotation_paths[i]).shapes)
        for i in range(40) if project.annotation_exists(i)
    )
    assert total == expected


def test_malformed_rows_reported_and_skipped(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.txt"
    det.write_text(
        "1,-1,10,10,20,20,0.9,-1\n"
        "not,a,row\n"
        "2,-1,zz,10,20,20,0.9,-1\n"
        "3,-1,10,10,20,20,0.9,-1\n"
    )
    summary = import_detections(project, det)
    assert summary["boxes_added"] == 2
    assert len(summary["malformed"]) == 2
    assert "line 2" in summary["malformed"][0]


def test_unknown_class_skipped_and_counted(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.txt"
    det.write_text("1,-1,10,10,20,20,0.9,7,-1,-1\n1,-1,50,50,20,20,0.9,0,-1,-1\n")
    summary = import_detections(project, det, label_map={0: "bird"})
    assert summary["boxes_added"] == 1
    assert summary["unknown_class"] == 1


def test_out_of_range_frame_reported(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.txt"
    det.write_text("9,-1,10,10,20,20,0.9,-1\n")
    summary = import_detections(project, det)
    assert summary["boxes_added"] == 0
    assert len(summary["out_of_range"]) == 1


def test_existing_shapes_preserved_without_replace(tmp_path):
    project = build_project(tmp_path, n=2)
    annotate(project, 0, [box_shape("bird", 3, 100, 100, 20, 20)])
    det = tmp_path / "dets.txt"
    det.write_text("1,-1,10,10,20,20,0.9,-1\n")
    import_detections(project, det)
    frame = load_frame(project.annotation_paths[0])
    assert len(frame.shapes) == 2
    assert frame.shapes[0].track_id == 3


def test_replace_clears_then_adds_and_is_idempotent(tmp_path):
    project = build_project(tmp_path, n=2)
    annotate(project, 0, [box_shape("bird", 3, 100, 100, 20, 20)])
    det = tmp_path / "dets.txt"
    det.write_text("1,-1,10,10,20,20,0.9,-1\n1,-1,60,60,20,20,0.8,-1\n")
    import_detections(project, det, replace=True)
    first = load_frame(project.annotation_paths[0])
    assert len(first.shapes) == 2
    import_detections(project, det, replace=True)
    second = load_frame(project.annotation_paths[0])
    assert first == second


def test_row_order_does_not_matter(tmp_path):
    rows = [
        "2,-1,10,10,20,20,0.9,-1",
        "1,-1,30,30,20,20,0.9,-1",
        "1,-1,60,60,20,20,0.9,-1",
    ]
    p1 = build_project(tmp_path / "a", n=3)
    p2 = build_project(tmp_path / "b", n=3)
    (tmp_path / "d1.txt").write_text("\n".join(rows) + "\n")
    (tmp_path / "d2.txt").write_text("\n".join(reversed(rows)) + "\n")
    import_detections(p1, tmp_path / "d1.txt")
    import_detections(p2, tmp_path / "d2.txt")
    for i in range(3):
        a = p1.load(i)
        b = p2.load(i)
        if a is None:
            assert b is None
            continue
        assert sorted((s.label, tuple(map(tuple, s.points))) for s in a.shapes) == \
               sorted((s.label, tuple(map(tuple, s.points))) for s in b.shapes)


def test_never_assigns_ids(tmp_path):
    project = build_project(tmp_path, n=5)
    det = tmp_path / "dets.txt"
    det.write_text("\n".join(
        f"{f},-1,{10 + 5 * f},10,20,20,0.9,-1" for f in range(1, 6)) + "\n")
    import_detections(project, det)
    for i in range(5):
        for s in load_frame(project.annotation_paths[i]).shapes:
            assert s.track_id is None


def test_json_format(tmp_path):
    project = build_project(tmp_path, n=3)
    det = tmp_path / "dets.json"
    det.write_text(json.dumps([
        {"frame": 1, "bbox": [10, 10, 20, 20], "confidence": 0.9, "label": "bird"},
        {"frame": 2, "bbox": [40, 40, 20, 20], "confidence": 0.2, "label": "bird"},
        {"frame": 3, "bbox": [70, 70, 20, 20], "class": 0},
    ]))
    summary = import_detections(project, det, label_map={0: "fish"})
    assert summary["boxes_added"] == 2
    assert load_frame(project.annotation_paths[0]).shapes[0].label == "bird"
    assert load_frame(project.annotation_paths[2]).shapes[0].label == "fish"


def test_missing_file_rejected(tmp_path):
    project = build_project(tmp_path, n=2)
    with pytest.raises(ValidationError):
        import_detections(project, tmp_path / "nope.txt")
