"""MOT CSV export: coordinate conversion, skip rules, line counts."""

from trackme.mot import export_mot
from trackme.storage import open_project

from conftest import annotate, box_shape, make_images


def test_single_box_line_format(tmp_path):
    root = tmp_path / "p"
    make_images(root, 1)
    project = open_project(root)
    annotate(project, 0, [box_shape("bird", 3, 20, 20, 20, 20)])
    out = tmp_path / "tracks.csv"
    summary = export_mot(project, out)
    assert out.read_text().splitlines() == ["1,3,10,10,20,20,1,-1,-1,-1"]
    assert summary == {"lines_written": 1, "skipped_null_id": 0}


def test_empty_project(tmp_path):
    root = tmp_path / "p"
    make_images(root, 3)
    project = open_project(root)
    out = tmp_path / "tracks.csv"
    summary = export_mot(project, out)
    assert out.read_text() == ""
    assert summary == {"lines_written": 0, "skipped_null_id": 0}


def test_null_id_boxes_skipped_and_counted(tmp_path):
    root = tmp_path / "p"
    make_images(root, 2)
    project = open_project(root)
    annotate(project, 0, [box_shape("bird", None, 50, 50, 10, 10),
                          box_shape("bird", 1, 100, 100, 10, 10)])
    annotate(project, 1, [box_shape("bird", None, 50, 50, 10, 10)])
    out = tmp_path / "tracks.csv"
    summary = export_mot(project, out)
    assert summary["skipped_null_id"] == 2
    assert summary["lines_written"] == 1


def test_line_count_equals_non_null_shapes(tmp_path):
    root = tmp_path / "p"
    make_images(root, 6)
    project = open_project(root)
    expected = 0
    for i in range(6):
        shapes = [box_shape("bird", j, 40 + 30 * j, 60, 20, 20)
                  for j in range(i % 3 + 1)]
        shapes.append(box_shape("car", None, 250, 200, 24, 24))
        annotate(project, i, shapes)
        expected += i % 3 + 1
    out = tmp_path / "tracks.csv"
    summary = export_mot(project, out)
    lines = out.read_text().splitlines()
    assert len(lines) == expected == summary["lines_written"]
    # frames are 1-based in the file
    assert lines[0].split(",")[0] == "1"


def test_float_boxes_written_compactly(tmp_path):
    root = tmp_path / "p"
    make_images(root, 1)
    project = open_project(root)
    annotate(project, 0, [box_shape("bird", 2, 20.25, 20, 10.5, 10)])
    out = tmp_path / "t.csv"
    export_mot(project, out)
    assert out.read_text().splitlines() == ["1,2,15,15,10.5,10,1,-1,-1,-1"]
