import json
import math

import numpy as np
import pytest

from app.geometry.wind_field import BaseDomain
from app.output import (
    contour_loops,
    dumps_json,
    emit_svg_contour,
    emit_svg_polyline,
    grid_frame,
    pgm_bytes,
    region_image,
    write_csv,
    write_json,
)

DOMAIN = BaseDomain((0.0, 4.0, 0.0, 4.0), 16, 16)


def disk(radius: float) -> np.ndarray:
    x, y = DOMAIN.mesh
    return np.hypot(x - 2.0, y - 2.0) <= radius


class TestContours:
    def test_disk_is_one_loop(self):
        assert len(contour_loops(disk(1.2))) == 1

    def test_annulus_is_two_loops(self):
        ring = disk(1.5) & ~disk(0.7)
        assert len(contour_loops(ring)) == 2
        assert emit_svg_contour(ring, DOMAIN).count("<path") == 2

    def test_diagonal_cells_stay_apart(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[4, 4] = mask[5, 5] = True
        assert len(contour_loops(mask)) == 2

    def test_single_cell_diamond(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[2, 3] = True
        svg = emit_svg_contour(mask, DOMAIN)
        path = svg.split('d="')[1].split('"')[0]
        assert path.startswith("M 0.750000 3.375000 L 0.875000 3.500000")
        assert path.count("L") == 3
        assert path.endswith("Z")

    def test_document_header(self):
        svg = emit_svg_contour(disk(1.0), DOMAIN)
        assert svg.startswith('<?xml version="1.0"')
        assert 'viewBox="0.000000 0.000000 4.000000 4.000000"' in svg
        assert svg == emit_svg_contour(disk(1.0), DOMAIN)

    def test_empty_mask(self):
        svg = emit_svg_contour(np.zeros((16, 16), dtype=bool), DOMAIN)
        assert "<!-- empty mask -->" in svg
        assert "<path" not in svg

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            emit_svg_contour(np.zeros((8, 8), dtype=bool), DOMAIN)

    def test_polyline(self):
        svg = emit_svg_polyline(np.array([[0.0, 0.0], [1.0, 1.0]]), DOMAIN)
        assert 'd="M 0.000000 4.000000 L 1.000000 3.000000"' in svg
        assert "<!-- empty curve -->" in emit_svg_polyline(np.empty((0, 2)), DOMAIN)


class TestWriters:
    def test_pgm_rows_top_down(self):
        data = pgm_bytes(np.array([[1, 2, 3], [4, 5, 6]]))
        assert data == b"P5\n3 2\n255\n" + bytes([4, 5, 6, 1, 2, 3])

    def test_region_greys(self):
        image = region_image(np.array([[-1, 0], [1, 2]]))
        np.testing.assert_array_equal(image, [[0, 85], [170, 255]])

    def test_csv_line_ends(self, tmp_path):
        path = write_csv(tmp_path / "table.csv", {"a": [1.0, 0.1], "b": [2, 3]})
        assert path.read_bytes() == b"a,b\r\n1,2\r\n0.1,3\r\n"

    def test_grid_frame(self):
        frame = grid_frame(np.array([0.5, 1.5]), np.array([0.25]), np.array([[7.0, 8.0]]), "T")
        assert list(frame.columns) == ["x", "y", "T"]
        assert frame["T"].tolist() == [7.0, 8.0]

    def test_json_is_canonical(self, tmp_path):
        payload = {"b": math.inf, "a": np.float64(1.5), "c": [np.int64(2)], "d": float("nan")}
        text = dumps_json(payload)
        assert json.loads(text) == {"a": 1.5, "b": "inf", "c": [2], "d": None}
        assert text.index('"a"') < text.index('"b"')
        assert write_json(tmp_path / "out" / "x.json", payload).read_text(encoding="utf-8") == text
