"""
Tests for COCO-style annotation loading
"""
import json

import numpy as np
import pytest

from core.exceptions.handlers import AnnotationParseError, AnnotationSchemaError
from harness.annotations import AnnotationLoader, load_annotations


def write_document(path, images, annotations):
    path.write_text(json.dumps({"images": images, "annotations": annotations}))
    return path


class TestAnnotationLoader:
    """Polygons, RLE and the errors in between"""

    def test_polygon(self, temp_dir):
        """A polygon annotation rasterizes with its ids"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 8, "width": 8, "file_name": "a.jpg"}],
            [{"id": 5, "image_id": 1, "category_id": 3, "segmentation": [[0, 0, 4, 0, 4, 4, 0, 4]]}],
        )
        (record,) = load_annotations(path)
        assert record.annotation_id == 5
        assert record.category_id == 3
        assert record.mask.area == 16
        assert record.mask.cells[:4, :4].all()

    def test_multi_polygon_union(self, temp_dir):
        """Several polygons union into one mask"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 8, "width": 8}],
            [{"image_id": 1, "segmentation": [[0, 0, 2, 0, 2, 2, 0, 2], [4, 4, 6, 4, 6, 6, 4, 6]]}],
        )
        (record,) = load_annotations(path)
        assert record.annotation_id == 0
        assert record.mask.area == 8

    def test_rle_and_polygon_mix(self, temp_dir):
        """Polygon and RLE annotations load side by side"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 8, "width": 8}, {"id": 2, "height": 2, "width": 2}],
            [
                {"id": 1, "image_id": 1, "segmentation": [[0, 0, 4, 0, 0, 4]]},
                {"id": 2, "image_id": 2, "segmentation": {"size": [2, 2], "counts": [0, 1, 3]}},
            ],
        )
        polygon, rle = load_annotations(path)
        assert polygon.mask.area == 6
        assert rle.is_rle
        assert rle.mask.cells.tolist() == [[True, False], [False, False]]

    def test_zero_area_skipped(self, temp_dir):
        """Zero-area annotations are skipped and counted"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 4, "width": 4}],
            [
                {"image_id": 1, "segmentation": [[0, 0, 1, 1, 2, 2]]},
                {"image_id": 1, "segmentation": {"size": [4, 4], "counts": [16]}},
                {"image_id": 1, "segmentation": [[0, 0, 2, 0, 2, 2, 0, 2]]},
            ],
        )
        loader = AnnotationLoader(path)
        records = loader.load()
        assert len(records) == 1
        assert loader.skipped == 2

    def test_missing_image(self, temp_dir):
        """Annotations must reference a known image"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 4, "width": 4}],
            [{"image_id": 7, "segmentation": [[0, 0, 2, 0, 2, 2]]}],
        )
        with pytest.raises(AnnotationSchemaError) as exc_info:
            load_annotations(path)
        assert exc_info.value.details["reference"] == 7

    def test_image_without_size(self, temp_dir):
        """Images need a height and width"""
        path = write_document(temp_dir / "ann.json", [{"id": 3}], [])
        with pytest.raises(AnnotationSchemaError) as exc_info:
            load_annotations(path)
        assert exc_info.value.details["reference"] == 3

    def test_rle_size_mismatch(self, temp_dir):
        """RLE size must match its image"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 4, "width": 4}],
            [{"id": 9, "image_id": 1, "segmentation": {"size": [2, 2], "counts": [0, 4]}}],
        )
        with pytest.raises(AnnotationSchemaError) as exc_info:
            load_annotations(path)
        assert exc_info.value.details["reference"] == 9

    def test_compressed_rle_rejected(self, temp_dir):
        """String counts are not supported"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 4, "width": 4}],
            [{"image_id": 1, "segmentation": {"size": [4, 4], "counts": "52203"}}],
        )
        with pytest.raises(AnnotationSchemaError):
            load_annotations(path)

    def test_parse_error_reports_byte_offset(self, temp_dir):
        """Malformed JSON reports the byte offset of the error"""
        path = temp_dir / "broken.json"
        path.write_text('{"images": [], "annotations": [}')
        with pytest.raises(AnnotationParseError) as exc_info:
            load_annotations(path)
        assert exc_info.value.details["offset"] == 31
        assert exc_info.value.exit_code == 2

    def test_invalid_utf8_is_a_parse_error(self, temp_dir):
        """Undecodable bytes report the offset of the first bad byte"""
        path = temp_dir / "binary.json"
        path.write_bytes(b'{"images": [], "annotations": ["\xff\xfe"]}')
        with pytest.raises(AnnotationParseError) as exc_info:
            load_annotations(path)
        assert exc_info.value.details["offset"] == 32
        assert exc_info.value.exit_code == 2

    def test_masks_are_decoded_lazily_and_cached(self, temp_dir):
        """Masks are decoded once on first access"""
        path = write_document(
            temp_dir / "ann.json",
            [{"id": 1, "height": 3, "width": 3}],
            [{"image_id": 1, "segmentation": {"size": [3, 3], "counts": [0, 9]}}],
        )
        (record,) = load_annotations(path)
        assert record.mask is record.mask
        assert np.all(record.mask.cells)
