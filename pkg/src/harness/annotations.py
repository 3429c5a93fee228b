"""
COCO-style annotation ingestion
"""
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import ValidationError

from core.exceptions.handlers import AnnotationParseError, AnnotationSchemaError
from core.logging.setup import get_logger
from geometry.mask_core import polygon_area, rasterize_polygon, rle_decode
from models.geometry import BinaryMask, Polygon
from schemas.coco import CocoAnnotation, CocoFile, CocoImage

logger = get_logger("harness.annotations")


@dataclass(eq=False)
class AnnotationRecord:
    """One annotation with the size of its image; RLE is decoded on first use"""
    annotation_id: int
    image_id: int
    height: int
    width: int
    category_id: int = 0
    polygons: List[Polygon] = field(default_factory=list)
    rle_counts: Optional[List[int]] = None

    @property
    def is_rle(self) -> bool:
        return self.rle_counts is not None

    @cached_property
    def mask(self) -> BinaryMask:
        if self.is_rle:
            return rle_decode(self.rle_counts, self.height, self.width)
        cells = np.zeros((self.height, self.width), dtype=bool)
        for poly in self.polygons:
            cells |= rasterize_polygon(poly, self.height, self.width).cells
        return BinaryMask(cells)


class AnnotationLoader:
    """Reads an annotation file into records, counting what it has to skip"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.skipped = 0

    def _parse(self) -> CocoFile:
        raw = self.path.read_bytes()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise AnnotationParseError(
                f"{self.path}: invalid UTF-8 at byte {exc.start}",
                offset=exc.start
            ) from exc
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            offset = len(text[:exc.pos].encode("utf-8"))
            raise AnnotationParseError(
                f"{self.path}: {exc.msg} at byte {offset}",
                offset=offset
            ) from exc
        try:
            return CocoFile.model_validate(document)
        except ValidationError as exc:
            first = exc.errors()[0]
            raise AnnotationSchemaError(
                f"{self.path}: invalid annotation file: {first['msg']}",
                reference=".".join(str(part) for part in first["loc"])
            ) from exc

    @staticmethod
    def _image_sizes(images: List[CocoImage]) -> dict:
        sizes = {}
        for image in images:
            if not image.height or not image.width or image.height < 1 or image.width < 1:
                raise AnnotationSchemaError(
                    f"image {image.id} is missing a positive height/width",
                    reference=image.id
                )
            sizes[image.id] = (image.height, image.width)
        return sizes

    def _record(self, index: int, ann: CocoAnnotation, height: int, width: int) -> Optional[AnnotationRecord]:
        annotation_id = ann.id if ann.id is not None else index
        if ann.is_rle:
            rle = ann.segmentation
            if list(rle.size) != [height, width]:
                raise AnnotationSchemaError(
                    f"annotation {annotation_id}: RLE size {rle.size} differs from image {ann.image_id}",
                    reference=annotation_id
                )
            if sum(rle.counts) != height * width:
                raise AnnotationSchemaError(
                    f"annotation {annotation_id}: RLE counts do not cover {height}x{width}",
                    reference=annotation_id
                )
            if rle.foreground_area == 0:
                return None
            return AnnotationRecord(
                annotation_id=annotation_id,
                image_id=ann.image_id,
                height=height,
                width=width,
                category_id=ann.category_id,
                rle_counts=list(rle.counts),
            )

        polygons = []
        for coords in ann.segmentation:
            if len(coords) < 6:
                continue
            try:
                poly = Polygon.from_flat(coords)
            except ValueError:
                continue
            if polygon_area(poly) > 0:
                polygons.append(poly)
        if not polygons:
            return None
        return AnnotationRecord(
            annotation_id=annotation_id,
            image_id=ann.image_id,
            height=height,
            width=width,
            category_id=ann.category_id,
            polygons=polygons,
        )

    def load(self) -> List[AnnotationRecord]:
        document = self._parse()
        sizes = self._image_sizes(document.images)
        records = []
        self.skipped = 0
        for index, ann in enumerate(document.annotations):
            if ann.image_id not in sizes:
                raise AnnotationSchemaError(
                    f"annotation references missing image id {ann.image_id}",
                    reference=ann.image_id
                )
            record = self._record(index, ann, *sizes[ann.image_id])
            if record is None:
                self.skipped += 1
                continue
            records.append(record)
        if self.skipped:
            logger.warning(
                "skipped zero-area annotations",
                extra={"path": str(self.path), "skipped": self.skipped}
            )
        logger.info("annotations loaded", extra={"path": str(self.path), "records": len(records)})
        return records


def load_annotations(path: Union[str, Path]) -> List[AnnotationRecord]:
    """Records for every annotation with a non-empty segmentation"""
    return AnnotationLoader(path).load()
