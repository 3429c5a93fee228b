"""
File exports: masks as PGM and RLE JSON, point sets, fields, synthetic corpora
"""
import json
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from PIL import Image
from pydantic import ValidationError

from core.exceptions.handlers import AnnotationSchemaError
from core.logging.setup import get_logger
from models.fields import DistanceField, ProbField, Triangulation
from models.geometry import BinaryMask, DensePointSet
from schemas.coco import CocoAnnotation, CocoFile, CocoImage, CocoRLE
from schemas.interchange import PointSetModel, RLEModel, TriangulationModel

logger = get_logger("harness.exporters")

PathLike = Union[str, Path]


def _sibling(stem: Path, suffix: str) -> Path:
    return stem.parent / f"{stem.name}{suffix}"


def _dump(document: dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as handle:
        json.dump(document, handle, sort_keys=True, indent=2)
        handle.write("\n")
    return path


def write_pgm(mask: BinaryMask, path: PathLike) -> Path:
    """Binary PGM (P5), foreground 255"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image = Image.fromarray(mask.to_array().astype(np.uint8) * 255)
    image.save(path, format="PPM")
    return path


def read_pgm(path: PathLike) -> BinaryMask:
    with Image.open(path) as image:
        return BinaryMask(np.asarray(image.convert("L")) > 0)


def write_rle(mask: BinaryMask, path: PathLike) -> Path:
    return _dump(RLEModel.from_mask(mask).model_dump(), Path(path))


def read_rle(path: PathLike) -> BinaryMask:
    return RLEModel.model_validate_json(Path(path).read_text()).to_mask()


def write_mask(mask: BinaryMask, stem: PathLike) -> List[Path]:
    """<stem>.pgm and <stem>.rle.json"""
    stem = Path(stem)
    paths = [
        write_pgm(mask, _sibling(stem, ".pgm")),
        write_rle(mask, _sibling(stem, ".rle.json")),
    ]
    logger.info("mask written", extra={"paths": [str(p) for p in paths], "area": mask.area})
    return paths


def write_point_set(
    pts: DensePointSet, path: PathLike, height: Optional[int] = None, width: Optional[int] = None
) -> Path:
    model = PointSetModel.from_points(pts, height=height, width=width)
    return _dump(model.model_dump(exclude_none=True), Path(path))


def read_point_set(path: PathLike) -> Tuple[DensePointSet, PointSetModel]:
    """Point set plus the parsed document, which may carry the image extent"""
    model = PointSetModel.model_validate_json(Path(path).read_text())
    return model.to_points(), model


def write_triangulation(tri: Triangulation, path: PathLike) -> Path:
    return _dump(TriangulationModel.from_triangulation(tri).model_dump(), Path(path))


def read_triangulation(path: PathLike) -> Triangulation:
    return TriangulationModel.model_validate_json(Path(path).read_text()).to_triangulation()


def write_field(field: Union[DistanceField, ProbField], stem: PathLike) -> List[Path]:
    """<stem>.npy (row-major float64) plus <stem>.json header"""
    stem = Path(stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    array_path = _sibling(stem, ".npy")
    np.save(array_path, np.ascontiguousarray(field.values, dtype=np.float64))
    return [array_path, _dump(field.header(), _sibling(stem, ".json"))]


def corpus_document(masks: Sequence[BinaryMask]) -> CocoFile:
    """One image and one RLE annotation per mask, ids starting at 1"""
    images, annotations = [], []
    for index, mask in enumerate(masks, start=1):
        images.append(CocoImage(id=index, height=mask.height, width=mask.width))
        rle = RLEModel.from_mask(mask)
        annotations.append(
            CocoAnnotation(id=index, image_id=index, segmentation=CocoRLE(size=rle.size, counts=rle.counts))
        )
    return CocoFile(images=images, annotations=annotations)


def write_corpus(masks: Sequence[BinaryMask], path: PathLike) -> Path:
    """COCO-style RLE annotation file readable by load_annotations"""
    try:
        document = corpus_document(masks)
    except ValidationError as exc:
        raise AnnotationSchemaError(f"corpus could not be serialized: {exc}") from exc
    path = _dump(document.model_dump(mode="json", exclude_none=True), Path(path))
    logger.info("corpus written", extra={"path": str(path), "masks": len(masks)})
    return path
