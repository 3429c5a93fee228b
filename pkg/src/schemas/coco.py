"""
COCO-style annotation file schemas
Only the fields the codec reads are modelled; everything else is ignored.
"""
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator


class CocoImage(BaseModel):
    """Image entry; height and width are checked by the loader so the error can name the image"""
    model_config = ConfigDict(extra="ignore")

    id: int
    height: Optional[int] = None
    width: Optional[int] = None


class CocoRLE(BaseModel):
    """Uncompressed RLE segmentation"""
    model_config = ConfigDict(extra="ignore")

    size: List[int] = Field(..., min_length=2, max_length=2)
    counts: Union[List[int], str]

    @field_validator("counts")
    @classmethod
    def validate_counts(cls, v):
        if isinstance(v, str):
            raise ValueError("compressed RLE strings are not supported")
        if any(count < 0 for count in v):
            raise ValueError("RLE counts must be non-negative")
        return v

    @property
    def foreground_area(self) -> int:
        return sum(self.counts[1::2])


class CocoAnnotation(BaseModel):
    """Annotation entry with polygon or RLE segmentation"""
    model_config = ConfigDict(extra="ignore")

    id: Optional[int] = None
    image_id: int
    category_id: int = 0
    iscrowd: int = 0
    segmentation: Union[List[List[float]], CocoRLE]

    @property
    def is_rle(self) -> bool:
        return isinstance(self.segmentation, CocoRLE)


class CocoFile(BaseModel):
    """Top-level annotation file"""
    model_config = ConfigDict(extra="ignore")

    images: List[CocoImage]
    annotations: List[CocoAnnotation]
