"""
Codec enumerations and default constants
"""
from enum import Enum


class Strategy(str, Enum):
    """Point-set encoders"""
    BOUNDARY = "boundary"
    GRID = "grid"
    DTS = "dts"


class Decoder(str, Enum):
    """Point-set to mask decoders"""
    TRIANGULATION = "triangulation"
    CONCAVE = "concave"
    GRID = "grid"


class HeadMode(str, Enum):
    """Per-object head layouts for the cost model"""
    CONCAT = "concat"
    GROUP_POOL = "group_pool"
    SHARED_OFFSET = "shared_offset"


class SizeBucket(str, Enum):
    """COCO object size buckets by foreground area"""
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    @classmethod
    def for_area(cls, area: int) -> "SizeBucket":
        if area < CodecDefaults.SMALL_AREA:
            return cls.SMALL
        if area < CodecDefaults.MEDIUM_AREA:
            return cls.MEDIUM
        return cls.LARGE


class CodecDefaults:
    """Default configuration values for the codec"""

    # Sampling
    DELTA = 0.04
    SEED = 0

    # Decoding
    TAU = 0.5
    HULL_K = 3

    # Shared fields
    GROUPS = 9
    ATTRIBUTE_BINS = 7
    CHANNELS = 256

    # Losses
    PROBABILITY_CLAMP = 1e-7

    # COCO size buckets
    SMALL_AREA = 32 ** 2
    MEDIUM_AREA = 96 ** 2

    # Reports
    REPORT_SCHEMA_VERSION = 1
    TABLE8_N_VALUES = (9, 25, 49, 81, 225, 441, 729)
