"""
Basic tests to verify test setup
"""
import pytest
import sys
from pathlib import Path

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

def test_basic_import():
    """Test that basic imports work"""
    try:
        from geometry.decode import decode, delaunay
        from geometry.sampling import encode_mask
        assert decode is not None
        assert delaunay is not None
        assert encode_mask is not None
    except ImportError as e:
        pytest.fail(f"Failed to import codec: {e}")

def test_encode_decode_roundtrip():
    """A solid square survives grid encoding and grid decoding"""
    from geometry.decode import decode
    from geometry.mask_core import mask_iou
    from geometry.sampling import encode_mask
    from models.enums import Decoder, Strategy
    from models.geometry import BinaryMask

    cells = np.zeros((10, 10), dtype=bool)
    cells[2:7, 3:9] = True
    mask = BinaryMask(cells)

    points = encode_mask(mask, Strategy.GRID, 16)
    assert points.n == 16
    assert mask_iou(decode(points, Decoder.GRID, 10, 10), mask) == 1.0

def test_settings_defaults():
    """Test default codec settings"""
    from core.config.settings import Settings

    config = Settings(environment="testing")
    assert config.project_name == "densepoints"
    assert config.sampling.delta == 0.04
    assert config.decode.tau == 0.5
    assert config.field_ops.groups == 9

def test_logger_namespace():
    """Loggers live under the densepoints namespace"""
    from core.logging.setup import get_logger

    assert get_logger("geometry.sampling").name == "densepoints.geometry.sampling"
