"""
Pytest configuration and fixtures for densepoints tests
"""
import pytest
import tempfile
from pathlib import Path

import numpy as np

# Add src to path for imports
import sys
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def rng():
    """Seeded generator for random test inputs"""
    return np.random.default_rng(20240617)


@pytest.fixture
def ring_mask():
    """5x5 ring: a 3x3 block with its center pixel removed, framed by background"""
    from models.geometry import BinaryMask

    cells = np.zeros((5, 5), dtype=bool)
    cells[1:4, 1:4] = True
    cells[2, 2] = False
    return BinaryMask(cells)


@pytest.fixture
def square_mask():
    """4x4 foreground square at rows/cols 2..5 of an 8x8 grid"""
    from models.geometry import BinaryMask

    cells = np.zeros((8, 8), dtype=bool)
    cells[2:6, 2:6] = True
    return BinaryMask(cells)


@pytest.fixture
def disk_mask():
    """Disk of radius 10 centered in a 32x32 grid"""
    from models.geometry import BinaryMask

    c = np.arange(32) + 0.5
    dist2 = (c[None, :] - 16.0) ** 2 + (c[:, None] - 16.0) ** 2
    return BinaryMask(dist2 <= 100.0)


@pytest.fixture
def random_masks(rng):
    """Ten random blobby 32x32 masks built from thresholded smoothed noise"""
    from scipy import ndimage
    from models.geometry import BinaryMask

    masks = []
    while len(masks) < 10:
        noise = ndimage.gaussian_filter(rng.standard_normal((32, 32)), sigma=3.0)
        cells = noise > 0.05
        if cells.any() and not cells.all():
            masks.append(BinaryMask(cells))
    return masks


@pytest.fixture
def test_settings(temp_dir):
    """Settings writing reports and logs into a temporary directory"""
    from core.config.settings import Settings

    config = Settings(environment="testing")
    config.harness.reports_dir = temp_dir / "reports"
    config.log.logs_dir = temp_dir / "logs"
    config.config_dir = temp_dir / "config"
    return config


@pytest.fixture
def config_manager(test_settings):
    """ConfigManager over a temporary config directory"""
    from core.config.manager import ConfigManager

    return ConfigManager(config_dir=test_settings.config_dir, config=test_settings)
