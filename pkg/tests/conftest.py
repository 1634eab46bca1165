import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_plane(rng, h, w):
    from leafdx.imaging import Plane

    return Plane(rng.random((h, w)))


def random_raster(rng, h, w):
    from leafdx.imaging import Raster

    return Raster(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))
