import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from voxtopo.volume import VoxelVolume  # noqa: E402


def vol(dims, *coords):
    return VoxelVolume.from_coords(dims, list(coords))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
