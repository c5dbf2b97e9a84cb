import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240821))


def make_series(gen, max_len=12, min_len=1):
    K = int(gen.integers(min_len, max_len + 1))
    a = gen.normal(size=K)
    if gen.random() < 0.3:
        a = np.round(a * 4) / 4
    return a
