import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from yaogame.core import MixedStrategy, RatioMatrix  # noqa: E402
from yaogame.problems import XorShift64Star, random_distribution, random_instance  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def r2():
    return RatioMatrix.from_array([[1, 3], [2, 1]])


@pytest.fixture
def pure():
    return RatioMatrix.from_array([[1, 2], [3, 4]])


@pytest.fixture
def dominated():
    return RatioMatrix.from_array([[1, 2], [1, 3]])


def dist(labels, *weights):
    w = np.array(weights, dtype=np.float64)
    return MixedStrategy(tuple(labels), w / w.sum())


def instance_shape(seed: int) -> tuple[int, int]:
    """Shapes for the 200-instance suite: seed 0 is 1x1, seed 19 is 20x20."""
    return 1 + seed % 20, 1 + (seed + seed // 20) % 20


def suite_instance(seed: int) -> RatioMatrix:
    rows, cols = instance_shape(seed)
    return random_instance(rows, cols, 1.0, 10.0, seed)


def random_mixed(labels, seed: int) -> MixedStrategy:
    return random_distribution(labels, XorShift64Star(seed))
