import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import gen


@pytest.fixture
def tri1():
    return gen.tri1()


@pytest.fixture
def part1():
    return gen.part1()
