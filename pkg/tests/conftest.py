import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from treewave import PotentialProfile, interval, star, two_level_tree


@pytest.fixture
def star123():
    """3-star, lengths (1,2,3), q=0, root at the length-3 leg."""
    return star([1.0, 2.0, 3.0])


@pytest.fixture
def single_edge():
    return interval(1.0)


@pytest.fixture
def five_edge():
    return two_level_tree()


FIVE_EDGE_QS = [1.0, 0.5, 0.8, 0.3, 0.6]


@pytest.fixture
def five_edge_q():
    return two_level_tree(qs=[PotentialProfile.constant(c) for c in FIVE_EDGE_QS])
