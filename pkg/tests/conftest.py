import numpy as np
import pytest

from coarsescope import Cover, load_space, path_graph_space


@pytest.fixture
def p10():
    return path_graph_space(10)


@pytest.fixture
def p10_two_cover(p10):
    """Two overlapping intervals on the 10-vertex path: elements 0-5 and 4-9."""
    ids = list(p10.ids)
    return Cover(p10, {"L": frozenset(ids[:6]), "R": frozenset(ids[4:])})


@pytest.fixture
def line20():
    return load_space(
        {
            "format": "euclidean",
            "ids": [str(i).zfill(2) for i in range(20)],
            "data": [[float(i)] for i in range(20)],
        }
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
