import numpy as np
import pytest

from hkgnn.graphs import build_graph
from hkgnn.spectral import decompose_graph


def random_graph(rng, n, p=0.4, labels=False):
    """ER graph; optional random 2-class labels."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    lab = rng.integers(0, 2, size=n) if labels else None
    return build_graph(n, edges, labels=lab)


def random_connected_graph(rng, n, p=0.45):
    """Rejection-sample ER graphs until connected."""
    while True:
        g = random_graph(rng, n, p)
        if g.k_components == 1:
            return g


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def path3():
    return build_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def path3_decomp(path3):
    return decompose_graph(path3)
