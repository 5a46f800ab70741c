import numpy as np
import pytest

from wgdv.atlas import get_atlas
from wgdv.psn import psn_from_edges


@pytest.fixture(scope="session")
def atlas():
    return get_atlas()


def random_psn(rng: np.random.Generator, n: int, p: float, weights: str = "uniform"):
    """Erdos-Renyi graph with positive edge weights; may be disconnected."""
    edges = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < p:
                if weights == "uniform":
                    w = float(rng.uniform(0.2, 3.0))
                elif weights == "grid":
                    w = float(rng.integers(1, 33)) / 8.0
                elif weights == "unit":
                    w = 1.0
                else:
                    raise ValueError(weights)
                edges.append((i, j, w))
    return psn_from_edges(n, edges)
