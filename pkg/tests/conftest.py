import numpy as np
import pytest

from mlspectral.graph import LayerGraph


def graph_from_edges(n, edges, weight=1.0):
    W = np.zeros((n, n))
    for i, j in edges:
        W[i, j] = W[j, i] = weight
    return LayerGraph(W)


def random_graph(rng, n, p=0.5, connected=True):
    """Weighted Erdos-Renyi graph; a random spanning path is added when ``connected``."""
    W = np.triu(rng.random((n, n)) < p, 1) * rng.uniform(0.1, 2.0, (n, n))
    if connected:
        perm = rng.permutation(n)
        for a, b in zip(perm[:-1], perm[1:]):
            i, j = min(a, b), max(a, b)
            if W[i, j] == 0:
                W[i, j] = rng.uniform(0.1, 2.0)
    W = np.triu(W, 1)
    return LayerGraph(W + W.T)


@pytest.fixture
def two_triangles():
    return graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def two_cliques_bridge():
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i, j) for i in range(4, 8) for j in range(i + 1, 8)]
    edges.append((3, 4))
    return graph_from_edges(8, edges)


@pytest.fixture
def path3():
    return graph_from_edges(3, [(0, 1), (1, 2)])
