"""Shared fixtures and tiny hand-built instances used across the suite."""

import numpy as np
import pytest

from farfirst.graphs import Graph, make_graph


def path_graph(n: int, w: float = 1.0) -> Graph:
    return make_graph(n, [(i, i + 1, w) for i in range(n - 1)])


def complete_graph(n: int, w: float = 1.0) -> Graph:
    return make_graph(n, [(i, j, w) for i in range(n) for j in range(i + 1, n)])


def star_graph(n: int, w: float = 1.0) -> Graph:
    # vertex 0 is the hub
    return make_graph(n, [(0, i, w) for i in range(1, n)])


@pytest.fixture
def path4() -> Graph:
    return path_graph(4)


@pytest.fixture
def k3() -> Graph:
    return complete_graph(3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1729)


def point_distances(coords: np.ndarray) -> np.ndarray:
    from scipy.spatial.distance import pdist, squareform

    return squareform(pdist(np.asarray(coords, dtype=np.float64)))


def mst_bottleneck_matrix(dm: np.ndarray) -> np.ndarray:
    """All-pairs minimax path cost over the complete graph given by dm.

    Kruskal order: merging components in ascending edge order makes the
    merging edge the bottleneck for every newly joined pair.
    """
    from scipy.sparse.csgraph import minimum_spanning_tree

    n = dm.shape[0]
    mst = minimum_spanning_tree(dm).tocoo()
    edges = sorted(zip(mst.data, mst.row, mst.col))
    out = np.zeros((n, n))
    comp = {i: [i] for i in range(n)}
    root = list(range(n))
    for w, u, v in edges:
        ru, rv = root[u], root[v]
        if len(comp[ru]) < len(comp[rv]):
            ru, rv = rv, ru
        a = np.asarray(comp[ru])
        b = np.asarray(comp[rv])
        out[np.ix_(a, b)] = w
        out[np.ix_(b, a)] = w
        comp[ru].extend(comp[rv])
        for x in comp[rv]:
            root[x] = ru
        del comp[rv]
    return out
