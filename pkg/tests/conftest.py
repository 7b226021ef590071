import itertools

import numpy as np
import pytest

from spectralpart import Graph, Partition


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_cliques(k: int, size: int) -> tuple[Graph, Partition]:
    edges = []
    for c in range(k):
        base = c * size
        edges.extend((base + i, base + j)
                     for i in range(size) for j in range(i + 1, size))
    return Graph(k * size, edges), Partition(k, np.repeat(np.arange(k), size))


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def two_triangles_bridge() -> tuple[Graph, Partition]:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge edge (2,3)."""
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
    return g, Partition(2, [0, 0, 0, 1, 1, 1])


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph | None:
    """One attempt at a connected min-degree-1 random graph; None on failure."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    deg = np.zeros(n, dtype=int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if np.any(deg == 0):
        return None
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != n:
        return None
    return Graph(n, edges)
