import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rotorcut import Graph


def complete_graph(n):
    return Graph(n, [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def complete_bipartite(a, b):
    return Graph(a + b, [(i, a + j, 1.0) for i in range(a) for j in range(b)])


def cube_graph():
    # vertices are 3-bit strings; edges join strings at Hamming distance 1
    edges = []
    for u in range(8):
        for bit in (1, 2, 4):
            v = u ^ bit
            if u < v:
                edges.append((u, v, 1.0))
    return Graph(8, edges)


def petersen_graph():
    edges = [(i, (i + 1) % 5, 1.0) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5, 1.0) for i in range(5)]
    edges += [(i, 5 + i, 1.0) for i in range(5)]
    return Graph(10, edges)


@pytest.fixture(scope="session")
def k3():
    return complete_graph(3)


@pytest.fixture(scope="session")
def k4():
    return complete_graph(4)


@pytest.fixture(scope="session")
def c4():
    return cycle_graph(4)


@pytest.fixture(scope="session")
def c5():
    return cycle_graph(5)


@pytest.fixture(scope="session")
def petersen():
    return petersen_graph()


@pytest.fixture(scope="session")
def small_suite():
    """The unit-weight certification suite with brute-force-known optima."""
    return {
        "K3": complete_graph(3),
        "K4": complete_graph(4),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "C6": cycle_graph(6),
        "K33": complete_bipartite(3, 3),
        "Q3": cube_graph(),
        "Petersen": petersen_graph(),
    }
