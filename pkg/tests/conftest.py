import pytest

from minortest.graphcore import Graph


def triangle() -> Graph:
    return Graph.from_edges(3, 3, [(1, 2), (2, 3), (3, 1)])


def path_graph(n: int, d: int = 3) -> Graph:
    return Graph.from_edges(n, d, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int, d: int = 3) -> Graph:
    return Graph.from_edges(n, d, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def star_graph(k: int, d: int | None = None) -> Graph:
    return Graph.from_edges(k + 1, d if d is not None else k,
                            [(1, i) for i in range(2, k + 2)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, n - 1,
                            [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


@pytest.fixture
def tri():
    return triangle()
