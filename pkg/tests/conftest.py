"""Shared fixtures and independent oracles used across the test suite.

The oracles here deliberately avoid the library's own algorithms: path
statistics come from exhaustive simple-path enumeration, modularity from a
naive double loop, and best partitions from enumerating all set
partitions. They are slow and only used on tiny graphs.
"""

from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "ggmnet" / "fixtures"


@pytest.fixture
def table1_path() -> Path:
    return FIXTURES / "table1_synthetic.csv"


@pytest.fixture
def bootstrap_fixture_path() -> Path:
    return FIXTURES / "bootstrap_synthetic.csv"


def random_network(p: int, rng: np.random.Generator, density: float = 0.5):
    """Random symmetric nonnegative adjacency with zero diagonal."""
    from ggmnet.netgraph import WeightedNetwork

    W = np.zeros((p, p))
    sign = np.zeros((p, p), dtype=int)
    for i in range(p):
        for j in range(i + 1, p):
            if rng.random() < density:
                W[i, j] = W[j, i] = rng.uniform(0.1, 2.0)
                s = 1 if rng.random() < 0.5 else -1
                sign[i, j] = sign[j, i] = s
    return WeightedNetwork(
        W=W, edge_sign=sign, node_labels=[f"V{i + 1}" for i in range(p)]
    )


def enumerate_simple_paths(W: np.ndarray, r: int, t: int):
    """All simple paths r -> t with their lengths (edge length = 1/weight)."""
    p = W.shape[0]
    paths = []

    def extend(path, length):
        u = path[-1]
        if u == t:
            paths.append((length, tuple(path)))
            return
        for v in range(p):
            if W[u, v] > 0 and v not in path:
                extend(path + [v], length + 1.0 / W[u, v])

    extend([r], 0.0)
    return paths


def oracle_path_stats(W: np.ndarray, r: int, t: int, rtol: float = 1e-9):
    """(shortest distance, count of shortest paths, shortest path node sets)."""
    if r == t:
        return 0.0, 1, [(r,)]
    paths = enumerate_simple_paths(W, r, t)
    if not paths:
        return np.inf, 0, []
    best = min(length for length, _ in paths)
    tol = rtol * max(1.0, best)
    shortest = [pth for length, pth in paths if length <= best + tol]
    return best, len(shortest), shortest


def oracle_betweenness(W: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Betweenness by exhaustive shortest-path enumeration, unordered pairs."""
    p = W.shape[0]
    B = np.zeros(p)
    for r in range(p):
        for t in range(r + 1, p):
            _, sigma, shortest = oracle_path_stats(W, r, t, rtol)
            if sigma == 0:
                continue
            for i in range(p):
                if i in (r, t):
                    continue
                through = sum(1 for pth in shortest if i in pth)
                B[i] += through / sigma
    return B


def oracle_modularity(W: np.ndarray, labels) -> float:
    """Naive double-loop Newman modularity."""
    p = W.shape[0]
    d = W.sum(axis=1)
    two_m = d.sum()
    Q = 0.0
    for i in range(p):
        for j in range(p):
            if labels[i] == labels[j]:
                Q += W[i, j] - d[i] * d[j] / two_m
    return Q / two_m


def all_partitions(items):
    """Every set partition of `items` (Bell-number many; keep items tiny)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in all_partitions(rest):
        for i, block in enumerate(partition):
            yield partition[:i] + [block + [first]] + partition[i + 1 :]
        yield partition + [[first]]


def best_partition_modularity(W: np.ndarray) -> float:
    """Exhaustive max-Q over all partitions of the node set."""
    p = W.shape[0]
    best = -np.inf
    for partition in all_partitions(range(p)):
        labels = np.empty(p, dtype=int)
        for c, block in enumerate(partition):
            labels[block] = c
        best = max(best, oracle_modularity(W, labels))
    return best
