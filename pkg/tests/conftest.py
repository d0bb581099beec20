import numpy as np
import pytest

from seedalloc import Advertiser, CostTable, ExactEstimator, Graph


def random_tiny_instance(rng, max_nodes=7, advertisers=2, max_arcs=10):
    """Random strict-feasible instance small enough for exact influence."""
    n = int(rng.integers(4, max_nodes + 1))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    count = int(rng.integers(2, min(max_arcs, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=count, replace=False)
    edges = [(pairs[i][0], pairs[i][1], float(rng.choice([0.2, 0.5, 0.8])))
             for i in chosen]
    graph = Graph(n, edges, directed=True)
    costs = CostTable(rng.uniform(0.5, 2.0, size=n), scale=0.0)
    advs = []
    for i in range(advertisers):
        demand = float(rng.integers(1, max(2, n - 1)))
        budget = float(np.round(rng.uniform(0.8, 3.0) * demand, 3))
        advs.append(Advertiser(i, demand, budget))
    return graph, costs, advs


@pytest.fixture
def exact_estimator():
    return ExactEstimator()
