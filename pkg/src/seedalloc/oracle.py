"""Exhaustive search for the least-regret allocation on tiny instances.

Every assignment of each node to one advertiser (or to none) is enumerated
under strict budget feasibility and exact influence, giving the ground truth
that the heuristics are tested against. Overdraft feasibility is
order-dependent and therefore has no well-defined search space, so the
search always runs strict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import CostTable, Graph
from .regret import Advertiser, RegretParams, regret

MAX_NODES = 8
MAX_ADVERTISERS = 3


class OracleLimitError(RuntimeError):
    """Raised when an instance is too large to enumerate."""


@dataclass(frozen=True)
class OracleResult:
    seed_sets: tuple[frozenset[int], ...]   # one per advertiser, input order
    optimal_regret: float
    feasible_examined: int


def brute_force_optimal(graph: Graph, costs: CostTable,
                        advertisers: Sequence[Advertiser], estimator,
                        params: RegretParams | None = None,
                        max_nodes: int = MAX_NODES,
                        max_advertisers: int = MAX_ADVERTISERS) -> OracleResult:
    """Minimum total regret over all strict-feasible disjoint assignments.

    Ties break toward the lexicographically smallest assignment vector,
    where digit 0 means unassigned and digit i means advertiser i (1-based),
    scanning nodes in id order.
    """
    params = params or RegretParams()
    n, count = graph.n, len(advertisers)
    if n > max_nodes:
        raise OracleLimitError(f"{n} nodes exceed the oracle limit of {max_nodes}")
    if count > max_advertisers:
        raise OracleLimitError(
            f"{count} advertisers exceed the oracle limit of {max_advertisers}")

    influence_cache: dict[frozenset[int], float] = {}

    def influence(nodes: frozenset[int]) -> float:
        value = influence_cache.get(nodes)
        if value is None:
            value = estimator.estimate(graph, sorted(nodes))
            influence_cache[nodes] = value
        return value

    best_regret = float("inf")
    best_sets: tuple[frozenset[int], ...] | None = None
    examined = 0
    assignment = [0] * n
    cost_arr = costs.costs

    def scan(position: int, spent: list[float]) -> None:
        nonlocal best_regret, best_sets, examined
        if position == n:
            examined += 1
            sets = tuple(
                frozenset(u for u in range(n) if assignment[u] == i + 1)
                for i in range(count))
            total = sum(
                regret(len(s), influence(s), adv, params).total
                for s, adv in zip(sets, advertisers))
            if total < best_regret:
                best_regret = total
                best_sets = sets
            return
        for choice in range(count + 1):
            if choice:
                adv = advertisers[choice - 1]
                price = cost_arr[position]
                if spent[choice - 1] + price > adv.budget + 1e-12:
                    continue
                spent[choice - 1] += price
            assignment[position] = choice
            scan(position + 1, spent)
            if choice:
                spent[choice - 1] -= cost_arr[position]
        assignment[position] = 0

    scan(0, [0.0] * count)
    assert best_sets is not None
    return OracleResult(best_sets, best_regret, examined)
