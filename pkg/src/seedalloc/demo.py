"""Bundled 12-node demo instance with additive influence.

Twelve candidate seed nodes with fixed influence values and costs, six
advertisers with demands and budgets chosen so that the greedy allocator
serves the budget-effective ones exactly, over-serves a couple, and leaves
the two least budget-effective ones short. Used by the `replicate-example`
CLI command and by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocators import (
    Allocation,
    AllocatorConfig,
    adls_allocate,
    aea_allocate,
    bg_allocate,
)
from .graph import CostTable, Graph
from .influence import AdditiveEstimator
from .regret import Advertiser, RegretParams

NODE_VALUES = (4.0, 6.0, 5.0, 4.0, 5.0, 2.0, 3.0, 2.0, 3.0, 2.0, 2.0, 5.0)
NODE_COSTS = (6.0, 9.0, 7.5, 6.0, 7.5, 3.0, 4.5, 3.0, 4.5, 3.0, 3.0, 7.5)
DEMANDS = (10.0, 8.0, 6.0, 10.0, 9.0, 5.0)
BUDGETS = (18.0, 17.0, 10.0, 17.0, 11.0, 5.0)


def demo_instance():
    """(graph, costs, advertisers, estimator) for the bundled instance."""
    graph = Graph(len(NODE_VALUES), [], directed=True)
    costs = CostTable(np.array(NODE_COSTS), scale=0.0)
    advertisers = [Advertiser(i, DEMANDS[i], BUDGETS[i])
                   for i in range(len(DEMANDS))]
    estimator = AdditiveEstimator(NODE_VALUES)
    return graph, costs, advertisers, estimator


def demo_config() -> AllocatorConfig:
    return AllocatorConfig(params=RegretParams(gamma=0.5, delta=0.01))


@dataclass
class DemoReport:
    greedy: Allocation
    elimination: Allocation
    local_search: Allocation
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def run_demo_checks(tolerance: int = 1) -> DemoReport:
    """Run the three allocators on the demo instance and check the expected
    qualitative outcome. Exact seed sets are tie-dependent and not asserted."""
    graph, costs, advertisers, estimator = demo_instance()
    config = demo_config()
    greedy = bg_allocate(graph, costs, advertisers, estimator, config)
    elimination = aea_allocate(graph, costs, advertisers, estimator, config,
                               tolerance=tolerance)
    local_search = adls_allocate(graph, costs, advertisers, estimator, config)

    failures: list[str] = []

    def expect(condition: bool, message: str) -> None:
        if not condition:
            failures.append(message)

    order = [a.ident for a in sorted(
        advertisers, key=lambda a: (-a.budget_per_demand, a.ident))]
    expect(order == [1, 0, 3, 2, 4, 5],
           f"budget-effectiveness order was {order}")

    for ident in (0, 1):
        br = greedy.entry(ident).breakdown
        expect(br.total == 0.0,
               f"advertiser {ident}: expected zero regret, got {br.total}")
    for ident in (2, 3):
        br = greedy.entry(ident).breakdown
        expect(br.category in ("zero", "excessive"),
               f"advertiser {ident}: expected zero or excessive, got {br.category}")
    for ident in (4, 5):
        br = greedy.entry(ident).breakdown
        expect(br.category == "unsatisfied",
               f"advertiser {ident}: expected unsatisfied, got {br.category}")
    expect(greedy.entry(5).seeds == (),
           f"advertiser 5: expected an empty set, got {greedy.entry(5).seeds}")

    dropped = [e.advertiser.ident for e in elimination.entries if e.eliminated]
    expect(dropped == [5], f"expected advertiser 5 eliminated, got {dropped}")
    expect(elimination.entry(4).breakdown.category == "unsatisfied",
           "advertiser 4 should stay unsatisfied after elimination")

    expect(local_search.total_regret() <= greedy.total_regret() + 1e-12,
           "local search must not exceed the greedy regret "
           f"({local_search.total_regret()} > {greedy.total_regret()})")
    return DemoReport(greedy, elimination, local_search, failures)


def format_allocation(allocation: Allocation) -> str:
    lines = [f"{allocation.algorithm}  (total regret "
             f"{allocation.total_regret():.6f})"]
    for e in allocation.entries:
        seeds = "{" + ", ".join(str(u) for u in e.seeds) + "}"
        status = "eliminated" if e.eliminated else \
            ("satisfied" if e.satisfied else "unsatisfied")
        lines.append(
            f"  advertiser {e.advertiser.ident}: seeds={seeds} "
            f"influence={e.influence:g} demand={e.advertiser.demand:g} "
            f"spent={e.spent:g} budget={e.advertiser.budget:g} "
            f"regret={e.breakdown.total:.6f} ({e.breakdown.category}) {status}")
    return "\n".join(lines)
