"""Provider-side regret for a single advertiser and for whole allocations.

Delivered influence I against demanded influence sigma splits into three
cases: under-delivery costs the pro-rata unpaid budget, over-delivery costs
the uncompensated surplus, exact delivery costs nothing. The first two cases
additionally pay a per-seed cardinality charge delta * |S|; the exact case
charges nothing at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .allocators import Allocation

ZERO = "zero"
EXCESSIVE = "excessive"
UNSATISFIED = "unsatisfied"

EXCLUDE = "exclude"
CHARGE_FULL_BUDGET = "charge-full-budget"


@dataclass(frozen=True)
class Advertiser:
    ident: int
    demand: float
    budget: float

    def __post_init__(self):
        if self.demand <= 0:
            raise ValueError("advertiser demand must be positive")
        if self.budget <= 0:
            raise ValueError("advertiser budget must be positive")

    @property
    def budget_per_demand(self) -> float:
        return self.budget / self.demand


@dataclass(frozen=True)
class RegretParams:
    gamma: float = 0.5   # fraction of pro-rata payment received when short
    delta: float = 0.01  # money charged per selected seed node

    def __post_init__(self):
        if not 0 <= self.gamma <= 1:
            raise ValueError("gamma must lie in [0, 1]")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


@dataclass(frozen=True)
class RegretBreakdown:
    category: str
    monetary: float
    cardinality: float

    @property
    def total(self) -> float:
        return self.monetary + self.cardinality


def regret(seed_set_size: int, influence: float, advertiser: Advertiser,
           params: RegretParams) -> RegretBreakdown:
    """Regret of serving `advertiser` with a set of the given size and influence.

    The influence comparison against the demand is exact; only an exactly met
    demand falls in the zero branch.
    """
    if influence < 0:
        raise ValueError("influence cannot be negative")
    sigma, budget = advertiser.demand, advertiser.budget
    if influence < sigma:
        monetary = budget * (1.0 - params.gamma * influence / sigma)
        return RegretBreakdown(UNSATISFIED, monetary, params.delta * seed_set_size)
    if influence > sigma:
        monetary = budget * (influence - sigma) / sigma
        return RegretBreakdown(EXCESSIVE, monetary, params.delta * seed_set_size)
    return RegretBreakdown(ZERO, 0.0, 0.0)


def regret_totals(seed_set_sizes: np.ndarray, influences: np.ndarray,
                  advertiser: Advertiser, params: RegretParams) -> np.ndarray:
    """Vectorized regret totals for one advertiser over candidate outcomes."""
    sizes = np.asarray(seed_set_sizes, dtype=np.float64)
    infl = np.asarray(influences, dtype=np.float64)
    sigma, budget = advertiser.demand, advertiser.budget
    short = budget * (1.0 - params.gamma * infl / sigma) + params.delta * sizes
    over = budget * (infl - sigma) / sigma + params.delta * sizes
    return np.where(infl < sigma, short, np.where(infl > sigma, over, 0.0))


def marginal_decrease(estimator, graph, seeds: Sequence[int], node: int,
                      advertiser: Advertiser, params: RegretParams) -> float:
    """Drop in regret from adding `node` to `seeds`; negative when it hurts."""
    seeds = list(seeds)
    if node in seeds:
        raise ValueError(f"node {node} is already selected")
    before = regret(len(seeds), estimator.estimate(graph, seeds),
                    advertiser, params).total
    after = regret(len(seeds) + 1, estimator.estimate(graph, seeds + [node]),
                   advertiser, params).total
    return before - after


def total_regret(allocation: "Allocation", params: RegretParams | None = None,
                 accounting: str | None = None) -> float:
    """Selection-wide regret: the sum over served advertisers.

    Eliminated advertisers contribute nothing under "exclude" accounting and
    their full budget under "charge-full-budget". Passing `params` re-prices
    the stored seed sets under different penalty ratios.
    """
    exc, uns = regret_buckets(allocation, params, accounting)
    return exc + uns


def regret_buckets(allocation: "Allocation", params: RegretParams | None = None,
                   accounting: str | None = None) -> tuple[float, float]:
    """(excessive, unsatisfied) regret sums, each bucket holding the full
    per-advertiser total of its branch including the cardinality charge."""
    params = params or allocation.params
    accounting = accounting or allocation.elimination_accounting
    if accounting not in (EXCLUDE, CHARGE_FULL_BUDGET):
        raise ValueError(f"unknown elimination accounting {accounting!r}")
    excessive = 0.0
    unsatisfied = 0.0
    for entry in allocation.entries:
        if entry.eliminated:
            if accounting == CHARGE_FULL_BUDGET:
                unsatisfied += entry.advertiser.budget
            continue
        br = regret(len(entry.seeds), entry.influence, entry.advertiser, params)
        if br.category == EXCESSIVE:
            excessive += br.total
        elif br.category == UNSATISFIED:
            unsatisfied += br.total
    return excessive, unsatisfied


def save_advertisers(advertisers: Iterable[Advertiser], path) -> None:
    """Write an "id demand budget" text table."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for adv in advertisers:
            fh.write(f"{adv.ident} {adv.demand:.10g} {adv.budget:.10g}\n")


def load_advertisers(path) -> list[Advertiser]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            ident, demand, budget = line.split()
            out.append(Advertiser(int(ident), float(demand), float(budget)))
    return out
