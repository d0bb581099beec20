"""Seed-set allocation across advertisers.

Five strategies produce pairwise-disjoint seed sets:

* ``bg_allocate``: budget-effective greedy. Advertisers are served in
  descending budget-per-demand order; each repeatedly takes the node with
  the best regret decrease per unit of singleton influence.
* ``aea_allocate``: repeats the greedy pass, dropping the least
  budget-effective unsatisfied advertiser while more than `tolerance`
  advertisers stay unsatisfied. Pool and budgets reset between passes.
* ``adls_allocate``: greedy pass, then a local-search pass that releases the
  seed sets of high-regret advertisers back into the pool and re-runs the
  greedy fill for them, keeping a new set only when it is not worse.
* ``random_allocate`` / ``topk_allocate``: baselines picking uniformly at
  random or by highest singleton influence, under the same stopping gates.

Budget handling is configurable. Overdraft mode (default) only requires a
positive remaining budget at selection time, so the final pick may exceed
it; strict mode admits only nodes that fit the remaining budget.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import CostTable, Graph
from .regret import (
    Advertiser,
    RegretBreakdown,
    RegretParams,
    EXCLUDE,
    CHARGE_FULL_BUDGET,
    regret,
    regret_buckets,
    regret_totals,
    total_regret,
)

OVERDRAFT = "overdraft"
STRICT = "strict"
STRICT_GREATER = "strict-greater"
GREATER_EQUAL = "greater-equal"
MEAN = "mean"
POSITIVE = "positive"
SERVED = "served"
ELIMINATED = "eliminated"

ALGORITHMS = ("bg", "aea", "adls", "random", "topk")


@dataclass(frozen=True)
class AllocatorConfig:
    params: RegretParams = field(default_factory=RegretParams)
    budget_mode: str = OVERDRAFT
    aea_comparator: str = STRICT_GREATER
    adls_threshold: str = MEAN
    elimination_accounting: str = EXCLUDE

    def __post_init__(self):
        if self.budget_mode not in (OVERDRAFT, STRICT):
            raise ValueError(f"unknown budget mode {self.budget_mode!r}")
        if self.aea_comparator not in (STRICT_GREATER, GREATER_EQUAL):
            raise ValueError(f"unknown tolerance comparator {self.aea_comparator!r}")
        if self.adls_threshold not in (MEAN, POSITIVE):
            raise ValueError(f"unknown threshold mode {self.adls_threshold!r}")
        if self.elimination_accounting not in (EXCLUDE, CHARGE_FULL_BUDGET):
            raise ValueError(
                f"unknown elimination accounting {self.elimination_accounting!r}")


@dataclass(frozen=True)
class AllocationEntry:
    advertiser: Advertiser
    seeds: tuple[int, ...]
    spent: float
    influence: float
    breakdown: RegretBreakdown
    status: str = SERVED

    @property
    def eliminated(self) -> bool:
        return self.status == ELIMINATED

    @property
    def satisfied(self) -> bool:
        return not self.eliminated and self.influence >= self.advertiser.demand


@dataclass(frozen=True)
class Allocation:
    algorithm: str
    entries: tuple[AllocationEntry, ...]
    params: RegretParams
    budget_mode: str
    elimination_accounting: str
    seconds: float

    def entry(self, ident: int) -> AllocationEntry:
        for e in self.entries:
            if e.advertiser.ident == ident:
                return e
        raise KeyError(ident)

    @property
    def eliminated_count(self) -> int:
        return sum(1 for e in self.entries if e.eliminated)

    def total_regret(self, params: RegretParams | None = None,
                     accounting: str | None = None) -> float:
        return total_regret(self, params, accounting)

    def buckets(self, params: RegretParams | None = None,
                accounting: str | None = None) -> tuple[float, float]:
        return regret_buckets(self, params, accounting)

    def seed_sets(self) -> dict[int, frozenset[int]]:
        return {e.advertiser.ident: frozenset(e.seeds) for e in self.entries}


def _budget_order(advertisers: Sequence[Advertiser]) -> list[Advertiser]:
    return sorted(advertisers, key=lambda a: (-a.budget_per_demand, a.ident))


def _singleton_array(estimator, graph: Graph) -> np.ndarray:
    return np.asarray(estimator.singletons(graph), dtype=np.float64)


def _greedy_fill(graph, costs, estimator, advertiser, available, config,
                 singletons) -> tuple[list[int], float, float]:
    """Fill one advertiser's seed set from the shared pool, mutating it.

    Loop gates: demand unmet, remaining budget positive, pool non-empty.
    Candidates with zero singleton influence never enter the argmax, and in
    strict mode neither do unaffordable ones. Ties fall to the lowest node id.
    """
    cost_arr = costs.costs
    params = config.params
    seeds: list[int] = []
    influence = 0.0
    remaining = advertiser.budget
    while influence < advertiser.demand and remaining > 0 and available.any():
        cand = np.flatnonzero(available & (singletons > 0))
        if config.budget_mode == STRICT:
            cand = cand[cost_arr[cand] <= remaining]
        if cand.size == 0:
            break
        with_each = np.asarray(
            estimator.estimate_with_each(graph, seeds, cand), dtype=np.float64)
        base = regret(len(seeds), influence, advertiser, params).total
        totals = regret_totals(len(seeds) + 1, with_each, advertiser, params)
        best = int(np.argmax((base - totals) / singletons[cand]))
        node = int(cand[best])
        seeds.append(node)
        available[node] = False
        remaining -= cost_arr[node]
        influence = float(with_each[best])
    return seeds, influence, advertiser.budget - remaining


def _served_entry(advertiser, seeds, influence, spent, params) -> AllocationEntry:
    br = regret(len(seeds), influence, advertiser, params)
    return AllocationEntry(advertiser, tuple(seeds), spent, influence, br, SERVED)


def _eliminated_entry(advertiser, params) -> AllocationEntry:
    return AllocationEntry(advertiser, (), 0.0, 0.0,
                           regret(0, 0.0, advertiser, params), ELIMINATED)


def _bg_pass(graph, costs, advertisers, estimator, config,
             available: np.ndarray | None = None):
    singletons = _singleton_array(estimator, graph)
    if available is None:
        available = np.ones(graph.n, dtype=bool)
    entries: dict[int, AllocationEntry] = {}
    for adv in _budget_order(advertisers):
        seeds, influence, spent = _greedy_fill(
            graph, costs, estimator, adv, available, config, singletons)
        entries[adv.ident] = _served_entry(adv, seeds, influence, spent,
                                           config.params)
    return entries, available


def _finish(algorithm, advertisers, entries, config, started) -> Allocation:
    ordered = tuple(entries[a.ident] for a in advertisers)
    return Allocation(algorithm, ordered, config.params, config.budget_mode,
                      config.elimination_accounting,
                      time.perf_counter() - started)


def bg_allocate(graph: Graph, costs: CostTable, advertisers: Sequence[Advertiser],
                estimator, config: AllocatorConfig | None = None) -> Allocation:
    """Single budget-effective greedy pass over all advertisers."""
    config = config or AllocatorConfig()
    if not advertisers:
        raise ValueError("need at least one advertiser")
    started = time.perf_counter()
    entries, _ = _bg_pass(graph, costs, advertisers, estimator, config)
    return _finish("bg", advertisers, entries, config, started)


def aea_allocate(graph: Graph, costs: CostTable, advertisers: Sequence[Advertiser],
                 estimator, config: AllocatorConfig | None = None,
                 tolerance: int = 1) -> Allocation:
    """Greedy with elimination of the least budget-effective unsatisfied
    advertisers until at most `tolerance` of them remain unsatisfied.

    Each outer round restarts from a full node pool and full budgets. With
    the default strict-greater comparator a round ends the loop as soon as
    the unsatisfied count is at most `tolerance`.
    """
    config = config or AllocatorConfig()
    if not advertisers:
        raise ValueError("need at least one advertiser")
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    started = time.perf_counter()
    survivors = list(advertisers)
    dropped: list[Advertiser] = []
    entries: dict[int, AllocationEntry] = {}
    while True:
        entries, _ = _bg_pass(graph, costs, survivors, estimator, config)
        unsatisfied = [a for a in survivors
                       if entries[a.ident].influence < a.demand]
        count = len(unsatisfied)
        over = count > tolerance if config.aea_comparator == STRICT_GREATER \
            else count >= tolerance
        if not unsatisfied or not over:
            break
        victim = min(unsatisfied, key=lambda a: (a.budget_per_demand, a.ident))
        survivors.remove(victim)
        dropped.append(victim)
    for adv in dropped:
        entries[adv.ident] = _eliminated_entry(adv, config.params)
    return _finish("aea", advertisers, entries, config, started)


def adls_allocate(graph: Graph, costs: CostTable, advertisers: Sequence[Advertiser],
                  estimator, config: AllocatorConfig | None = None) -> Allocation:
    """Greedy pass followed by local reallocation of high-regret advertisers.

    High-regret advertisers (above the mean regret, or simply positive in
    "positive" threshold mode) release their seed sets into the pool and are
    refilled in budget-effectiveness order. A refill is kept only when its
    regret does not exceed the first-pass regret. Should a rejected refill be
    unable to take its old set back because another accepted refill claimed
    part of it, the whole local-search phase is rolled back, so the result
    never regresses below the plain greedy pass.
    """
    config = config or AllocatorConfig()
    if not advertisers:
        raise ValueError("need at least one advertiser")
    started = time.perf_counter()
    singletons = _singleton_array(estimator, graph)
    entries, available = _bg_pass(graph, costs, advertisers, estimator, config)

    totals = {a.ident: entries[a.ident].breakdown.total for a in advertisers}
    if config.adls_threshold == MEAN:
        tau = sum(totals.values()) / len(advertisers)
    else:
        tau = 0.0
    high = [a for a in advertisers if totals[a.ident] > tau]
    if high:
        for adv in high:
            available[list(entries[adv.ident].seeds)] = True
        refills: dict[int, AllocationEntry] = {}
        for adv in _budget_order(high):
            seeds, influence, spent = _greedy_fill(
                graph, costs, estimator, adv, available, config, singletons)
            refills[adv.ident] = _served_entry(adv, seeds, influence, spent,
                                               config.params)
        accepted = {a.ident for a in high
                    if refills[a.ident].breakdown.total <= totals[a.ident]}
        claimed: set[int] = set()
        for ident in accepted:
            claimed.update(refills[ident].seeds)
        rollback = any(
            set(entries[a.ident].seeds) & claimed
            for a in high if a.ident not in accepted)
        if not rollback:
            for ident in accepted:
                entries[ident] = refills[ident]
    return _finish("adls", advertisers, entries, config, started)


def random_allocate(graph: Graph, costs: CostTable,
                    advertisers: Sequence[Advertiser], estimator,
                    config: AllocatorConfig | None = None,
                    seed: int = 0) -> Allocation:
    """Baseline: uniformly random picks under the greedy stopping gates."""
    config = config or AllocatorConfig()
    if not advertisers:
        raise ValueError("need at least one advertiser")
    started = time.perf_counter()
    rng = random.Random(seed)
    cost_arr = costs.costs
    available = np.ones(graph.n, dtype=bool)
    entries: dict[int, AllocationEntry] = {}
    for adv in _budget_order(advertisers):
        seeds: list[int] = []
        influence = 0.0
        remaining = adv.budget
        while influence < adv.demand and remaining > 0 and available.any():
            cand = np.flatnonzero(available)
            if config.budget_mode == STRICT:
                cand = cand[cost_arr[cand] <= remaining]
            if cand.size == 0:
                break
            node = int(cand[rng.randrange(cand.size)])
            seeds.append(node)
            available[node] = False
            remaining -= cost_arr[node]
            influence = float(estimator.estimate(graph, seeds))
        entries[adv.ident] = _served_entry(adv, seeds, influence,
                                           adv.budget - remaining, config.params)
    return _finish("random", advertisers, entries, config, started)


def topk_allocate(graph: Graph, costs: CostTable,
                  advertisers: Sequence[Advertiser], estimator,
                  config: AllocatorConfig | None = None) -> Allocation:
    """Baseline: repeatedly take the highest singleton-influence node left."""
    config = config or AllocatorConfig()
    if not advertisers:
        raise ValueError("need at least one advertiser")
    started = time.perf_counter()
    singletons = _singleton_array(estimator, graph)
    ranking = np.lexsort((np.arange(graph.n), -singletons))
    cost_arr = costs.costs
    available = np.ones(graph.n, dtype=bool)
    entries: dict[int, AllocationEntry] = {}
    for adv in _budget_order(advertisers):
        seeds: list[int] = []
        influence = 0.0
        remaining = adv.budget
        while influence < adv.demand and remaining > 0 and available.any():
            node = -1
            for u in ranking.tolist():
                if not available[u]:
                    continue
                if config.budget_mode == STRICT and cost_arr[u] > remaining:
                    continue
                node = u
                break
            if node < 0:
                break
            seeds.append(node)
            available[node] = False
            remaining -= cost_arr[node]
            influence = float(estimator.estimate(graph, seeds))
        entries[adv.ident] = _served_entry(adv, seeds, influence,
                                           adv.budget - remaining, config.params)
    return _finish("topk", advertisers, entries, config, started)


def allocate(algorithm: str, graph: Graph, costs: CostTable,
             advertisers: Sequence[Advertiser], estimator,
             config: AllocatorConfig | None = None, *,
             tolerance: int = 1, seed: int = 0) -> Allocation:
    """Dispatch by algorithm name; see ALGORITHMS for the valid names."""
    if algorithm == "bg":
        return bg_allocate(graph, costs, advertisers, estimator, config)
    if algorithm == "aea":
        return aea_allocate(graph, costs, advertisers, estimator, config, tolerance)
    if algorithm == "adls":
        return adls_allocate(graph, costs, advertisers, estimator, config)
    if algorithm == "random":
        return random_allocate(graph, costs, advertisers, estimator, config, seed)
    if algorithm == "topk":
        return topk_allocate(graph, costs, advertisers, estimator, config)
    raise ValueError(f"unknown algorithm {algorithm!r}")
