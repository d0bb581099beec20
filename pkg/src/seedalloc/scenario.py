"""Advertiser population generation against a measured influence supply.

Total demand is pinned to demand_supply_ratio * supply (the binding
constraint); the mean-demand ratio fixes the advertiser count through the
preset pairing and seeds the per-advertiser jitter. Budgets are drawn
proportionally to demand at a unit price expressing money per unit of
influence, so populations stay commensurate with the node cost scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regret import Advertiser

# Mean-demand ratio to advertiser count, as used by the replication presets.
PRESET_COUNTS = {0.10: 100, 0.30: 50, 0.50: 20, 0.70: 10, 0.90: 5}


class ScenarioError(ValueError):
    """Raised when a population cannot be generated from the parameters."""


@dataclass(frozen=True)
class ScenarioParams:
    demand_supply_ratio: float      # total demand as a fraction of supply
    mean_demand_ratio: float        # average per-advertiser demand fraction
    advertisers: int
    demand_spread: float = 0.5      # demand jitter factors in 1 +/- spread
    payment_low: float = 0.8        # payment factor range around unit price
    payment_high: float = 1.2
    seed: int = 0

    def __post_init__(self):
        if self.demand_supply_ratio <= 0:
            raise ValueError("demand-supply ratio must be positive")
        if self.mean_demand_ratio <= 0:
            raise ValueError("mean demand ratio must be positive")
        if self.advertisers < 1:
            raise ValueError("need at least one advertiser")
        if not 0 <= self.demand_spread < 1:
            raise ValueError("demand spread must lie in [0, 1)")
        if not 0 < self.payment_low <= self.payment_high:
            raise ValueError("bad payment factor range")


def advertiser_count_for_ratio(mean_demand_ratio: float,
                               count: int | None = None) -> int:
    """Advertiser count paired with a mean-demand ratio.

    The preset ratios 10/30/50/70/90 percent map to 100/50/20/10/5
    advertisers; any other ratio needs an explicit count.
    """
    if count is not None:
        if count < 1:
            raise ValueError("advertiser count must be positive")
        return count
    for ratio, paired in PRESET_COUNTS.items():
        if math.isclose(mean_demand_ratio, ratio, rel_tol=0, abs_tol=1e-9):
            return paired
    raise ValueError(
        f"no preset advertiser count for mean-demand ratio {mean_demand_ratio}; "
        "pass the count explicitly")


def median_unit_price(costs, singleton_influences) -> float:
    """Median cost per unit of singleton influence over influential nodes."""
    cost_arr = np.asarray(getattr(costs, "costs", costs), dtype=np.float64)
    infl = np.asarray(singleton_influences, dtype=np.float64)
    mask = infl > 0
    if not mask.any():
        raise ScenarioError("no node with positive singleton influence")
    return float(np.median(cost_arr[mask] / infl[mask]))


def generate_advertisers(supply: float, params: ScenarioParams,
                         unit_price: float = 1.0) -> list[Advertiser]:
    """Draw a population whose demands add up to the configured total.

    Raw demands are jittered around the mean-demand level, then apportioned
    (largest remainder, each at least 1) so they sum exactly to
    floor(demand_supply_ratio * supply). Budgets are
    floor(factor * unit_price * demand), clipped to at least 1.
    """
    if supply <= 0:
        raise ScenarioError("supply must be positive")
    if unit_price <= 0:
        raise ScenarioError("unit price must be positive")
    count = params.advertisers
    target = math.floor(params.demand_supply_ratio * supply)
    if count > target:
        raise ScenarioError(
            f"cannot give {count} advertisers a demand of at least 1 "
            f"from a total demand of {target}")
    rng = np.random.default_rng(params.seed)
    jitter = rng.uniform(1.0 - params.demand_spread,
                         1.0 + params.demand_spread, size=count)
    raw = jitter * params.mean_demand_ratio * supply

    extra = target - count
    share = raw / raw.sum() * extra
    base = np.floor(share).astype(np.int64)
    remainder = extra - int(base.sum())
    if remainder:
        order = np.lexsort((np.arange(count), -(share - base)))
        base[order[:remainder]] += 1
    demands = base + 1

    factors = rng.uniform(params.payment_low, params.payment_high, size=count)
    budgets = np.maximum(1, np.floor(factors * unit_price * demands))
    return [Advertiser(i, float(demands[i]), float(budgets[i]))
            for i in range(count)]
