"""Regret-aware seed-set allocation for multi-advertiser influence campaigns."""

from .graph import (
    CostTable,
    EdgeListParseError,
    Graph,
    assign_trivalency,
    assign_uniform_probability,
    degree_proportional_costs,
    load_edge_list,
    save_edge_list,
)
from .influence import (
    AdditiveEstimator,
    ExactEstimator,
    ExactInfluenceLimitError,
    MonteCarloEstimator,
    exact_influence,
    load_additive_values,
    singleton_supply,
)
from .regret import (
    Advertiser,
    RegretBreakdown,
    RegretParams,
    load_advertisers,
    marginal_decrease,
    regret,
    regret_buckets,
    save_advertisers,
    total_regret,
)
from .allocators import (
    ALGORITHMS,
    Allocation,
    AllocationEntry,
    AllocatorConfig,
    adls_allocate,
    aea_allocate,
    allocate,
    bg_allocate,
    random_allocate,
    topk_allocate,
)
from .scenario import (
    ScenarioError,
    ScenarioParams,
    advertiser_count_for_ratio,
    generate_advertisers,
    median_unit_price,
)
from .oracle import OracleLimitError, OracleResult, brute_force_optimal
from .harness import (
    ExperimentConfig,
    ResultRow,
    graph_stats,
    mix_seed,
    oracle_check,
    run_experiment,
    write_csv,
)

__version__ = "0.1.0"
