"""Experiment harness: configuration, sweeps, CSV output, oracle checks.

A run sweeps the Cartesian product of the configured parameter lists over a
single graph and probability setting. Advertiser populations are generated
per (sweep point, repetition) and shared by all algorithms at that point, so
the algorithms compete on identical inputs. All randomness is derived from
the master seed, which makes a run a pure function of its configuration.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import allocators
from .allocators import ALGORITHMS, AllocatorConfig
from .graph import (
    Graph,
    assign_trivalency,
    assign_uniform_probability,
    degree_proportional_costs,
    load_edge_list,
)
from .influence import ExactEstimator, MonteCarloEstimator, singleton_supply
from .oracle import brute_force_optimal
from .regret import Advertiser, RegretParams
from .scenario import (
    ScenarioError,
    ScenarioParams,
    advertiser_count_for_ratio,
    generate_advertisers,
    median_unit_price,
)

UNIFORM = "uniform"
TRIVALENCY = "trivalency"

# Purpose tags feeding the seed mixer, so the derived streams never collide.
_SCENARIO, _ALLOCATOR, _ESTIMATOR, _PROBABILITY = 0, 1, 2, 3

CSV_COLUMNS = [
    "dataset", "probability", "demand_supply", "mean_demand", "advertisers",
    "gamma", "delta", "tolerance", "algorithm", "repetition", "seed",
    "total_regret", "excessive_regret", "unsatisfied_regret", "eliminated",
    "runtime_seconds", "error",
]


def mix_seed(*parts: int) -> int:
    """Deterministically mix integers into a fresh 64-bit seed."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0])


def _resolve_mean_demand(entry) -> tuple[float, int]:
    if isinstance(entry, dict):
        ratio = float(entry["ratio"])
        count = entry.get("count")
        return ratio, advertiser_count_for_ratio(
            ratio, int(count) if count is not None else None)
    ratio = float(entry)
    return ratio, advertiser_count_for_ratio(ratio)


@dataclass
class ExperimentConfig:
    graph_path: str
    directed: bool = True
    probability: str = UNIFORM
    p: float = 0.1
    cost_scale: float = 1000.0
    demand_supply: list = field(default_factory=lambda: [1.0])
    mean_demand: list = field(
        default_factory=lambda: [{"ratio": 0.05, "count": 20}])
    gamma: list = field(default_factory=lambda: [0.5])
    delta: list = field(default_factory=lambda: [0.01])
    tolerance: list = field(default_factory=lambda: [1])
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    samples: int = 100
    repetitions: int = 5
    master_seed: int = 0
    budget_mode: str = allocators.OVERDRAFT
    aea_comparator: str = allocators.STRICT_GREATER
    adls_threshold: str = allocators.MEAN
    elimination_accounting: str = allocators.EXCLUDE
    estimator_workers: int = 1
    timing: bool = True
    demand_spread: float = 0.5
    payment_factor: tuple = (0.8, 1.2)

    def __post_init__(self):
        for name in ("demand_supply", "mean_demand", "gamma", "delta",
                     "tolerance", "algorithms"):
            if not getattr(self, name):
                raise ValueError(f"sweep list {name!r} must be non-empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.probability not in (UNIFORM, TRIVALENCY):
            raise ValueError(f"unknown probability setting {self.probability!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")

    @classmethod
    def from_json(cls, source) -> "ExperimentConfig":
        if isinstance(source, (str, Path)):
            with open(source, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            data = json.load(source)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "payment_factor" in data:
            data["payment_factor"] = tuple(data["payment_factor"])
        return cls(**data)

    @property
    def dataset(self) -> str:
        return Path(self.graph_path).stem

    def sweep_points(self) -> list[dict]:
        points = []
        for ds in self.demand_supply:
            for entry in self.mean_demand:
                ratio, count = _resolve_mean_demand(entry)
                for g in self.gamma:
                    for d in self.delta:
                        for k in self.tolerance:
                            points.append({
                                "demand_supply": float(ds),
                                "mean_demand": ratio,
                                "advertisers": count,
                                "gamma": float(g),
                                "delta": float(d),
                                "tolerance": int(k),
                            })
        return points


@dataclass
class ResultRow:
    dataset: str
    probability: str
    demand_supply: float
    mean_demand: float
    advertisers: int
    gamma: float
    delta: float
    tolerance: int
    algorithm: str
    repetition: int
    seed: int
    total_regret: float | None
    excessive_regret: float | None
    unsatisfied_regret: float | None
    eliminated: int | None
    runtime_seconds: float | None
    error: str = ""

    def to_csv_row(self) -> list[str]:
        def num(x, pattern="{:.10g}"):
            return "" if x is None else pattern.format(x)
        return [
            self.dataset, self.probability,
            num(self.demand_supply), num(self.mean_demand),
            str(self.advertisers), num(self.gamma), num(self.delta),
            str(self.tolerance), self.algorithm, str(self.repetition),
            str(self.seed), num(self.total_regret), num(self.excessive_regret),
            num(self.unsatisfied_regret),
            "" if self.eliminated is None else str(self.eliminated),
            num(self.runtime_seconds, "{:.6f}"), self.error,
        ]


def write_csv(rows: Iterable[ResultRow], target) -> None:
    """Write rows as UTF-8 CSV with LF line endings."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
            return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.to_csv_row())


def load_experiment_graph(config: ExperimentConfig) -> Graph:
    graph = load_edge_list(config.graph_path, directed=config.directed)
    if config.probability == UNIFORM:
        return assign_uniform_probability(graph, config.p)
    return assign_trivalency(graph, mix_seed(config.master_seed, _PROBABILITY))


def _failure_rows(config: ExperimentConfig, reason: str) -> list[ResultRow]:
    rows = []
    for point in config.sweep_points():
        for algorithm in config.algorithms:
            for rep in range(config.repetitions):
                rows.append(ResultRow(
                    dataset=config.dataset, probability=config.probability,
                    demand_supply=point["demand_supply"],
                    mean_demand=point["mean_demand"],
                    advertisers=point["advertisers"], gamma=point["gamma"],
                    delta=point["delta"], tolerance=point["tolerance"],
                    algorithm=algorithm, repetition=rep, seed=0,
                    total_regret=None, excessive_regret=None,
                    unsatisfied_regret=None, eliminated=None,
                    runtime_seconds=None, error=reason))
    return rows


def run_experiment(config: ExperimentConfig, graph: Graph | None = None
                   ) -> list[ResultRow]:
    """Execute the full sweep and return one row per
    (sweep point, algorithm, repetition), with failures recorded in place."""
    if graph is None:
        try:
            graph = load_experiment_graph(config)
        except (OSError, ValueError) as exc:
            return _failure_rows(config, f"graph not loadable: {exc}")
    costs = degree_proportional_costs(graph, config.cost_scale)
    estimator = MonteCarloEstimator(
        samples=config.samples,
        base_seed=mix_seed(config.master_seed, _ESTIMATOR),
        workers=config.estimator_workers)
    singletons = estimator.singletons(graph)
    supply = singleton_supply(estimator, graph)
    unit_price = median_unit_price(costs, singletons)

    scenarios: dict[tuple[int, int], object] = {}

    def population(sp_index: int, point: dict, rep: int):
        key = (sp_index, rep)
        if key not in scenarios:
            seed = mix_seed(config.master_seed, _SCENARIO, sp_index, rep)
            try:
                params = ScenarioParams(
                    demand_supply_ratio=point["demand_supply"],
                    mean_demand_ratio=point["mean_demand"],
                    advertisers=point["advertisers"],
                    demand_spread=config.demand_spread,
                    payment_low=config.payment_factor[0],
                    payment_high=config.payment_factor[1],
                    seed=seed)
                scenarios[key] = (seed,
                                  generate_advertisers(supply, params, unit_price))
            except (ScenarioError, ValueError) as exc:
                scenarios[key] = (seed, exc)
        return scenarios[key]

    rows: list[ResultRow] = []
    for sp_index, point in enumerate(config.sweep_points()):
        alloc_config = AllocatorConfig(
            params=RegretParams(point["gamma"], point["delta"]),
            budget_mode=config.budget_mode,
            aea_comparator=config.aea_comparator,
            adls_threshold=config.adls_threshold,
            elimination_accounting=config.elimination_accounting)
        for algorithm in config.algorithms:
            for rep in range(config.repetitions):
                seed, outcome = population(sp_index, point, rep)
                base = dict(
                    dataset=config.dataset, probability=config.probability,
                    demand_supply=point["demand_supply"],
                    mean_demand=point["mean_demand"],
                    advertisers=point["advertisers"], gamma=point["gamma"],
                    delta=point["delta"], tolerance=point["tolerance"],
                    algorithm=algorithm, repetition=rep, seed=seed)
                if isinstance(outcome, Exception):
                    rows.append(ResultRow(
                        **base, total_regret=None, excessive_regret=None,
                        unsatisfied_regret=None, eliminated=None,
                        runtime_seconds=None, error=str(outcome)))
                    continue
                try:
                    allocation = allocators.allocate(
                        algorithm, graph, costs, outcome, estimator,
                        alloc_config, tolerance=point["tolerance"],
                        seed=mix_seed(config.master_seed, _ALLOCATOR,
                                      sp_index, rep,
                                      ALGORITHMS.index(algorithm)
                                      if algorithm in ALGORITHMS else 0))
                    excessive, unsatisfied = allocation.buckets()
                    rows.append(ResultRow(
                        **base,
                        total_regret=excessive + unsatisfied,
                        excessive_regret=excessive,
                        unsatisfied_regret=unsatisfied,
                        eliminated=allocation.eliminated_count,
                        runtime_seconds=allocation.seconds
                        if config.timing else 0.0,
                        error=""))
                except Exception as exc:
                    rows.append(ResultRow(
                        **base, total_regret=None, excessive_regret=None,
                        unsatisfied_regret=None, eliminated=None,
                        runtime_seconds=None, error=str(exc)))
    return rows


def graph_stats(graph: Graph) -> dict:
    deg = graph.total_degrees()
    return {
        "nodes": graph.n,
        "edges": graph.m,
        "avg_degree": 2.0 * graph.m / graph.n,
        "max_degree": int(deg.max()) if graph.n else 0,
        "self_loops_skipped": graph.self_loops_skipped,
        "duplicates_skipped": graph.duplicates_skipped,
    }


def _random_check_instance(seed: int, nodes: int = 6, advertisers: int = 2,
                           arcs: int = 8):
    """Small random instance for the oracle cross-check."""
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(nodes) for v in range(nodes) if u != v]
    idx = rng.choice(len(pairs), size=min(arcs, len(pairs)), replace=False)
    edges = [(pairs[i][0], pairs[i][1],
              float(rng.choice([0.2, 0.5, 0.8]))) for i in idx]
    graph = Graph(nodes, edges, directed=True)
    costs = degree_proportional_costs(graph, scale=2.0)
    advs = []
    for i in range(advertisers):
        demand = float(rng.integers(1, nodes))
        budget = float(np.round(rng.uniform(1.0, 2.5) * demand, 2))
        advs.append(Advertiser(i, demand, budget))
    return graph, costs, advs


def oracle_check(seed: int = 0, nodes: int = 6, advertisers: int = 2,
                 algorithms: Sequence[str] = ("bg", "aea", "adls",
                                              "random", "topk")
                 ) -> tuple[str, bool]:
    """Run every heuristic in strict mode against the exhaustive optimum.

    Heuristic totals are charged the full budget for eliminated advertisers
    so they are comparable with the oracle's all-advertisers objective.
    Returns a printable report and whether the lower bound held everywhere.
    """
    graph, costs, advs = _random_check_instance(seed, nodes, advertisers)
    estimator = ExactEstimator()
    params = RegretParams(0.5, 0.01)
    config = AllocatorConfig(params=params,
                             budget_mode=allocators.STRICT,
                             elimination_accounting=allocators.CHARGE_FULL_BUDGET)
    result = brute_force_optimal(graph, costs, advs, estimator, params)
    lines = [
        f"instance: {graph.n} nodes, {graph.m} arcs, {len(advs)} advertisers "
        f"(seed {seed})",
        f"oracle optimum: {result.optimal_regret:.6f} "
        f"({result.feasible_examined} feasible selections)",
    ]
    ok = True
    for name in algorithms:
        allocation = allocators.allocate(name, graph, costs, advs, estimator,
                                         config, tolerance=1,
                                         seed=mix_seed(seed, _ALLOCATOR))
        total = allocation.total_regret()
        gap = total - result.optimal_regret
        verdict = "ok" if gap >= -1e-9 else "BELOW ORACLE (bug)"
        if gap < -1e-9:
            ok = False
        lines.append(f"  {name:>6}: total {total:.6f}  gap {gap:+.6f}  {verdict}")
    return "\n".join(lines), ok
