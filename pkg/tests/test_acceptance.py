"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line. Run with `pytest tests/test_acceptance.py -v -s`.
"""

import functools
import io
import time
from pathlib import Path

import numpy as np
import pytest

from seedalloc import (
    Advertiser,
    AllocatorConfig,
    CostTable,
    ExactEstimator,
    ExperimentConfig,
    Graph,
    MonteCarloEstimator,
    RegretParams,
    adls_allocate,
    aea_allocate,
    allocate,
    bg_allocate,
    brute_force_optimal,
    exact_influence,
    regret,
    run_experiment,
    write_csv,
)
from seedalloc.allocators import CHARGE_FULL_BUDGET, STRICT
from seedalloc.demo import demo_config, demo_instance

from conftest import random_tiny_instance

BENCH_GRAPH = Path(__file__).resolve().parent.parent / "data" / "core500.txt"


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] {name}: FAIL")
                raise
            print(f"[acceptance] {name}: PASS")
        return run
    return wrap


@criterion("worked example replication")
def test_worked_example_replication():
    started = time.perf_counter()
    graph, costs, advs, est = demo_instance()
    alloc = bg_allocate(graph, costs, advs, est, demo_config())
    assert alloc.entry(0).breakdown.total == 0.0
    assert alloc.entry(1).breakdown.total == 0.0
    assert not alloc.entry(0).eliminated and alloc.entry(0).satisfied
    assert not alloc.entry(1).eliminated and alloc.entry(1).satisfied
    assert alloc.entry(2).breakdown.category in ("zero", "excessive")
    assert alloc.entry(3).breakdown.category in ("zero", "excessive")
    assert alloc.entry(4).breakdown.category == "unsatisfied"
    assert alloc.entry(5).breakdown.category == "unsatisfied"
    assert alloc.entry(5).seeds == ()
    assert time.perf_counter() - started < 1.0


@criterion("listed-set regret arithmetic")
def test_listed_set_regret_arithmetic():
    # the four non-zero rows of the reference allocation, priced by hand
    graph, costs, advs, est = demo_instance()
    params = demo_config().params
    sets = {0: (2, 11), 1: (1, 5), 2: (3, 6), 3: (0, 4, 7), 4: (8, 9, 10),
            5: ()}
    totals = {}
    for ident, seeds in sets.items():
        infl = est.estimate(graph, list(seeds))
        totals[ident] = regret(len(seeds), infl, advs[ident], params).total
    assert totals[0] == 0.0
    assert totals[1] == 0.0
    assert totals[2] == pytest.approx(10 * (7 - 6) / 6 + 0.01 * 2, abs=1e-9)
    assert totals[3] == pytest.approx(17 * (11 - 10) / 10 + 0.01 * 3, abs=1e-9)
    assert totals[4] == pytest.approx(11 * (1 - 0.5 * 7 / 9) + 0.01 * 3,
                                      abs=1e-9)
    assert totals[5] == pytest.approx(5.0, abs=1e-9)
    expected_total = (10 / 6 + 0.02) + (1.7 + 0.03) \
        + (11 * 11 / 18 + 0.03) + 5.0
    assert sum(totals.values()) == pytest.approx(expected_total, abs=1e-9)
    assert sum(totals.values()) == pytest.approx(15.168889, abs=5e-7)


@criterion("elimination tolerance behavior")
def test_elimination_tolerance():
    graph, costs, advs, est = demo_instance()
    config = demo_config()
    k1 = aea_allocate(graph, costs, advs, est, config, tolerance=1)
    assert [e.advertiser.ident for e in k1.entries if e.eliminated] == [5]
    bg = bg_allocate(graph, costs, advs, est, config)
    for tolerance in (6, 7, 20):
        relaxed = aea_allocate(graph, costs, advs, est, config, tolerance)
        assert relaxed.eliminated_count == 0
        assert relaxed.seed_sets() == bg.seed_sets()


@criterion("local search never worse than greedy")
def test_local_search_never_worse():
    graph, costs, advs, est = demo_instance()
    config = demo_config()
    assert adls_allocate(graph, costs, advs, est, config).total_regret() \
        <= bg_allocate(graph, costs, advs, est, config).total_regret() + 1e-12
    rng = np.random.default_rng(2024)
    exact = ExactEstimator()
    violations = 0
    for trial in range(200):
        g, c, a = random_tiny_instance(rng, advertisers=3)
        cfg = AllocatorConfig(
            params=RegretParams(float(rng.uniform(0, 1)),
                                float(rng.uniform(0, 0.05))),
            adls_threshold="positive" if trial % 2 else "mean")
        if adls_allocate(g, c, a, exact, cfg).total_regret() > \
                bg_allocate(g, c, a, exact, cfg).total_regret() + 1e-9:
            violations += 1
    assert violations == 0


@criterion("exhaustive oracle lower bound")
def test_oracle_lower_bound():
    started = time.perf_counter()
    rng = np.random.default_rng(777)
    est = ExactEstimator()
    params = RegretParams(0.5, 0.01)
    config = AllocatorConfig(params=params, budget_mode=STRICT,
                             elimination_accounting=CHARGE_FULL_BUDGET)
    for trial in range(50):
        graph, costs, advs = random_tiny_instance(rng, max_nodes=7,
                                                  advertisers=2)
        optimum = brute_force_optimal(graph, costs, advs, est,
                                      params).optimal_regret
        for name in ("bg", "aea", "adls", "random", "topk"):
            total = allocate(name, graph, costs, advs, est, config,
                             tolerance=1, seed=trial).total_regret()
            assert total >= optimum - 1e-9
    assert time.perf_counter() - started < 60.0


@criterion("exact influence unit values and MC agreement")
def test_exact_influence_and_mc_agreement():
    started = time.perf_counter()
    single = Graph(2, [(0, 1, 0.5)])
    path = Graph(3, [(0, 1, 0.5), (1, 2, 0.5)])
    assert exact_influence(single, [0]) == pytest.approx(1.5, abs=1e-12)
    assert exact_influence(path, [0]) == pytest.approx(1.75, abs=1e-12)
    for graph, expected in ((single, 1.5), (path, 1.75)):
        mc = MonteCarloEstimator(samples=10_000, base_seed=20240817)
        counts = mc.sample_counts(graph, [0])
        se = counts.std(ddof=1) / np.sqrt(len(counts))
        assert abs(counts.mean() - expected) <= 3 * se
    assert time.perf_counter() - started < 5.0


@criterion("allocator invariants")
def test_allocator_invariants():
    rng = np.random.default_rng(99)
    est = ExactEstimator()

    for mode in ("overdraft", "strict"):
        for _ in range(20):
            graph, costs, advs = random_tiny_instance(rng, advertisers=3)
            config = AllocatorConfig(params=RegretParams(0.5, 0.01),
                                     budget_mode=mode)
            for name in ("bg", "aea", "adls", "random", "topk"):
                alloc = allocate(name, graph, costs, advs, est, config,
                                 tolerance=1, seed=5)
                sets = list(alloc.seed_sets().values())
                for i in range(len(sets)):
                    for j in range(i + 1, len(sets)):
                        assert not (sets[i] & sets[j])
                for e in alloc.entries:
                    if e.eliminated or not e.seeds:
                        continue
                    running = e.advertiser.budget
                    for u in e.seeds:
                        assert running > 0
                        running -= costs[u]
                    if mode == "strict":
                        assert e.spent <= e.advertiser.budget + 1e-9

    # regret non-negativity and gamma monotonicity on a parameter grid
    prev = None
    for gamma in np.linspace(0, 1, 9):
        for infl in (0.0, 2.0, 5.0, 7.5):
            br = regret(3, infl, Advertiser(0, 5.0, 7.0),
                        RegretParams(float(gamma), 0.02))
            assert br.total >= 0.0
        short = regret(3, 2.0, Advertiser(0, 5.0, 7.0),
                       RegretParams(float(gamma), 0.02)).total
        if prev is not None:
            assert short <= prev + 1e-12
        prev = short

    # joint money rescale (budgets, delta, costs) never moves the picks
    for _ in range(15):
        graph, costs, advs = random_tiny_instance(rng, advertisers=2)
        scale = float(2.0 ** rng.integers(-3, 6))
        base = bg_allocate(graph, costs, advs, est,
                           AllocatorConfig(params=RegretParams(0.5, 0.01)))
        scaled = bg_allocate(
            graph, CostTable(costs.costs * scale, 0.0),
            [Advertiser(a.ident, a.demand, a.budget * scale) for a in advs],
            est, AllocatorConfig(params=RegretParams(0.5, 0.01 * scale)))
        assert scaled.seed_sets() == base.seed_sets()

    # elimination terminates within the advertiser count
    for _ in range(10):
        graph, costs, advs = random_tiny_instance(rng, advertisers=3)
        alloc = aea_allocate(graph, costs, advs, est,
                             AllocatorConfig(params=RegretParams(0.5, 0.01)),
                             tolerance=0)
        assert alloc.eliminated_count <= len(advs)


@criterion("byte-identical experiment output")
def test_byte_identical_runs(tmp_path):
    rng = np.random.default_rng(31)
    n = 35
    pairs = sorted({(int(a), int(b)) for a, b in rng.integers(0, n, (80, 2))
                    if a != b})
    graph_path = tmp_path / "deterministic.txt"
    from seedalloc import save_edge_list
    save_edge_list(Graph(n, [(u, v, 0.1) for u, v in pairs]), graph_path)

    def run_once(workers):
        config = ExperimentConfig(
            graph_path=str(graph_path), directed=True, probability="uniform",
            p=0.1, cost_scale=100.0, demand_supply=[0.8, 1.2],
            mean_demand=[{"ratio": 0.2, "count": 4}], gamma=[0.5],
            delta=[0.01], tolerance=[1],
            algorithms=["bg", "aea", "adls", "random", "topk"],
            samples=40, repetitions=2, master_seed=77, timing=False,
            estimator_workers=workers)
        buf = io.StringIO()
        write_csv(run_experiment(config), buf)
        return buf.getvalue().encode()

    first, second, threaded = run_once(1), run_once(1), run_once(3)
    assert first == second
    assert first == threaded


@criterion("desk-scale demand-width trend")
def test_desk_scale_trend():
    started = time.perf_counter()
    config = ExperimentConfig(
        graph_path=str(BENCH_GRAPH), directed=True,
        probability="uniform", p=0.1, cost_scale=1000.0,
        demand_supply=[1.0],
        mean_demand=[0.1, 0.3, 0.5, 0.7, 0.9],
        gamma=[1.0], delta=[0.01], tolerance=[1],
        algorithms=["bg"], samples=100, repetitions=5, master_seed=20240817,
        payment_factor=(1.3, 1.7), timing=False)
    rows = run_experiment(config)
    assert all(not r.error for r in rows)
    means = []
    for ratio in (0.1, 0.3, 0.5, 0.7, 0.9):
        totals = [r.total_regret for r in rows if r.mean_demand == ratio]
        assert len(totals) == 5
        means.append(float(np.mean(totals)))
    violations = sum(1 for a, b in zip(means, means[1:]) if b > a)
    print(f"  mean regret by demand width: "
          + " ".join(f"{m:.0f}" for m in means)
          + f" ({violations} adjacent increases)")
    assert violations <= 1
    assert time.perf_counter() - started < 600.0
