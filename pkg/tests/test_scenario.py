import math

import numpy as np
import pytest

from seedalloc import (
    ScenarioError,
    ScenarioParams,
    advertiser_count_for_ratio,
    generate_advertisers,
    load_advertisers,
    median_unit_price,
    save_advertisers,
)


def params(ratio=1.0, mean=0.1, count=100, spread=0.5, seed=0, **kw):
    return ScenarioParams(ratio, mean, count, demand_spread=spread,
                          seed=seed, **kw)


def test_preset_pairing():
    assert advertiser_count_for_ratio(0.1) == 100
    assert advertiser_count_for_ratio(0.3) == 50
    assert advertiser_count_for_ratio(0.5) == 20
    assert advertiser_count_for_ratio(0.7) == 10
    assert advertiser_count_for_ratio(0.9) == 5
    assert advertiser_count_for_ratio(0.33, count=42) == 42
    with pytest.raises(ValueError):
        advertiser_count_for_ratio(0.33)
    with pytest.raises(ValueError):
        advertiser_count_for_ratio(0.1, count=0)


def test_no_jitter_splits_evenly():
    advs = generate_advertisers(100.0, params(mean=0.2, count=5, spread=0.0))
    assert [a.demand for a in advs] == [20.0] * 5
    assert sum(a.demand for a in advs) == 100


def test_demand_sum_hits_floored_target():
    rng = np.random.default_rng(1)
    for _ in range(50):
        supply = float(rng.uniform(50, 5000))
        ratio = float(rng.choice([0.4, 0.6, 0.8, 1.0, 1.2]))
        count = int(rng.integers(1, 30))
        target = math.floor(ratio * supply)
        if count > target:
            continue
        advs = generate_advertisers(supply, params(ratio=ratio, count=count,
                                                   seed=int(rng.integers(1e6))))
        total = sum(a.demand for a in advs)
        assert abs(total - target) <= 1
        assert all(a.demand >= 1 for a in advs)
        assert all(a.budget >= 1 for a in advs)


def test_excessive_regime():
    advs = generate_advertisers(100.0, params(ratio=1.2, mean=0.2, count=5))
    assert sum(a.demand for a in advs) == math.floor(1.2 * 100)


def test_generation_error_when_too_many_advertisers():
    with pytest.raises(ScenarioError):
        generate_advertisers(100.0, params(ratio=0.4, mean=0.1, count=100))


def test_supply_must_be_positive():
    with pytest.raises(ScenarioError):
        generate_advertisers(0.0, params())


def test_same_seed_same_population():
    a = generate_advertisers(500.0, params(count=20, seed=9), unit_price=3.0)
    b = generate_advertisers(500.0, params(count=20, seed=9), unit_price=3.0)
    c = generate_advertisers(500.0, params(count=20, seed=10), unit_price=3.0)
    assert [(x.demand, x.budget) for x in a] == [(x.demand, x.budget) for x in b]
    assert [(x.demand, x.budget) for x in a] != [(x.demand, x.budget) for x in c]


def test_budgets_follow_unit_price():
    advs = generate_advertisers(1000.0, params(count=10, seed=3),
                                unit_price=100.0)
    for a in advs:
        assert 0.8 * 100 * a.demand - 1 <= a.budget <= 1.2 * 100 * a.demand


def test_params_validation():
    with pytest.raises(ValueError):
        ScenarioParams(0.0, 0.1, 10)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 0.0, 10)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 0.1, 0)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 0.1, 10, demand_spread=1.0)
    with pytest.raises(ValueError):
        ScenarioParams(1.0, 0.1, 10, payment_low=0.0)


def test_median_unit_price():
    costs = np.array([10.0, 20.0, 30.0])
    singles = np.array([1.0, 2.0, 0.0])
    assert median_unit_price(costs, singles) == 10.0
    with pytest.raises(ScenarioError):
        median_unit_price(costs, np.zeros(3))


def test_population_round_trip(tmp_path):
    advs = generate_advertisers(300.0, params(count=7, seed=5), unit_price=2.0)
    path = tmp_path / "advertisers.txt"
    save_advertisers(advs, path)
    back = load_advertisers(path)
    assert [(a.ident, a.demand, a.budget) for a in back] == \
        [(a.ident, a.demand, a.budget) for a in advs]
