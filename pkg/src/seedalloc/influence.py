"""Expected-influence estimation under the independent cascade model.

Three interchangeable estimators:

* ``MonteCarloEstimator`` averages cascade sizes over R sampled arc
  realizations. Realization r is a pure function of (base seed, r): every
  arc is flipped up front, and the cascade from a seed set is exactly the
  set of nodes reachable over live arcs. This makes estimates deterministic,
  monotone across nested seed sets within a fixed realization set, and
  independent of any internal parallelism.
* ``ExactEstimator`` computes the expectation by enumerating every live-arc
  subset; it refuses graphs beyond a configurable arc limit.
* ``AdditiveEstimator`` ignores topology and sums a fixed per-node value
  table, which is how the bundled demo instance defines influence.

All estimators share the interface: ``estimate(graph, seeds)``,
``singletons(graph)``, and the batch helper ``estimate_with_each``.
"""

from __future__ import annotations

import threading
import weakref
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import Graph

# Dense per-realization reachability matrices are only kept when they fit
# comfortably in memory; beyond that estimates fall back to per-sample BFS.
DENSE_REACH_BYTES = 300_000_000


class ExactInfluenceLimitError(RuntimeError):
    """Raised when exact enumeration would exceed the configured arc limit."""


def _check_seeds(graph: Graph, seeds: Iterable[int]) -> list[int]:
    out = []
    for u in seeds:
        u = int(u)
        if not 0 <= u < graph.n:
            raise ValueError(f"node id {u} out of range for n={graph.n}")
        out.append(u)
    return out


class _Realizations:
    """Sampled live-arc masks (and optional reachability closures) for a graph."""

    def __init__(self, graph: Graph, samples: int, base_seed: int):
        self.samples = samples
        rows = []
        for r in range(samples):
            rng = np.random.default_rng(np.random.SeedSequence([base_seed, r]))
            rows.append(rng.random(graph.arc_count) < graph.arc_prob)
        self.live = np.array(rows, dtype=bool)
        self.reach: np.ndarray | None = None
        if samples * graph.n * graph.n <= DENSE_REACH_BYTES:
            self.reach = self._closures(graph)

    def _closures(self, graph: Graph) -> np.ndarray:
        n = graph.n
        reach = np.empty((self.samples, n, n), dtype=bool)
        eye = np.eye(n, dtype=bool)
        for r in range(self.samples):
            mat = eye.copy()
            live = self.live[r]
            mat[graph.arc_src[live], graph.arc_dst[live]] = True
            # Transitive closure by repeated squaring; counts stay well below
            # the float32 integer limit.
            while True:
                f = mat.astype(np.float32)
                nxt = (f @ f) > 0
                if nxt.sum() == mat.sum():
                    break
                mat = nxt
            reach[r] = mat
        return reach

    def cascade_size(self, graph: Graph, seeds: list[int], r: int) -> int:
        """BFS over live arcs of realization r (fallback when no closure)."""
        if self.reach is not None:
            return int(self.reach[r][seeds].any(axis=0).sum())
        live = self.live[r]
        active = np.zeros(graph.n, dtype=bool)
        active[seeds] = True
        frontier = list(seeds)
        while frontier:
            nxt = []
            for u in frontier:
                lo, hi = graph.indptr[u], graph.indptr[u + 1]
                hits = graph.arc_dst[lo:hi][live[lo:hi]]
                for v in hits.tolist():
                    if not active[v]:
                        active[v] = True
                        nxt.append(v)
            frontier = nxt
        return int(active.sum())


class MonteCarloEstimator:
    """Influence estimator averaging reach over seeded arc realizations."""

    def __init__(self, samples: int = 100, base_seed: int = 0, workers: int = 1):
        if samples < 1:
            raise ValueError("need at least one sample")
        self.samples = samples
        self.base_seed = base_seed
        self.workers = max(1, int(workers))
        self.evaluations = 0
        self._lock = threading.Lock()
        self._realizations: "weakref.WeakKeyDictionary[Graph, _Realizations]" = \
            weakref.WeakKeyDictionary()
        self._singletons: "weakref.WeakKeyDictionary[Graph, np.ndarray]" = \
            weakref.WeakKeyDictionary()

    def _bind(self, graph: Graph) -> _Realizations:
        with self._lock:
            real = self._realizations.get(graph)
            if real is None:
                real = _Realizations(graph, self.samples, self.base_seed)
                self._realizations[graph] = real
            return real

    def _count(self) -> None:
        with self._lock:
            self.evaluations += 1

    def sample_counts(self, graph: Graph, seeds: Iterable[int]) -> np.ndarray:
        """Activated-set size of every realization, as integers."""
        seeds = _check_seeds(graph, seeds)
        real = self._bind(graph)
        if not seeds:
            return np.zeros(self.samples, dtype=np.int64)
        if real.reach is not None:
            return real.reach[:, seeds, :].any(axis=1).sum(axis=1).astype(np.int64)
        if self.workers > 1:
            chunks = np.array_split(np.arange(self.samples), self.workers)
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                parts = pool.map(
                    lambda idx: [real.cascade_size(graph, seeds, r) for r in idx],
                    chunks)
            flat = [c for part in parts for c in part]
            return np.array(flat, dtype=np.int64)
        return np.array([real.cascade_size(graph, seeds, r)
                         for r in range(self.samples)], dtype=np.int64)

    def estimate(self, graph: Graph, seeds: Iterable[int]) -> float:
        counts = self.sample_counts(graph, seeds)
        self._count()
        return float(counts.sum()) / self.samples

    def estimate_with_each(self, graph: Graph, base: Sequence[int],
                           candidates: Sequence[int]) -> np.ndarray:
        """estimate(base + [u]) for every candidate u, sharing realizations."""
        base = _check_seeds(graph, base)
        cand = _check_seeds(graph, candidates)
        real = self._bind(graph)
        if real.reach is None:
            return np.array([self.estimate(graph, base + [u]) for u in cand])
        totals = np.zeros(len(cand), dtype=np.int64)
        for r in range(self.samples):
            covered = real.reach[r][base].any(axis=0) if base \
                else np.zeros(graph.n, dtype=bool)
            totals += (real.reach[r][cand] | covered).sum(axis=1)
        with self._lock:
            self.evaluations += len(cand)
        return totals / self.samples

    def singletons(self, graph: Graph) -> np.ndarray:
        """Cached I({u}) for every node, reused by Top-K and supply."""
        with self._lock:
            cached = self._singletons.get(graph)
        if cached is not None:
            return cached
        values = self.estimate_with_each(graph, [], list(range(graph.n)))
        values.setflags(write=False)
        with self._lock:
            self._singletons[graph] = values
        return values


def exact_influence(graph: Graph, seeds: Iterable[int], max_arcs: int = 16) -> float:
    """Expected cascade size by full enumeration of live-arc subsets.

    Sums Pr(subset) * |reachable from the seed set| over all 2^arcs
    realizations. Only meant for verification on tiny graphs.
    """
    if graph.arc_count > max_arcs:
        raise ExactInfluenceLimitError(
            f"{graph.arc_count} arcs exceed the exact limit of {max_arcs}")
    seeds = set(_check_seeds(graph, seeds))
    if not seeds:
        return 0.0
    arcs = list(zip(graph.arc_src.tolist(), graph.arc_dst.tolist()))
    probs = graph.arc_prob.tolist()
    a = len(arcs)
    total = 0.0
    for mask in range(1 << a):
        p = 1.0
        adj: dict[int, list[int]] = {}
        for i in range(a):
            if mask >> i & 1:
                p *= probs[i]
                adj.setdefault(arcs[i][0], []).append(arcs[i][1])
            else:
                p *= 1.0 - probs[i]
        active = set(seeds)
        frontier = list(seeds)
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj.get(u, ()):
                    if v not in active:
                        active.add(v)
                        nxt.append(v)
            frontier = nxt
        total += p * len(active)
    return total


class ExactEstimator:
    """Exact expectation with per-graph caching of subset reachability.

    Reachability within each live-arc subset is precomputed once per graph
    as bitmaps over the arc-endpoint nodes, so repeated queries (the oracle
    enumerates many seed sets) stay cheap.
    """

    def __init__(self, max_arcs: int = 16):
        self.max_arcs = max_arcs
        self.evaluations = 0
        self._tables: "weakref.WeakKeyDictionary[Graph, tuple]" = \
            weakref.WeakKeyDictionary()

    def _table(self, graph: Graph):
        cached = self._tables.get(graph)
        if cached is not None:
            return cached
        if graph.arc_count > self.max_arcs:
            raise ExactInfluenceLimitError(
                f"{graph.arc_count} arcs exceed the exact limit of {self.max_arcs}")
        nodes = sorted({*graph.arc_src.tolist(), *graph.arc_dst.tolist()})
        index = {u: i for i, u in enumerate(nodes)}
        k = len(nodes)
        arcs = [(index[u], index[v]) for u, v in
                zip(graph.arc_src.tolist(), graph.arc_dst.tolist())]
        arc_probs = graph.arc_prob.tolist()
        a = len(arcs)
        masks = 1 << a
        probs = np.empty(masks, dtype=np.float64)
        reach = np.zeros((masks, k), dtype=np.uint64)
        for mask in range(masks):
            p = 1.0
            adj = [0] * k
            for i in range(a):
                if mask >> i & 1:
                    p *= arc_probs[i]
                    adj[arcs[i][0]] |= 1 << arcs[i][1]
                else:
                    p *= 1.0 - arc_probs[i]
            probs[mask] = p
            closure = [1 << i | adj[i] for i in range(k)]
            changed = True
            while changed:
                changed = False
                for i in range(k):
                    acc = closure[i]
                    scan = acc
                    while scan:
                        j = (scan & -scan).bit_length() - 1
                        scan &= scan - 1
                        acc |= closure[j]
                    if acc != closure[i]:
                        closure[i] = acc
                        changed = True
            for i in range(k):
                reach[mask, i] = closure[i]
        table = (index, probs, reach)
        self._tables[graph] = table
        return table

    def estimate(self, graph: Graph, seeds: Iterable[int]) -> float:
        seeds = set(_check_seeds(graph, seeds))
        self.evaluations += 1
        if not seeds:
            return 0.0
        index, probs, reach = self._table(graph)
        inside = [index[u] for u in seeds if u in index]
        outside = len(seeds) - len(inside)
        if not inside:
            return float(len(seeds))
        union = np.zeros(len(probs), dtype=np.uint64)
        for i in inside:
            union |= reach[:, i]
        counts = np.bitwise_count(union).astype(np.float64)
        return float(probs @ counts) + outside

    def estimate_with_each(self, graph: Graph, base: Sequence[int],
                           candidates: Sequence[int]) -> np.ndarray:
        base = list(base)
        return np.array([self.estimate(graph, base + [u]) for u in candidates])

    def singletons(self, graph: Graph) -> np.ndarray:
        values = np.array([self.estimate(graph, [u]) for u in range(graph.n)])
        values.setflags(write=False)
        return values


class AdditiveEstimator:
    """Influence as a plain sum of fixed per-node values; topology is ignored."""

    def __init__(self, values: Mapping[int, float] | Sequence[float]):
        if isinstance(values, Mapping):
            self.values = {int(k): float(v) for k, v in values.items()}
        else:
            self.values = {i: float(v) for i, v in enumerate(values)}
        self.evaluations = 0

    def estimate(self, graph: Graph | None, seeds: Iterable[int]) -> float:
        self.evaluations += 1
        total = 0.0
        for u in seeds:
            if u not in self.values:
                raise ValueError(f"no influence value for node {u}")
            total += self.values[u]
        return total

    def estimate_with_each(self, graph: Graph | None, base: Sequence[int],
                           candidates: Sequence[int]) -> np.ndarray:
        start = self.estimate(graph, base)
        return np.array([start + self.values[u] if u in self.values
                         else self._missing(u) for u in candidates])

    def _missing(self, u: int) -> float:
        raise ValueError(f"no influence value for node {u}")

    def singletons(self, graph: Graph) -> np.ndarray:
        values = np.array([self.estimate(None, [u]) for u in range(graph.n)])
        values.setflags(write=False)
        return values


def load_additive_values(path) -> dict[int, float]:
    """Read a "node value" text table for the additive estimator."""
    values: dict[int, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            node, value = line.split()
            values[int(node)] = float(value)
    return values


def singleton_supply(estimator, graph: Graph) -> float:
    """Total influence the provider can sell: sum of all singleton estimates."""
    return float(estimator.singletons(graph).sum())
