"""Social-network graph container: loading, probability models, node costs.

The graph is an immutable weighted digraph. Undirected input is stored as two
directed arcs per edge, both carrying the same influence probability. Node
labels from edge-list files are remapped to dense ids 0..n-1 in order of first
appearance; the original labels are kept for export.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_PROBABILITY = 0.1
TRIVALENCY_VALUES = (0.1, 0.01, 0.001)


class EdgeListParseError(ValueError):
    """Raised when an edge-list line cannot be parsed."""

    def __init__(self, line_number: int, text: str):
        self.line_number = line_number
        self.text = text
        super().__init__(f"line {line_number}: cannot parse edge {text!r}")


class Graph:
    """Immutable digraph with per-arc influence probability.

    Arcs are kept both as a canonical edge list (one entry per input edge,
    even for undirected graphs) and as a CSR adjacency over the stored arcs
    (two per edge when undirected). `m` counts canonical edges; `arc_count`
    counts stored arcs.
    """

    __slots__ = (
        "directed", "n", "labels",
        "edge_src", "edge_dst", "edge_prob",
        "indptr", "arc_src", "arc_dst", "arc_prob",
        "self_loops_skipped", "duplicates_skipped",
        "__weakref__",
    )

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        directed: bool = True,
        labels: Sequence[int] | None = None,
        self_loops_skipped: int = 0,
        duplicates_skipped: int = 0,
    ):
        if n < 1:
            raise ValueError("graph needs at least one node")
        edges = list(edges)
        src = np.array([e[0] for e in edges], dtype=np.int64)
        dst = np.array([e[1] for e in edges], dtype=np.int64)
        prob = np.array([e[2] for e in edges], dtype=np.float64)
        if len(edges):
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (src == dst).any():
                raise ValueError("self-loops are not allowed")
            if (prob <= 0).any() or (prob > 1).any():
                raise ValueError("edge probabilities must lie in (0, 1]")
            key = src * n + dst if directed else np.minimum(src, dst) * n + np.maximum(src, dst)
            if len(np.unique(key)) != len(key):
                raise ValueError("duplicate edges are not allowed")

        self.directed = directed
        self.n = n
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise ValueError("labels length must equal n")
        self.edge_src = src
        self.edge_dst = dst
        self.edge_prob = prob
        self.self_loops_skipped = self_loops_skipped
        self.duplicates_skipped = duplicates_skipped

        if directed:
            a_src, a_dst, a_prob = src, dst, prob
        else:
            a_src = np.concatenate([src, dst])
            a_dst = np.concatenate([dst, src])
            a_prob = np.concatenate([prob, prob])
        order = np.argsort(a_src, kind="stable")
        self.arc_src = np.ascontiguousarray(a_src[order])
        self.arc_dst = np.ascontiguousarray(a_dst[order])
        self.arc_prob = np.ascontiguousarray(a_prob[order])
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.arc_src, minlength=n), out=self.indptr[1:])
        for arr in (self.edge_src, self.edge_dst, self.edge_prob,
                    self.arc_src, self.arc_dst, self.arc_prob, self.indptr):
            arr.setflags(write=False)

    @property
    def m(self) -> int:
        """Number of canonical edges (undirected edges count once)."""
        return len(self.edge_src)

    @property
    def arc_count(self) -> int:
        return len(self.arc_src)

    def successors(self, u: int) -> np.ndarray:
        return self.arc_dst[self.indptr[u]:self.indptr[u + 1]]

    def total_degrees(self) -> np.ndarray:
        """Total degree per node: in+out for directed graphs, neighbor count
        for undirected ones (each edge counted once per endpoint)."""
        out = np.diff(self.indptr)
        if self.directed:
            return out + np.bincount(self.arc_dst, minlength=self.n)
        return out

    def with_edge_probabilities(self, per_edge: np.ndarray) -> "Graph":
        per_edge = np.asarray(per_edge, dtype=np.float64)
        if per_edge.shape != (self.m,):
            raise ValueError("need one probability per canonical edge")
        edges = zip(self.edge_src.tolist(), self.edge_dst.tolist(), per_edge.tolist())
        return Graph(self.n, edges, directed=self.directed, labels=self.labels,
                     self_loops_skipped=self.self_loops_skipped,
                     duplicates_skipped=self.duplicates_skipped)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind})"


def load_edge_list(
    source: Union[str, Path, io.TextIOBase],
    directed: bool = True,
    default_probability: float = DEFAULT_PROBABILITY,
) -> Graph:
    """Load a whitespace-separated "u v" edge list (SNAP convention).

    Lines starting with '#' are comments. Node labels are remapped to dense
    ids in first-appearance order. Self-loops are skipped and duplicate arcs
    deduplicated; both are tallied on the returned graph.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh, directed, default_probability)

    ids: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    self_loops = 0
    duplicates = 0
    for line_number, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_number, raw.rstrip("\n"))
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_number, raw.rstrip("\n")) from None
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append((u, v))
    if not ids:
        raise ValueError("edge list holds no nodes")

    labels = [0] * len(ids)
    for label, dense in ids.items():
        labels[dense] = label
    return Graph(
        len(ids),
        ((u, v, default_probability) for u, v in edges),
        directed=directed,
        labels=labels,
        self_loops_skipped=self_loops,
        duplicates_skipped=duplicates,
    )


def save_edge_list(graph: Graph, target: Union[str, Path, io.TextIOBase]) -> None:
    """Write the canonical edges back out as "u v" lines with original labels."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            save_edge_list(graph, fh)
            return
    labels = graph.labels
    for u, v in zip(graph.edge_src.tolist(), graph.edge_dst.tolist()):
        target.write(f"{labels[u]} {labels[v]}\n")


def assign_uniform_probability(graph: Graph, p: float) -> Graph:
    """Give every arc the same influence probability p, 0 < p <= 1."""
    if not 0 < p <= 1:
        raise ValueError(f"uniform probability must lie in (0, 1], got {p}")
    return graph.with_edge_probabilities(np.full(graph.m, p))


def assign_trivalency(graph: Graph, seed: int) -> Graph:
    """Draw each edge's probability uniformly from {0.1, 0.01, 0.001}.

    The draw is per canonical edge, so both arcs of an undirected edge share
    one value. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    values = rng.choice(np.array(TRIVALENCY_VALUES), size=graph.m)
    return graph.with_edge_probabilities(values)


class CostTable:
    """Per-node selection cost in money units."""

    __slots__ = ("costs", "scale")

    def __init__(self, costs: np.ndarray, scale: float):
        self.costs = np.asarray(costs, dtype=np.float64)
        self.costs.setflags(write=False)
        self.scale = float(scale)
        if (self.costs < 0).any():
            raise ValueError("node costs must be non-negative")

    def __getitem__(self, u: int) -> float:
        return float(self.costs[u])

    def __len__(self) -> int:
        return len(self.costs)

    def total(self) -> float:
        return float(self.costs.sum())


def degree_proportional_costs(graph: Graph, scale: float = 1000.0) -> CostTable:
    """Cost each node proportionally to its total degree.

    cost(u) = scale * n * deg(u) / sum(deg), which makes the costs add up to
    scale * n exactly. Requires at least one edge.
    """
    if scale < 0:
        raise ValueError("cost scale must be non-negative")
    deg = graph.total_degrees().astype(np.float64)
    total = deg.sum()
    if total == 0:
        raise ZeroDivisionError("degree-proportional costs need at least one edge")
    return CostTable(scale * graph.n * deg / total, scale)
