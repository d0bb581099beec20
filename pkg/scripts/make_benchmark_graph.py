"""Regenerate data/core500.txt, the committed 500-node benchmark graph.

Directed and sparse, resembling the periphery of an institutional
communication network once its dense core is removed: 500 nodes, small
in/out degrees (capped at 5), every node attached by at least one arc.
"""

import sys
from collections import Counter
from pathlib import Path

import numpy as np

N = 500
TARGET_ARCS = 420
DEGREE_CAP = 5
SEED = 20240817


def main(out_path: str) -> None:
    rng = np.random.default_rng(SEED)
    out_deg = rng.choice([0, 1, 2, 3, 4], size=N,
                         p=[0.40, 0.30, 0.17, 0.09, 0.04])
    while out_deg.sum() < TARGET_ARCS:
        out_deg[rng.integers(N)] += 1
    out_stubs = np.repeat(np.arange(N), out_deg)
    rng.shuffle(out_stubs)

    arcs: set[tuple[int, int]] = set()
    in_count: Counter[int] = Counter()
    targets = rng.permutation(N)
    t = 0
    for u in out_stubs.tolist():
        for _ in range(N):
            v = int(targets[t % N])
            t += 1
            if v != u and in_count[v] < DEGREE_CAP and (u, v) not in arcs:
                arcs.add((u, v))
                in_count[v] += 1
                break

    # attach isolated nodes as extra leaves of low in-degree nodes
    degree = Counter()
    for u, v in arcs:
        degree[u] += 1
        degree[v] += 1
    spares = [v for v in range(N) if in_count[v] < DEGREE_CAP]
    s = 0
    for u in range(N):
        if degree[u] == 0:
            while True:
                v = spares[s % len(spares)]
                s += 1
                if v != u and (u, v) not in arcs:
                    arcs.add((u, v))
                    degree[u] += 1
                    degree[v] += 1
                    in_count[v] += 1
                    break

    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# synthetic directed benchmark graph: {N} nodes, "
                 f"{len(arcs)} arcs, seed {SEED}\n")
        for u, v in sorted(arcs):
            fh.write(f"{u} {v}\n")
    print(f"wrote {len(arcs)} arcs to {path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/core500.txt")
