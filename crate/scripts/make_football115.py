#!/usr/bin/env python3
"""Generate the football115 fixture: a synthetic college-football-style
network with 115 nodes, 613 edges, and 12 planted conferences.

The layout mirrors the well-known public benchmark's shape (same node and
edge counts, similar conference size distribution, one sparse
"independents"-style conference, planted modularity around 0.55) but the
wiring is synthetic and fully reproducible from the fixed seed below.

Run from the repository root:

    python3 scripts/make_football115.py

Writes data/football115.edges and data/football115.attrs.csv, validating
edge count, connectivity, minimum degree, and planted-partition modularity
before writing anything.
"""

import random
import sys
from collections import deque
from itertools import combinations
from pathlib import Path

SEED = 20260815
N_EDGES = 613
SIZES = [9, 8, 11, 12, 10, 5, 13, 8, 10, 12, 7, 10]
# Intra-conference edge targets; index 5 is the sparse independents-style
# conference. Complete subgraphs where target == C(size, 2).
INTRA = [36, 28, 40, 46, 30, 1, 48, 28, 36, 46, 21, 36]
INDEPENDENTS = 5
INTER_PER_INDEPENDENT = 10


def build(rng):
    assert sum(SIZES) == 115
    assert sum(INTRA) + (N_EDGES - sum(INTRA)) == N_EDGES
    conf_of = {}
    members = []
    next_id = 1
    for c, size in enumerate(SIZES):
        ids = list(range(next_id, next_id + size))
        next_id += size
        members.append(ids)
        for v in ids:
            conf_of[v] = c

    edges = set()

    def add(u, v):
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in edges:
            return False
        edges.add(key)
        return True

    # Intra-conference wiring: a cycle for connectivity, then random fill.
    # The independents conference gets a single internal edge instead.
    for c, ids in enumerate(members):
        target = INTRA[c]
        if target < len(ids):
            u, v = rng.sample(ids, 2)
            assert add(u, v)
            continue
        order = ids[:]
        rng.shuffle(order)
        for i, u in enumerate(order):
            add(u, order[(i + 1) % len(order)])
        pool = list(combinations(sorted(ids), 2))
        rng.shuffle(pool)
        for u, v in pool:
            if sum(1 for e in edges if conf_of[e[0]] == c and conf_of[e[1]] == c) >= target:
                break
            add(u, v)

    def intra_count(c):
        return sum(1 for u, v in edges if conf_of[u] == c and conf_of[v] == c)

    for c in range(len(SIZES)):
        assert intra_count(c) == INTRA[c], (c, intra_count(c), INTRA[c])

    # Inter-conference wiring. A conference ring keeps the graph connected,
    # independents get a fat share, the rest is uniform fill.
    n_conf = len(SIZES)
    for c in range(n_conf):
        while True:
            u = rng.choice(members[c])
            v = rng.choice(members[(c + 1) % n_conf])
            if add(u, v):
                break

    degree = {v: 0 for v in conf_of}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1

    for v in members[INDEPENDENTS]:
        while degree[v] < INTER_PER_INDEPENDENT + 1:
            w = rng.randrange(1, 116)
            if conf_of[w] != INDEPENDENTS and add(v, w):
                degree[v] += 1
                degree[w] += 1

    while len(edges) < N_EDGES:
        u = rng.randrange(1, 116)
        w = rng.randrange(1, 116)
        if conf_of[u] != conf_of[w] and add(u, w):
            degree[u] += 1
            degree[w] += 1

    return edges, conf_of, members


def validate(edges, conf_of):
    assert len(edges) == N_EDGES, len(edges)

    adjacency = {v: [] for v in conf_of}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    assert all(adjacency[v] for v in conf_of), "isolated node"

    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    assert len(seen) == 115, f"disconnected: reached {len(seen)}"

    # Planted-partition modularity: sum over conferences of
    # m_c/m - (d_c/2m)^2.
    m = len(edges)
    intra = [0] * len(SIZES)
    deg_sum = [0] * len(SIZES)
    for u, v in edges:
        if conf_of[u] == conf_of[v]:
            intra[conf_of[u]] += 1
    for v, neighbors in adjacency.items():
        deg_sum[conf_of[v]] += len(neighbors)
    q = sum(ic / m - (dc / (2 * m)) ** 2 for ic, dc in zip(intra, deg_sum))
    assert 0.50 <= q <= 0.62, f"planted modularity {q:.4f} out of range"
    return q


def main():
    rng = random.Random(SEED)
    edges, conf_of, members = build(rng)
    q = validate(edges, conf_of)

    root = Path(__file__).resolve().parent.parent
    edge_path = root / "data" / "football115.edges"
    attr_path = root / "data" / "football115.attrs.csv"

    with open(edge_path, "w") as fh:
        fh.write("# Synthetic 115-team football-style network, 12 planted conferences.\n")
        fh.write(f"# Generated by scripts/make_football115.py (seed {SEED}).\n")
        for u, v in sorted(edges):
            fh.write(f"{u}\t{v}\n")

    with open(attr_path, "w") as fh:
        fh.write("node,conference\n")
        for c, ids in enumerate(members):
            for v in ids:
                fh.write(f"{v},c{c + 1:02d}\n")

    print(f"wrote {edge_path.name} and {attr_path.name}; planted Q = {q:.4f}")


if __name__ == "__main__":
    sys.exit(main())
