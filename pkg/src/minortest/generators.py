"""Seeded instance families with attached ground truth.

Every generator is deterministic in (params, seed) and returns the graph
plus a metadata dict that downstream tests re-verify on components small
enough for the exact oracles.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .certificates import MinorWitness, Pattern, star_pattern
from .errors import PreconditionError
from .graphcore import Graph
from .oracles import witness_from_branch_sets, whole_adj
from .rng import Rng, derive_seed


@dataclass
class InstanceSpec:
    family: str
    n: int
    d: int
    seed: int
    eps: Optional[float] = None
    k: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def gen_forest(n: int, d: int, seed: int) -> tuple[Graph, dict]:
    """A random forest with max degree <= d (yes-instance for cycle tests)."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    rng = Rng(derive_seed(seed, 0xF02E57))
    deg = [0] * (n + 1)
    edges = []
    for v in range(2, n + 1):
        if rng.below(5) == 0:
            continue  # start a new tree
        for _ in range(8):
            u = 1 + rng.below(v - 1)
            if deg[u] < d - 1:
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
                break
    g = Graph.from_edges(n, d, edges)
    return g, {"family": "forest", "distance_to_cycle_free": 0}


def gen_far_from_cycle_free(n: int, d: int, eps: float, seed: int) -> tuple[Graph, dict]:
    """Connected graph with exactly ceil(eps*d*n) independent cycles, so its
    distance to cycle-freeness is ceil(eps*d*n) by the forest formula."""
    extra = math.ceil(eps * d * n)
    if eps < 0 or extra > (d - 2) * n / 2:
        raise PreconditionError("eps*d*n must be at most (d-2)*n/2")
    rng = Rng(derive_seed(seed, 0xFA2))
    deg = [0] * (n + 1)
    edges = set()
    # attach v=2..n to a random smaller vertex with spare tree capacity;
    # capacity d-1 in the tree phase reserves a slot for the surplus edges
    for v in range(2, n + 1):
        for _ in range(40 * n):
            u = 1 + rng.below(v - 1)
            if deg[u] >= d - 1:
                continue
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
            break
        else:
            raise PreconditionError("could not thread a bounded-degree spanning tree")
    added = 0
    attempts = 0
    while added < extra:
        attempts += 1
        if attempts > 200 * (extra + 1) + 10000:
            raise PreconditionError("degree bound too tight for the requested surplus")
        u = 1 + rng.below(n)
        v = 1 + rng.below(n)
        if u == v:
            continue
        a, b = min(u, v), max(u, v)
        if (a, b) in edges or deg[a] >= d or deg[b] >= d:
            continue
        edges.add((a, b))
        deg[a] += 1
        deg[b] += 1
        added += 1
    g = Graph.from_edges(n, d, sorted(edges))
    return g, {"family": "far_from_cycle_free", "distance_to_cycle_free": extra,
               "eps_lower_bound": extra / (d * n)}


def gen_lower_bound_family(n: int, seed: int) -> tuple[Graph, dict]:
    """Hamiltonian cycle (1..n) plus a uniform random perfect matching that
    avoids cycle edges and self-pairs; 3-regular."""
    if n % 2:
        raise PreconditionError("n must be even")
    rng = Rng(derive_seed(seed, 0x10B))
    cycle_edges = {(i, i + 1) for i in range(1, n)} | {(1, n)}
    while True:
        pool = list(range(1, n + 1))
        rng.shuffle(pool)
        pairs = [(pool[2 * i], pool[2 * i + 1]) for i in range(n // 2)]
        bad = [p for p in pairs if (min(p), max(p)) in cycle_edges]
        if not bad:
            matching = [(min(a, b), max(a, b)) for a, b in pairs]
            break
    g = Graph.from_edges(n, 3, sorted(cycle_edges | set(matching)))
    delta = g.num_edges - n + len(g.components())
    return g, {"family": "lower_bound", "distance_to_cycle_free": delta,
               "eps_lower_bound": delta / (3 * n)}


def gen_planted_minor(base: Graph, pattern: Pattern, seed: int) -> tuple[Graph, dict, MinorWitness]:
    """Append a disjoint copy of the pattern and hook it to the base by one
    edge at a vertex with spare degree; the witness is the planted copy."""
    max_pat_deg = max((pattern.degree(v) for v in range(1, pattern.n + 1)), default=0)
    if max_pat_deg > base.d:
        raise PreconditionError("pattern degree exceeds the degree bound")
    rng = Rng(derive_seed(seed, 0x91A))
    n0 = base.n
    edges = [(e.u, e.v) for e in base.edges()]
    for a, b in pattern.edges:
        edges.append((n0 + a, n0 + b))
    # hook through a pattern vertex with spare degree, if the base allows
    hook_from = [v for v in range(1, n0 + 1) if base.degree(v) < base.d]
    hook_to = [v for v in range(1, pattern.n + 1) if pattern.degree(v) < base.d]
    if hook_from and hook_to:
        edges.append((hook_from[rng.below(len(hook_from))],
                      n0 + hook_to[rng.below(len(hook_to))]))
    g = Graph.from_edges(n0 + pattern.n, base.d, edges)
    branch = {v: frozenset([n0 + v]) for v in range(1, pattern.n + 1)}
    wit = witness_from_branch_sets(whole_adj(g), pattern, branch)
    return g, {"family": "planted_minor", "pattern_n": pattern.n}, wit


def gen_clique_plus_cycle(n: int, isolated_variant: bool = False) -> tuple[Graph, dict]:
    """Disjoint union of C_{n-sqrt(n)} with K_{sqrt(n)} (or with sqrt(n)
    isolated vertices): the unbounded-model lower-bound pair."""
    r = math.isqrt(n)
    if r * r != n or r < 4:
        raise PreconditionError("n must be a perfect square with sqrt(n) >= 4")
    m = n - r
    edges = [(i, i + 1) for i in range(1, m)] + [(1, m)]
    if not isolated_variant:
        for i in range(m + 1, n + 1):
            for j in range(i + 1, n + 1):
                edges.append((i, j))
    d = 2 if isolated_variant else r - 1
    g = Graph.from_edges(n, d, edges)
    return g, {"family": "clique_plus_cycle", "isolated_variant": isolated_variant,
               "cycle_len": m, "clique_size": 0 if isolated_variant else r}


def gen_disjoint_cycles(n: int, k: int, d: int, seed: int,
                        linked: bool = True) -> tuple[Graph, dict]:
    """Vertex-disjoint cycles of length exactly k, optionally joined by tree
    paths through the leftover vertices; each cycle forces one removal, so
    the distance to C_k-minor-freeness is at least floor(n/(k+1))."""
    if k < 3 or d < 3:
        raise PreconditionError("need k >= 3 and d >= 3")
    blocks = n // (k + 1) if linked else n // k
    if blocks < 1:
        raise PreconditionError("n too small for one cycle")
    edges = []
    anchors_out = []
    anchors_in = []
    v = 1
    for _ in range(blocks):
        cyc = list(range(v, v + k))
        for i in range(k - 1):
            edges.append((cyc[i], cyc[i + 1]))
        edges.append((cyc[0], cyc[-1]))
        anchors_out.append(cyc[0])  # distinct attach points keep degree <= 3
        anchors_in.append(cyc[1])
        v += k
    spare = list(range(v, n + 1))
    if linked:
        for i in range(blocks - 1):
            if spare:
                mid = spare.pop(0)
                edges.append((anchors_out[i], mid))
                edges.append((mid, anchors_in[i + 1]))
            else:
                edges.append((anchors_out[i], anchors_in[i + 1]))
        prev = anchors_out[-1]
        for w in spare:
            edges.append((prev, w))
            prev = w
    else:
        prev = None
        for w in spare:
            if prev is not None:
                edges.append((prev, w))
            prev = w
    g = Graph.from_edges(n, d, edges)
    return g, {"family": "disjoint_cycles", "k": k, "num_cycles": blocks,
               "distance_lower_bound": blocks,
               "eps_lower_bound": blocks / (d * n)}


def gen_planted_blocks(n: int, d: int, tree_pattern: Pattern, block: int,
                       seed: int) -> tuple[Graph, dict]:
    """Disconnected blocks of `block` vertices, each containing the tree
    pattern as a subgraph padded with a random path; far from pattern-free
    when blocks are many."""
    if tree_pattern.n > block:
        raise PreconditionError("block smaller than the pattern")
    max_pat_deg = max((tree_pattern.degree(v) for v in range(1, tree_pattern.n + 1)), default=0)
    if max_pat_deg + 1 > d:
        raise PreconditionError("pattern degree too large for the bound")
    blocks = n // block
    edges = []
    for b in range(blocks):
        base = b * block
        for u, w in tree_pattern.edges:
            edges.append((base + u, base + w))
        # pad: a path hanging off pattern vertex 1
        prev = base + 1
        for x in range(tree_pattern.n + 1, block + 1):
            edges.append((prev, base + x))
            prev = base + x
    g = Graph.from_edges(n, d, edges)
    return g, {"family": "planted_blocks", "blocks": blocks, "block_size": block}


def gen_pattern_free(n: int, d: int, kind: str, seed: int,
                     k: Optional[int] = None) -> tuple[Graph, dict]:
    """Certified pattern-minor-free families.

    kind: 'path' (K_{1,3}-minor-free), 'star' (P_3-minor-free K_{1,m}),
    'matching' (P_2-minor-free), 'disjoint_triangles' (C_4-minor-free),
    'spiders' (P_k-minor-free for k above twice the leg length).
    """
    if kind == "path":
        g = Graph.from_edges(n, d, [(i, i + 1) for i in range(1, n)])
        meta = {"free_of": "K_{1,3}"}
    elif kind == "star":
        m = n - 1
        g = Graph.from_edges(n, max(d, m), [(1, i) for i in range(2, n + 1)])
        meta = {"free_of": "P_3"}
    elif kind == "matching":
        g = Graph.from_edges(n, d, [(2 * i + 1, 2 * i + 2) for i in range(n // 2)])
        meta = {"free_of": "P_2"}
    elif kind == "disjoint_triangles":
        blocks = n // 3
        edges = []
        for b in range(blocks):
            x = 3 * b + 1
            edges += [(x, x + 1), (x + 1, x + 2), (x, x + 2)]
        g = Graph.from_edges(n, d, edges)
        meta = {"free_of": "C_4"}
    elif kind == "spiders":
        if k is None:
            raise PreconditionError("spiders family needs k")
        leg = max(1, (k - 1) // 2 - 1)  # legs short enough to exclude P_k
        edges = []
        v = 1
        while v + 3 * leg <= n:
            center = v
            w = v + 1
            for _ in range(3):
                prev = center
                for _ in range(leg):
                    edges.append((prev, w))
                    prev = w
                    w += 1
            v = w
        g = Graph.from_edges(n, d, edges)
        meta = {"free_of": f"P_{k}", "leg": leg}
    else:
        raise PreconditionError(f"unknown pattern-free family {kind!r}")
    meta["family"] = f"free_{kind}"
    return g, meta
