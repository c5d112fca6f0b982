"""Unbounded-degree model: degree-oblivious star testing and the sqrt(N)
threshold experiment.

Distance here is measured against 2|E| (edge fraction), and degree queries
are first-class.  Cycle testing in this model is test_cycle_free_direct,
which never consults the degree bound.
"""
from __future__ import annotations

import math
from typing import Optional

from .certificates import Verdict, star_pattern, verify_certificate
from .config import DEFAULT, Config
from .errors import PreconditionError
from .graphcore import CanonicalEdge, Graph, QueryOracle, canonical_edge
from .oracles import witness_from_branch_sets
from .rng import Rng, derive_seed
from .trees import probe_neighbors, star_minor_witness, _star_witness_to_minor
from .errors import SearchBudgetExceeded


class EdgeSampler:
    """Near-uniform edge sampling by rejection against the running maximum
    degree.

    Exactly uniform once the true maximum degree has been observed; before
    that, edges at higher-degree endpoints are under-sampled, and the bias is
    bounded by the fraction of draws made before the maximum was seen.
    """

    def __init__(self, oracle: QueryOracle, rng: Rng, attempt_cap: int = 1_000_000):
        self.oracle = oracle
        self.rng = rng
        self.attempt_cap = attempt_cap
        self.max_degree_seen = 1

    def sample(self) -> CanonicalEdge:
        n = self.oracle.graph.n
        for _ in range(self.attempt_cap):
            v = 1 + self.rng.below(n)
            deg = self.oracle.degree(v)
            if deg > self.max_degree_seen:
                self.max_degree_seen = deg
            if deg == 0:
                continue
            if self.rng.below(self.max_degree_seen) < deg:
                i = 1 + self.rng.below(deg)
                u = self.oracle.neighbor(v, i)
                return canonical_edge(v, u)
        raise PreconditionError("edge sampling failed; is |E| >= n/2?")


def sample_edge(sampler: EdgeSampler) -> CanonicalEdge:
    return sampler.sample()


def test_star_unbounded(oracle: QueryOracle, k: int, eps: float, seed: int = 0,
                        config: Config = DEFAULT) -> Verdict:
    """One-sided K_{1,k}-minor-freeness tester for the unbounded model.

    Emulates the bounded-degree star tester with the bound set to k-1,
    rejecting outright on any vertex of degree >= k (the vertex plus k
    neighbors is the witness), then degree-checks the endpoints of
    O(1/eps) near-uniform edges.
    """
    if k < 3:
        raise PreconditionError("k must be >= 3")
    if not 0 < eps <= 1:
        raise PreconditionError("eps must be in (0, 1]")
    n = oracle.graph.n
    d_emul = k - 1
    rng = Rng(derive_seed(seed, 0x0B5, k))
    eps_emul = max(1e-9, eps / (4 * k))
    rounds = math.ceil(config.star_rounds_const / eps_emul)
    max_layers = math.ceil(2 * k / eps_emul)
    truncated = False

    def high_degree_witness(v: int) -> Verdict:
        nbrs = probe_neighbors(oracle, v, k)
        wit = _star_witness_to_minor(
            {v: list(nbrs), **{u: [v] for u in nbrs}}, k, frozenset([v]), list(nbrs))
        ok, reason = verify_certificate(oracle.graph, wit)
        if not ok:
            raise AssertionError(f"invalid high-degree witness: {reason}")
        return Verdict.reject(wit, queries=oracle.total_queries, kind="high-degree")

    for t in range(rounds):
        s = 1 + rng.below(n)
        if oracle.degree(s) >= k:
            return high_degree_witness(s)
        adj = {s: []}
        layer = [s]
        depth = 0
        while layer and depth < max_layers:
            nxt = []
            for v in layer:
                nbrs = probe_neighbors(oracle, v, k)
                if len(nbrs) >= k:
                    return high_degree_witness(v)
                for u in nbrs:
                    if u not in adj:
                        adj[u] = []
                        nxt.append(u)
                    if v not in adj[u]:
                        adj[u].append(v)
                    if u not in adj[v]:
                        adj[v].append(u)
            depth += 1
            layer = nxt
            if len(layer) >= k:
                break
        try:
            got = star_minor_witness(adj, k, cap=config.connected_enum_cap)
        except SearchBudgetExceeded:
            truncated = True
            got = None
        if got is not None:
            center, leaves = got
            wit = _star_witness_to_minor(adj, k, center, leaves)
            ok, reason = verify_certificate(oracle.graph, wit)
            if not ok:
                raise AssertionError(f"invalid star witness: {reason}")
            return Verdict.reject(wit, queries=oracle.total_queries, trial=t)

    sampler = EdgeSampler(oracle, rng.spawn(0xED6E))
    samples = math.ceil(4 / eps)
    for _ in range(samples):
        e = sampler.sample()
        for x in (e.u, e.v):
            if oracle.degree(x) >= k:
                return high_degree_witness(x)
    return Verdict.accept(queries=oracle.total_queries, truncated=truncated,
                          edge_samples=samples)


def distinguishing_experiment(n: int, query_budget: int, trials: int,
                              seed: int = 0) -> dict:
    """Detection rates of a degree->=3 vertex under a fixed query budget, on
    random isomorphic copies of cycle+clique versus cycle+isolated.

    The explorer repeatedly probes three neighbor slots of a fresh uniform
    start (the cheapest certificate of degree >= 3); evidence for the sqrt(N)
    threshold at fixed n, not an asymptotic proof.
    """
    from .generators import gen_clique_plus_cycle

    r = math.isqrt(n)
    if r * r != n:
        raise PreconditionError("n must be a perfect square")
    results = {}
    for variant, isolated in (("clique", False), ("isolated", True)):
        g, _ = gen_clique_plus_cycle(n, isolated_variant=isolated)
        detect = 0
        for t in range(trials):
            rng = Rng(derive_seed(seed, 0xD15, n, t, isolated))
            perm = list(range(1, n + 1))
            rng.shuffle(perm)  # relabeling: explorer sees a random copy
            inv = [0] * (n + 1)
            for i, p in enumerate(perm):
                inv[p] = i + 1
            oracle = QueryOracle(g)
            budget = query_budget
            found = False
            while budget >= 3 and not found:
                s_vis = 1 + rng.below(n)
                s = perm[s_vis - 1]
                cnt = 0
                for i in (1, 2, 3):
                    u = oracle.neighbor(s, i)
                    budget -= 1
                    if u != 0:
                        cnt += 1
                if cnt >= 3:
                    found = True
            if found:
                detect += 1
        results[variant] = detect / trials
    results["n"] = n
    results["query_budget"] = query_budget
    results["trials"] = trials
    return results
