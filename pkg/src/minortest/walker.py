"""Random-walk tester for (generalized) 2-colorability with odd-cycle output.

The engine behind the cycle testers: from each of T sampled start vertices it
takes K lazy random walks of length L, recording the generalized parity of
every visited vertex (neq/unlabeled edges count 1, eq edges 0).  Two walk
prefixes meeting at a vertex with opposite parities splice into an odd closed
walk, from which a simple cycle of odd generalized length is extracted.  A
legally 2-colorable instance can never produce such a cycle, so acceptance on
those instances is certain, not statistical.

When the schedule T*K*L would exceed n*d the walker switches to an exhaustive
materialize-and-2-color check, which is exact and still one-sided.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .certificates import SimpleCycle, Verdict, verify_certificate
from .config import DEFAULT, Config
from .graphcore import EdgeLabeling, QueryOracle
from .rng import Rng


@dataclass(frozen=True)
class WalkerParams:
    """Schedule: K walks of length L from each of T starts."""
    walks_per_start: int
    walk_length: int
    num_starts: int

    @classmethod
    def derive(cls, n_estimate: int, eps: float, config: Config = DEFAULT) -> "WalkerParams":
        n = max(2, n_estimate)
        log2n = math.log2(n)
        L = max(1, math.ceil(config.c_L * log2n * eps ** -3))
        K = max(1, math.ceil(config.c_K * math.sqrt(n) * log2n * eps ** -2))
        T = max(1, math.ceil(config.c_T / eps))
        return cls(K, L, T)

    @property
    def total_steps(self) -> int:
        return self.walks_per_start * self.walk_length * self.num_starts


@dataclass
class WalkRecord:
    """One walk prefix: start vertex plus (vertex, generalized parity) pairs.

    Lazy stay-in-place steps are not recorded, so consecutive vertices are
    adjacent in the walked graph.
    """
    start: object
    vertices: list
    parities: list[int]


class BaseView:
    """The input graph itself as a walkable view, optionally eq/neq-labeled."""

    def __init__(self, oracle: QueryOracle, labeling: Optional[EdgeLabeling] = None,
                 degree_bound: Optional[int] = None):
        self.oracle = oracle
        self.labeling = labeling
        self.degree_bound = degree_bound if degree_bound is not None else oracle.graph.d
        self.n_estimate = oracle.graph.n

    def sample_attempt(self, rng: Rng):
        return 1 + rng.below(self.oracle.graph.n)

    def neighbor_raw(self, x: int, i: int) -> int:
        return self.oracle.neighbor(x, i)

    def step(self, x: int, i: int):
        u = self.oracle.neighbor(x, i)
        if u == 0:
            return None
        parity = 1 if self.labeling is None else self.labeling.lambda_parity(x, u)
        return u, parity

    def is_aux(self, x) -> bool:
        return False

    def vertex_label_code(self, x: int) -> int:
        return x

    def materialize(self):
        """Full adjacency with parities; costs n degree + 2|E| neighbor queries."""
        g = self.oracle.graph
        adj: dict[int, list] = {}
        for v in range(1, g.n + 1):
            deg = self.oracle.degree(v)
            lst = []
            for i in range(1, deg + 1):
                u = self.oracle.neighbor(v, i)
                parity = 1 if self.labeling is None else self.labeling.lambda_parity(v, u)
                lst.append((u, parity))
            adj[v] = lst
        return adj

    def kernel_spec(self):
        if not getattr(self.oracle, "kernel_ok", True):
            return None
        indptr, indices = self.oracle.graph.csr()
        mode = 0 if self.labeling is None else 1
        seed = 0 if self.labeling is None else self.labeling.seed
        return {
            "indptr": indptr, "indices": indices, "n": self.oracle.graph.n,
            "d_view": self.degree_bound, "mode": mode, "label_seed": seed,
        }

    def encode_virtual(self, x) -> int:
        return x

    def decode_virtual(self, code: int):
        return code


class WalkerResult:
    def __init__(self, accepted: bool, odd_cycle=None, collision=None, **stats):
        self.accepted = accepted
        self.odd_cycle = odd_cycle  # list of virtual vertices, or None
        self.collision = collision  # (WalkRecord, WalkRecord) when from walks
        self.stats = stats


def extract_odd_cycle(rec_a: WalkRecord, rec_b: WalkRecord) -> list:
    """Splice two walk prefixes from one start meeting with opposite parities
    into a simple cycle of odd generalized length."""
    if rec_a.start != rec_b.start:
        raise ValueError("walk records have different start vertices")
    if rec_a.vertices[-1] != rec_b.vertices[-1]:
        raise ValueError("walk records do not meet at a common vertex")
    if rec_a.parities[-1] == rec_b.parities[-1]:
        raise ValueError("walk records meet with equal parities")
    walk_v = list(rec_a.vertices)
    walk_p = list(rec_a.parities)
    pa = rec_a.parities[-1]
    pb = rec_b.parities[-1]
    for j in range(len(rec_b.vertices) - 2, -1, -1):
        walk_v.append(rec_b.vertices[j])
        walk_p.append(pa ^ pb ^ rec_b.parities[j])
    return _odd_simple_cycle(walk_v, walk_p)


def _odd_simple_cycle(walk_v: list, walk_p: list[int]) -> list:
    """Simple odd-parity cycle inside a closed walk of odd total parity.

    Collapsing even sub-cycles preserves cumulative parities, so an odd
    simple cycle must be met before the walk closes.
    """
    stack = [(walk_v[0], walk_p[0])]
    pos = {walk_v[0]: 0}
    for t in range(1, len(walk_v)):
        v, cum = walk_v[t], walk_p[t]
        at = pos.get(v)
        if at is None:
            pos[v] = len(stack)
            stack.append((v, cum))
            continue
        if (cum ^ stack[at][1]) & 1:
            cyc = [x for x, _ in stack[at:]]
            if len(cyc) < 3:
                raise AssertionError("odd cycle shorter than 3 in a simple graph")
            return cyc
        while len(stack) > at + 1:
            x, _ = stack.pop()
            del pos[x]
    raise AssertionError("no odd cycle found in an odd closed walk")


def exhaustive_odd_cycle(adj) -> Optional[list]:
    """Exact 2-coloring of a materialized parity graph; odd cycle or None.

    adj: vertex -> list of (neighbor, parity).  BFS forest with cumulative
    parities; a non-tree edge joining equal parities closes an odd cycle made
    of the two tree paths up to the BFS meeting point.
    """
    color: dict = {}
    parent: dict = {}
    for s in adj:
        if s in color:
            continue
        color[s] = 0
        parent[s] = None
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for u, parity in adj[v]:
                if u not in color:
                    color[u] = color[v] ^ parity
                    parent[u] = v
                    queue.append(u)
                elif u != parent[v] and (color[u] ^ color[v] ^ parity) & 1:
                    return _tree_path_cycle(parent, v, u)
    return None


def _tree_path_cycle(parent: dict, v, u) -> list:
    anc_v = {}
    x = v
    i = 0
    while x is not None:
        anc_v[x] = i
        x = parent[x]
        i += 1
    x = u
    path_u = [u]
    while x not in anc_v:
        x = parent[x]
        path_u.append(x)
    lca = x
    path_v = []
    x = v
    while x != lca:
        path_v.append(x)
        x = parent[x]
    # cycle: v .. (just below lca) lca (from u-side reversed) .. u, edge u-v
    cyc = path_v + path_u[::-1]
    if len(cyc) < 3:
        raise AssertionError("degenerate odd cycle from tree paths")
    return cyc


def fallback_triggered(params: WalkerParams, n_estimate: int, d_view: int,
                       config: Config = DEFAULT) -> bool:
    """The walk schedule is pointless once it would exceed n*d steps, and
    tiny instances are cheaper to read outright."""
    return (params.total_steps >= n_estimate * d_view
            or n_estimate * d_view <= config.exhaustive_floor)


def run_walker(view, eps: float, rng: Rng, config: Config = DEFAULT,
               n_estimate: Optional[int] = None,
               params: Optional[WalkerParams] = None) -> WalkerResult:
    """Drive the walk schedule over a view; returns an odd virtual cycle on
    rejection.  One-sided by construction."""
    n_est = n_estimate if n_estimate is not None else view.n_estimate
    if params is None:
        params = WalkerParams.derive(n_est, eps, config)
    d_view = view.degree_bound
    retry_cap = max(1, math.ceil(config.retry_log_factor * math.log2(max(2, n_est))))
    sampling_failures = 0

    if fallback_triggered(params, n_est, d_view, config):
        adj = view.materialize()
        cyc = exhaustive_odd_cycle(adj)
        if cyc is None:
            return WalkerResult(True, fallback=True, params=params)
        return WalkerResult(False, odd_cycle=cyc, fallback=True, params=params)

    spec = view.kernel_spec() if hasattr(view, "kernel_spec") else None
    from . import kernels
    use_kernel = spec is not None and kernels.walk_batch is not None

    for _ in range(params.num_starts):
        start = _sample_with_retries(view, rng, retry_cap)
        if start is None:
            sampling_failures += 1
            continue
        if use_kernel:
            coll = _kernel_start(view, spec, start, params, rng)
        else:
            coll = _python_start(view, start, params, rng)
        if coll is not None:
            rec_a, rec_b = coll
            cyc = extract_odd_cycle(rec_a, rec_b)
            return WalkerResult(False, odd_cycle=cyc, collision=coll,
                                sampling_failures=sampling_failures,
                                fallback=False, params=params)
    return WalkerResult(True, sampling_failures=sampling_failures,
                        fallback=False, params=params)


def _sample_with_retries(view, rng: Rng, retry_cap: int):
    for _ in range(retry_cap):
        got = view.sample_attempt(rng)
        if got is not None:
            return got
    return None


def _python_start(view, start, params: WalkerParams, rng: Rng):
    K, L = params.walks_per_start, params.walk_length
    d_view = view.degree_bound
    # vertex -> [handle for parity 0, handle for parity 1]; handle=(walk,pos)
    table = {start: [(0, 0), None]}
    walks_v: list[list] = []
    walks_p: list[list[int]] = []
    for k in range(K):
        seq_v = [start]
        seq_p = [0]
        walks_v.append(seq_v)
        walks_p.append(seq_p)
        v = start
        p = 0
        for _ in range(L):
            i = 1 + rng.below(d_view)
            res = view.step(v, i)
            if res is None:
                continue
            v, dp = res
            p ^= dp
            seq_v.append(v)
            seq_p.append(p)
            ent = table.get(v)
            if ent is None:
                ent = [None, None]
                table[v] = ent
            other = ent[1 - p]
            if other is not None:
                ka, ia = other
                rec_a = WalkRecord(start, walks_v[ka][:ia + 1], walks_p[ka][:ia + 1])
                rec_b = WalkRecord(start, list(seq_v), list(seq_p))
                return rec_a, rec_b
            if ent[p] is None:
                ent[p] = (k, len(seq_v) - 1)
    return None


def _kernel_start(view, spec, start, params: WalkerParams, rng: Rng):
    from . import kernels

    oracle = view.oracle
    remaining = oracle.remaining_budget
    budget = -1 if remaining is None else remaining
    (status, rng_state, queries, coll, walks_v, walks_p, walks_len) = kernels.walk_batch(
        spec["indptr"], spec["indices"], spec["n"], spec["d_view"], spec["mode"],
        spec["label_seed"], rng.state, view.encode_virtual(start),
        params.walks_per_start, params.walk_length, budget,
    )
    rng.state = rng_state
    oracle.charge(neighbor=queries)
    if status == 2:
        from .graphcore import BudgetExhausted
        raise BudgetExhausted(f"query budget exhausted during walk")
    if status == 0:
        return None
    ka, ia, kb, ib = coll
    dec = view.decode_virtual
    rec_a = WalkRecord(start, [dec(int(x)) for x in walks_v[ka][:ia + 1]],
                       [int(x) for x in walks_p[ka][:ia + 1]])
    rec_b = WalkRecord(start, [dec(int(x)) for x in walks_v[kb][:ib + 1]],
                       [int(x) for x in walks_p[kb][:ib + 1]])
    return rec_a, rec_b


def effective_d_eps(graph, eps: float) -> tuple[int, float]:
    """Degree bounds below 3 lift to d=3 at proximity 2*eps/3."""
    if graph.d >= 3:
        return graph.d, eps
    return 3, 2.0 * eps / 3.0


def test_2colorable(oracle: QueryOracle, eps: float,
                    labeling: Optional[EdgeLabeling] = None,
                    seed: int = 0, config: Config = DEFAULT,
                    n_estimate: Optional[int] = None) -> Verdict:
    """One-sided tester for (generalized) 2-colorability of the input graph.

    Accepts every legally 2-colorable instance; on rejection returns a simple
    cycle of odd generalized length (a genuine simple cycle of the graph).
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    d_eff, eps_eff = effective_d_eps(oracle.graph, eps)
    view = BaseView(oracle, labeling=labeling, degree_bound=d_eff)
    res = run_walker(view, eps_eff, Rng(seed), config, n_estimate=n_estimate)
    meta = dict(res.stats)
    meta["queries"] = oracle.total_queries
    if res.accepted:
        return Verdict.accept(**meta)
    cert = SimpleCycle(tuple(res.odd_cycle),
                       labeling_seed=None if labeling is None else labeling.seed)
    ok, reason = verify_certificate(oracle.graph, cert)
    if not ok:
        raise AssertionError(f"walker produced an invalid certificate: {reason}")
    return Verdict.reject(cert, **meta)
