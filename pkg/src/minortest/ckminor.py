"""Testers for C_k-minor-freeness (k >= 4) by local hub contraction.

C_k-minor-free means no simple cycle of length >= k.  Short cycles live in
"spots": 2-connected induced subgraphs that are themselves free of long
cycles and attach to the rest of the graph only through long external paths.
Replacing every spot by a hub vertex adjacent to its members yields a graph
that is cycle-free exactly when the input was C_k-minor-free, so the cycle
tester can run on it via local emulation.  For k=4 the spots are relaxed to
plain triangles, which keeps the view a cheap neighborhood computation.

Spot discovery may stumble on a simple cycle of length >= k; that cycle is
itself a certificate and short-circuits the run.
"""
from __future__ import annotations

import math
from typing import Optional

from .certificates import SimpleCycle, Verdict, verify_certificate
from .config import DEFAULT, Config
from .errors import PreconditionError
from .graphcore import QueryOracle
from .oracles import biconnected_components, find_cycle_at_least, is_biconnected
from .rng import Rng, derive_seed, fold
from .walker import BaseView, effective_d_eps, run_walker
from .cycles import GTauView


class LongCycleFound(Exception):
    """Spot discovery met a simple cycle of length >= k (a certificate)."""

    def __init__(self, cycle: list):
        super().__init__(f"cycle of length {len(cycle)} found")
        self.cycle = list(cycle)


class NeighborhoodCache:
    """Memoized full-neighborhood queries over the oracle (one per trial)."""

    def __init__(self, oracle: QueryOracle, d_probe: int):
        self.oracle = oracle
        self.d_probe = d_probe
        self._nbrs: dict[int, tuple[int, ...]] = {}

    def neighbors(self, v: int) -> tuple[int, ...]:
        got = self._nbrs.get(v)
        if got is None:
            out = []
            for i in range(1, self.d_probe + 1):
                u = self.oracle.neighbor(v, i)
                if u == 0:
                    break
                out.append(u)
            got = tuple(out)
            self._nbrs[v] = got
        return got

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def ball_adj(self, v: int, radius: int) -> dict[int, list[int]]:
        """Adjacency induced on the radius-ball around v."""
        dist = {v: 0}
        queue = [v]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            if dist[x] >= radius:
                continue
            for u in self.neighbors(x):
                if u not in dist:
                    dist[u] = dist[x] + 1
                    queue.append(u)
        inball = set(dist)
        return {x: [u for u in self.neighbors(x) if u in inball] for x in inball}


def _external_path(adj: dict[int, list[int]], S: frozenset, bound: int) -> Optional[list[int]]:
    """A simple path of length in [2, bound) between two distinct S-vertices
    whose interior avoids S, inside the explored adjacency; None if none."""
    for u in sorted(S):
        parent: dict[int, int] = {}
        dist: dict[int, int] = {}
        queue = []
        for w in adj.get(u, ()):
            if w not in S and w not in dist:
                dist[w] = 1
                parent[w] = u
                queue.append(w)
        head = 0
        while head < len(queue):
            w = queue[head]
            head += 1
            if dist[w] + 1 >= bound:
                continue
            for x in adj.get(w, ()):
                if x in S and x != u:
                    path = [x, w]
                    y = w
                    while parent[y] != u:
                        y = parent[y]
                        path.append(y)
                    path.append(u)
                    return path[::-1]
                if x not in S and x not in dist:
                    dist[x] = dist[w] + 1
                    parent[x] = w
                    queue.append(x)
    return None


def find_spots(cache: NeighborhoodCache, v: int, k: int,
               config: Config = DEFAULT) -> list[frozenset]:
    """All k-spots containing v, discovered from the (3k)-ball around v.

    Every spot containing v is the closure of a short cycle through v, grown
    by adjoining short external paths until none remain.  Raises
    LongCycleFound when a simple cycle of length >= k turns up anywhere in
    the explored neighborhood.
    """
    adj = cache.ball_adj(v, 3 * k)
    # long cycles live inside biconnected blocks; only blocks with >= k
    # vertices can host one, and those are small in the graphs of interest
    for block in biconnected_components(adj):
        if len(block) >= k:
            sub = {x: [y for y in adj[x] if y in block] for x in block}
            long_cycle = find_cycle_at_least(sub, k, cap=config.long_cycle_cap)
            if long_cycle is not None:
                raise LongCycleFound(long_cycle)

    # anchors: simple cycles through v of length < k (DFS paths closing at v)
    anchors: set[frozenset] = set()

    def dfs(path: list[int], on_path: set[int]) -> None:
        x = path[-1]
        for u in adj[x]:
            if u == v and len(path) >= 3:
                anchors.add(frozenset(path))
            elif u not in on_path and len(path) < k - 1:
                path.append(u)
                on_path.add(u)
                dfs(path, on_path)
                on_path.discard(u)
                path.pop()

    dfs([v], {v})

    spots: set[frozenset] = set()
    for anchor in anchors:
        S = set(anchor)
        while True:
            sub = {x: [y for y in adj[x] if y in S] for x in S}
            inner_cycle = find_cycle_at_least(sub, k, cap=config.long_cycle_cap)
            if inner_cycle is not None:
                raise LongCycleFound(inner_cycle)
            if not is_biconnected(sub, S):
                raise AssertionError("spot closure lost 2-connectivity")
            path = _external_path(adj, frozenset(S), 2 * k)
            if path is None:
                break
            S.update(path)
        spots.add(frozenset(S))
    out = sorted(spots, key=sorted)
    for i, a in enumerate(out):
        if len(a) >= cache.d_probe ** (k - 1):
            raise AssertionError("spot exceeds size bound")
        for b in out[i + 1:]:
            if len(a & b) > 1:
                raise AssertionError("distinct spots share more than one vertex")
    return out


class GPrimeView:
    """The hub-contraction view: spot (or triangle, k=4) hubs replace the
    short-cycle structure; intra-spot edges disappear, hubs attach to their
    members.  Discovered lazily per queried vertex, memoized per trial."""

    def __init__(self, oracle: QueryOracle, k: int, degree_bound_base: int,
                 config: Config = DEFAULT):
        self.oracle = oracle
        self.k = k
        self.d_base = degree_bound_base
        self.config = config
        self.cache = NeighborhoodCache(oracle, degree_bound_base)
        self.degree_bound = degree_bound_base ** 2 if k == 4 else degree_bound_base ** (k - 1)
        self.n_estimate = oracle.graph.n * (1 + degree_bound_base)
        self._spots: dict[int, tuple[frozenset, ...]] = {}
        self._nbrs: dict = {}

    # -- spot sets per vertex

    def spots_at(self, v: int) -> tuple[frozenset, ...]:
        got = self._spots.get(v)
        if got is None:
            if self.k == 4:
                got = tuple(self._triangles_at(v))
            else:
                got = tuple(find_spots(self.cache, v, self.k, self.config))
            self._spots[v] = got
        return got

    def _triangles_at(self, v: int) -> list[frozenset]:
        nbrs = self.cache.neighbors(v)
        out = []
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if self.cache.adjacent(nbrs[i], nbrs[j]):
                    out.append(frozenset((v, nbrs[i], nbrs[j])))
        return sorted(out, key=sorted)

    # -- virtual adjacency

    def is_hub(self, x) -> bool:
        return isinstance(x, tuple) and x and x[0] == "S"

    def hub_key(self, S: frozenset):
        return ("S", tuple(sorted(S)))

    def neighbors_of(self, x) -> tuple:
        got = self._nbrs.get(x)
        if got is not None:
            return got
        if self.is_hub(x):
            got = tuple(x[1])
        else:
            spots = self.spots_at(x)
            plain = []
            for u in self.cache.neighbors(x):
                if not any(u in S for S in spots):
                    plain.append(u)
            got = tuple(plain) + tuple(self.hub_key(S) for S in spots)
            if len(got) > self.degree_bound:
                raise AssertionError("hub-view degree bound exceeded")
        self._nbrs[x] = got
        return got

    def neighbor_raw(self, x, i: int):
        lst = self.neighbors_of(x)
        return lst[i - 1] if 1 <= i <= len(lst) else 0

    # -- uniform virtual-vertex sampling (per-attempt uniform)

    def sample_attempt(self, rng: Rng):
        n = self.oracle.graph.n
        v = 1 + rng.below(n)
        branch = rng.below(2)
        d = self.d_base
        if self.k == 4:
            if branch == 0:
                return v if rng.below(d * d) == 0 else None
            nbrs = self.cache.neighbors(v)
            deg = len(nbrs)
            if deg < 2:
                return None
            pairs = deg * (deg - 1) // 2
            idx = rng.below(pairs)
            i, j = _unrank_pair(idx, deg)
            u, w = nbrs[i], nbrs[j]
            if not self.cache.adjacent(u, w):
                return None
            if rng.below(3 * d * d) < pairs:
                return self.hub_key(frozenset((v, u, w)))
            return None
        if branch == 0:
            return v if rng.below(d) == 0 else None
        spots = self.spots_at(v)
        if not spots:
            return None
        S = spots[rng.below(len(spots))]
        if rng.below(d * len(S)) < len(spots):
            return self.hub_key(S)
        return None

    def vertex_label_code(self, x) -> int:
        if self.is_hub(x):
            return fold(0x5B07, *x[1])
        return x

    def materialize(self):
        """Full hub-contraction graph; may raise LongCycleFound."""
        out: dict = {}
        hubs: set = set()
        n = self.oracle.graph.n
        for v in range(1, n + 1):
            nbrs = self.neighbors_of(v)
            out[v] = [(u, 1) for u in nbrs]
            for u in nbrs:
                if self.is_hub(u):
                    hubs.add(u)
        for h in hubs:
            out[h] = [(u, 1) for u in self.neighbors_of(h)]
        return out

    def kernel_spec(self):
        return None


def _unrank_pair(idx: int, n: int) -> tuple[int, int]:
    """idx-th unordered pair (i < j) of range(n), row-major by i."""
    i = 0
    row = n - 1
    while idx >= row:
        idx -= row
        i += 1
        row -= 1
    return i, i + 1 + idx


def sample_gprime_vertex(view: GPrimeView, rng: Rng, retries: Optional[int] = None):
    from .cycles import SamplingFailed

    cap = retries if retries is not None else max(
        1, math.ceil(4 * math.log2(max(2, view.oracle.graph.n))))
    for _ in range(cap):
        got = view.sample_attempt(rng)
        if got is not None:
            return got
    raise SamplingFailed(f"no hub-view vertex sampled in {cap} attempts")


def gprime_neighbors(view: GPrimeView, x) -> tuple:
    return view.neighbors_of(x)


def lift_gprime_cycle(view: GPrimeView, gprime_cycle: list,
                      config: Config = DEFAULT) -> list[int]:
    """Expand hub hops of a simple hub-view cycle into intra-spot paths,
    producing a simple cycle of the base graph of length >= k."""
    k = view.k
    t = len(gprime_cycle)
    walk: list[int] = []
    involved: set[int] = set()
    for idx, x in enumerate(gprime_cycle):
        if view.is_hub(x):
            S = frozenset(x[1])
            involved |= S
            prev = gprime_cycle[(idx - 1) % t]
            nxt = gprime_cycle[(idx + 1) % t]
            inner = _shortest_inside(view, S, prev, nxt)
            walk.extend(inner[1:-1])  # interior only; endpoints are on the cycle
        else:
            walk.append(x)
            involved.add(x)
    if len(set(walk)) == len(walk) and len(walk) >= k:
        return walk
    # degenerate overlaps: search the small involved region exhaustively
    region_adj = {u: [w for w in view.cache.neighbors(u) if w in involved]
                  for u in involved}
    cyc = find_cycle_at_least(region_adj, k, cap=config.long_cycle_cap)
    if cyc is None:
        raise AssertionError("hub-view cycle did not lift to a long cycle")
    return cyc


def _shortest_inside(view: GPrimeView, S: frozenset, a: int, b: int) -> list[int]:
    """Shortest a-b path within the induced subgraph on S."""
    sub = {u: [w for w in view.cache.neighbors(u) if w in S] for u in S}
    parent = {a: None}
    queue = [a]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        if x == b:
            path = []
            while x is not None:
                path.append(x)
                x = parent[x]
            return path[::-1]
        for u in sub[x]:
            if u not in parent:
                parent[u] = x
                queue.append(u)
    raise AssertionError("spot members not connected inside the spot")


def test_ck_minor_free(oracle: QueryOracle, k: int, eps: float, seed: int = 0,
                       config: Config = DEFAULT) -> Verdict:
    """One-sided tester for C_k-minor-freeness, k >= 4 (k=3 is the plain
    cycle tester).  Rejections carry a simple cycle of length >= k."""
    if k < 4:
        raise PreconditionError("k must be >= 4 (k=3 is test_cycle_free)")
    if k > config.k_max:
        raise PreconditionError(
            f"k={k} exceeds the supported cap {config.k_max}: spot "
            f"neighborhoods grow as d^O(k)")
    if not 0 < eps <= 1:
        raise PreconditionError("eps must be in (0, 1]")
    from .walker import WalkerParams, fallback_triggered
    from .oracles import find_any_cycle

    d_eff, eps_eff = effective_d_eps(oracle.graph, eps)
    gview = GPrimeView(oracle, k, d_eff, config)
    view = GTauView(gview, derive_seed(seed, 0xC0, k))
    c_g = config.c_gprime if config.c_gprime is not None else 2.0 * d_eff ** k
    eps_inner = min(1.0, c_g * eps_eff * d_eff ** (-k))
    eps_tilde = min(1.0, config.c3 * eps_inner / (2 * gview.degree_bound))
    n_est = (gview.degree_bound + 1) * gview.n_estimate
    params = WalkerParams.derive(n_est, eps_tilde, config)
    try:
        if fallback_triggered(params, n_est, view.degree_bound, config):
            # desk scale: materialize the hub view and check it for cycles
            # exactly (cycle there implies a long cycle here)
            adj = gview.materialize()
            gcyc = find_any_cycle({v: [u for u, _ in nbrs] for v, nbrs in adj.items()})
            meta = {"queries": oracle.total_queries, "fallback": True, "params": params}
            if gcyc is None:
                return Verdict.accept(**meta)
            lifted = lift_gprime_cycle(gview, gcyc, config)
            cert = SimpleCycle(tuple(lifted))
            _check_long_cycle(oracle, cert, k)
            return Verdict.reject(cert, **meta)
        res = run_walker(view, eps_tilde, Rng(derive_seed(seed, 0xC1, k)), config,
                         n_estimate=n_est, params=params)
    except LongCycleFound as lc:
        cert = SimpleCycle(tuple(lc.cycle))
        _check_long_cycle(oracle, cert, k)
        return Verdict.reject(cert, queries=oracle.total_queries, short_circuit=True)
    meta = dict(res.stats)
    meta["queries"] = oracle.total_queries
    if res.accepted:
        return Verdict.accept(**meta)
    gprime_cycle = [x for x in res.odd_cycle if not view.is_aux(x)]
    lifted = lift_gprime_cycle(gview, gprime_cycle, config)
    cert = SimpleCycle(tuple(lifted))
    _check_long_cycle(oracle, cert, k)
    return Verdict.reject(cert, **meta)


def _check_long_cycle(oracle: QueryOracle, cert: SimpleCycle, k: int) -> None:
    if len(cert.vertices) < k:
        raise AssertionError("certificate cycle shorter than k")
    ok, reason = verify_certificate(oracle.graph, cert)
    if not ok:
        raise AssertionError(f"invalid long-cycle certificate: {reason}")


def test_triangle_plus_edge(oracle: QueryOracle, eps: float, seed: int = 0,
                            config: Config = DEFAULT) -> Verdict:
    """One-sided tester for freeness of the triangle-with-pendant-edge minor.

    Runs the cycle tester while recording the explored subgraph, then scans
    its simple cycles: a cycle vertex of degree > 2 yields the minor (via a
    pendant neighbor or a chord); cycles isolated in the input graph are
    deleted from the view and the scan continues.
    """
    from .certificates import MinorWitness, triangle_plus_edge_pattern

    if not 0 < eps <= 1:
        raise PreconditionError("eps must be in (0, 1]")
    rec = _RecordingOracle(oracle)
    verdict = test_cycle_free(rec, eps, seed=seed, config=config)
    meta = dict(verdict.meta)
    meta["queries"] = oracle.total_queries
    if verdict.accepted:
        return Verdict.accept(**meta)
    explored = {v: set(us) for v, us in rec.explored.items()}
    cache = NeighborhoodCache(oracle, oracle.graph.d)
    pattern = triangle_plus_edge_pattern()
    while True:
        cyc = _any_cycle_in(explored)
        if cyc is None:
            return Verdict.accept(**meta)
        t = len(cyc)
        for j, x in enumerate(cyc):
            nbrs = cache.neighbors(x)
            prev_v, next_v = cyc[(j - 1) % t], cyc[(j + 1) % t]
            extra = [y for y in nbrs if y not in (prev_v, next_v)]
            if not extra:
                continue
            y = extra[0]
            if y not in cyc:
                branch = (
                    frozenset([cyc[(j + 1) % t]]),
                    frozenset(cyc[(j + 2 + s) % t] for s in range(t - 2)),
                    frozenset([x]),
                    frozenset([y]),
                )
            else:
                i = cyc.index(y)
                arc1 = [cyc[(j + 1 + s) % t] for s in range((i - j - 1) % t)]
                arc2 = [cyc[(i + 1 + s) % t] for s in range((j - i - 1) % t)]
                if not arc1 or not arc2:
                    continue  # adjacent on the cycle: not a chord
                branch = (
                    frozenset([y]),
                    frozenset(arc1),
                    frozenset([x]),
                    frozenset([arc2[-1]]),
                )
            wit = MinorWitness(pattern, branch, (
                ((1, 2), _edge_between(cache, branch[0], branch[1])),
                ((2, 3), _edge_between(cache, branch[1], branch[2])),
                ((3, 1), _edge_between(cache, branch[2], branch[0])),
                ((3, 4), _edge_between(cache, branch[2], branch[3])),
            ))
            ok, reason = verify_certificate(oracle.graph, wit)
            if not ok:
                raise AssertionError(f"invalid triangle+edge witness: {reason}")
            meta["queries"] = oracle.total_queries
            return Verdict.reject(wit, **meta)
        # all cycle vertices have degree 2 in the input: isolated cycle
        for x in cyc:
            for u in list(explored.get(x, ())):
                explored[u].discard(x)
            explored.pop(x, None)


def _edge_between(cache: NeighborhoodCache, A: frozenset, B: frozenset) -> tuple[int, int]:
    for v in sorted(A):
        for u in cache.neighbors(v):
            if u in B:
                return (v, u)
    raise AssertionError("expected adjacent branch sets")


def _any_cycle_in(adj: dict[int, set[int]]) -> Optional[list[int]]:
    from .oracles import find_any_cycle

    return find_any_cycle({v: sorted(us) for v, us in adj.items()})


class _RecordingOracle:
    """Oracle wrapper that remembers every discovered edge (simple graphs)."""

    kernel_ok = False

    def __init__(self, oracle: QueryOracle):
        self._oracle = oracle
        self.graph = oracle.graph
        self.budget = oracle.budget
        self.explored: dict[int, set[int]] = {}

    @property
    def neighbor_queries(self):
        return self._oracle.neighbor_queries

    @property
    def degree_queries(self):
        return self._oracle.degree_queries

    @property
    def total_queries(self):
        return self._oracle.total_queries

    @property
    def remaining_budget(self):
        return self._oracle.remaining_budget

    def charge(self, neighbor: int = 0, degree: int = 0):
        self._oracle.charge(neighbor=neighbor, degree=degree)

    def neighbor(self, v: int, i: int) -> int:
        u = self._oracle.neighbor(v, i)
        if u != 0:
            self.explored.setdefault(v, set()).add(u)
            self.explored.setdefault(u, set()).add(v)
        return u

    def degree(self, v: int) -> int:
        return self._oracle.degree(v)
