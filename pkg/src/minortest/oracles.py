"""Brute-force ground truth at desk scale.

Cycle detection, distance to cycle-freeness, generalized 2-coloring
violations, minor containment with witnesses, distance to minor-freeness,
spot enumeration, and local-expansion checking.  Everything here is an exact
enumeration with explicit size limits; beyond them InstanceTooLarge is
raised, never a silent approximation.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .certificates import MinorWitness, Pattern, SimpleCycle
from .config import DEFAULT, Config
from .errors import InstanceTooLarge, SearchBudgetExceeded
from .graphcore import EdgeLabeling, Graph


# --------------------------------------------------------------------------
# small-graph helpers (adjacency dicts: vertex -> tuple/list of neighbors)

def induced_adj(graph: Graph, vertices) -> dict[int, list[int]]:
    vs = set(vertices)
    return {v: [u for u in graph.adj(v) if u in vs] for v in vs}


def whole_adj(graph: Graph) -> dict[int, list[int]]:
    return {v: list(graph.adj(v)) for v in range(1, graph.n + 1)}


def adj_components(adj: dict[int, list[int]]) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in adj:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        out.append(comp)
    return out


def is_connected_set(adj: dict[int, list[int]], vs) -> bool:
    vset = set(vs)
    if not vset:
        return False
    start = next(iter(vset))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in vset and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vset)


def is_biconnected(adj: dict[int, list[int]], vs) -> bool:
    """2-vertex-connectivity of the induced subgraph on vs (needs >= 3 vertices)."""
    vset = set(vs)
    if len(vset) < 3:
        return False
    if not is_connected_set(adj, vset):
        return False
    # no articulation points (Tarjan, iterative)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    timer = 0
    root = next(iter(vset))
    parent[root] = None
    stack = [(root, iter([u for u in adj[root] if u in vset]))]
    disc[root] = low[root] = timer
    timer += 1
    root_children = 0
    while stack:
        v, it = stack[-1]
        advanced = False
        for u in it:
            if u not in vset:
                continue
            if u not in disc:
                parent[u] = v
                if v == root:
                    root_children += 1
                disc[u] = low[u] = timer
                timer += 1
                stack.append((u, iter([w for w in adj[u] if w in vset])))
                advanced = True
                break
            elif u != parent[v]:
                low[v] = min(low[v], disc[u])
        if not advanced:
            stack.pop()
            p = parent[v]
            if p is not None:
                low[p] = min(low[p], low[v])
                if p != root and low[v] >= disc[p]:
                    return False
    return root_children <= 1


def biconnected_components(adj: dict[int, list[int]]) -> list[set[int]]:
    """Vertex sets of the biconnected blocks (bridges give 2-vertex blocks)."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    timer = [0]
    blocks: list[set[int]] = []
    edge_stack: list[tuple[int, int]] = []

    for root in adj:
        if root in disc:
            continue
        parent[root] = None
        disc[root] = low[root] = timer[0]
        timer[0] += 1
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if u not in disc:
                    parent[u] = v
                    disc[u] = low[u] = timer[0]
                    timer[0] += 1
                    edge_stack.append((v, u))
                    stack.append((u, iter(adj[u])))
                    advanced = True
                    break
                elif u != parent[v] and disc[u] < disc[v]:
                    edge_stack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if not advanced:
                stack.pop()
                p = parent[v]
                if p is not None:
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        block: set[int] = set()
                        while edge_stack:
                            a, b = edge_stack.pop()
                            block.add(a)
                            block.add(b)
                            if (a, b) == (p, v):
                                break
                        if block:
                            blocks.append(block)
    return blocks


def enumerate_connected_sets(adj: dict[int, list[int]], root: int, allowed,
                             max_size: Optional[int] = None,
                             cap: int = 2_000_000) -> Iterator[frozenset]:
    """All connected vertex sets containing `root` inside `allowed`, each once."""
    allowed = set(allowed)
    if root not in allowed:
        return
    counter = [0]

    def rec(S: frozenset, frontier: list[int], banned: frozenset):
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded("connected-set enumeration cap hit")
        yield S
        if max_size is not None and len(S) >= max_size:
            return
        for i, v in enumerate(frontier):
            S2 = S | {v}
            banned2 = banned | frozenset(frontier[:i])
            tail = frontier[i + 1:]
            seen_ext = set(tail)
            ext = list(tail)
            for u in adj[v]:
                if u in allowed and u not in S2 and u not in banned2 and u not in seen_ext:
                    seen_ext.add(u)
                    ext.append(u)
            yield from rec(S2, ext, banned2)

    start_frontier = [u for u in adj[root] if u in allowed]
    yield from rec(frozenset([root]), start_frontier, frozenset())


def all_connected_sets(adj: dict[int, list[int]], allowed=None,
                       max_size: Optional[int] = None,
                       cap: int = 2_000_000) -> Iterator[frozenset]:
    """All connected sets within `allowed`, each once (by minimum vertex)."""
    allowed = sorted(adj) if allowed is None else sorted(allowed)
    for i, r in enumerate(allowed):
        yield from enumerate_connected_sets(adj, r, allowed[i:], max_size=max_size, cap=cap)


def find_any_cycle(adj: dict[int, list[int]]) -> Optional[list[int]]:
    """A simple cycle (length >= 3) in a simple graph, or None."""
    color: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    for s in adj:
        if s in color:
            continue
        parent[s] = None
        color[s] = 0
        stack = [(s, iter(adj[s]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent[v]:
                    continue
                if u in color:
                    if color[u] == 0:
                        cyc = [u]
                        x = v
                        while x != u:
                            cyc.append(x)
                            x = parent[x]
                        return cyc
                else:
                    parent[u] = v
                    color[u] = 0
                    stack.append((u, iter(adj[u])))
                    advanced = True
                    break
            if not advanced:
                color[v] = 1
                stack.pop()
    return None


def find_cycle_at_least(adj: dict[int, list[int]], k: int,
                        cap: int = 2_000_000) -> Optional[list[int]]:
    """A simple cycle of length >= k, or None; exhaustive DFS with a node cap."""
    if k <= 3:
        return find_any_cycle(adj)
    counter = [0]
    order = sorted(adj)
    pos = {v: i for i, v in enumerate(order)}

    best: list[Optional[list[int]]] = [None]

    def dfs(start: int, path: list[int], on_path: set[int]) -> bool:
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded("long-cycle search cap hit")
        v = path[-1]
        for u in adj[v]:
            if pos[u] < pos[start]:
                continue  # cycles are rooted at their minimum vertex
            if u == start and len(path) >= k:
                best[0] = list(path)
                return True
            if u not in on_path:
                path.append(u)
                on_path.add(u)
                if dfs(start, path, on_path):
                    return True
                on_path.discard(u)
                path.pop()
        return False

    for s in order:
        if len(adj[s]) < 2:
            continue
        if dfs(s, [s], {s}):
            return best[0]
    return None


# --------------------------------------------------------------------------
# cycle-freeness

def exact_is_cycle_free(graph: Graph) -> tuple[bool, Optional[SimpleCycle]]:
    if graph.is_multigraph:
        seen: dict[tuple[int, int], int] = {}
        for e in graph.edges():
            if e.u == e.v:
                return False, SimpleCycle((e.u,))
            key = (e.u, e.v)
            seen[key] = seen.get(key, 0) + 1
            if seen[key] >= 2:
                return False, SimpleCycle((e.u, e.v))
    cyc = find_any_cycle(whole_adj(graph))
    if cyc is None:
        return True, None
    return False, SimpleCycle(tuple(cyc))


def exact_distance_to_cycle_free(graph: Graph) -> int:
    return graph.num_edges - graph.n + len(graph.components())


# --------------------------------------------------------------------------
# generalized 2-coloring

def exact_min_violations(graph: Graph, labeling: Optional[EdgeLabeling] = None,
                         config: Config = DEFAULT) -> tuple[int, dict[int, int]]:
    """Minimum number of label-violating edges over all 2-colorings.

    labeling=None treats every edge as neq (plain bipartiteness distance).
    Enumerates colorings per connected component (violations are additive).
    """
    total = 0
    coloring: dict[int, int] = {}
    for comp in graph.components():
        k = len(comp)
        if k > config.min_violations_max_component:
            raise InstanceTooLarge(f"component of size {k} exceeds enumeration limit")
        idx = {v: i - 1 for i, v in enumerate(comp)}  # comp[0] pinned to color 0
        edges = []
        cset = set(comp)
        for e in graph.edges():
            if e.u in cset:
                parity = 1 if labeling is None else labeling.lambda_parity(e.u, e.v, e.mult)
                edges.append((idx[e.u], idx[e.v], parity))
        if not edges:
            for v in comp:
                coloring[v] = 0
            continue
        masks = np.arange(1 << (k - 1), dtype=np.uint64)
        viol = np.zeros(1 << (k - 1), dtype=np.int32)
        for iu, iv, parity in edges:
            bu = (masks >> np.uint64(iu)) & np.uint64(1) if iu >= 0 else np.uint64(0)
            bv = (masks >> np.uint64(iv)) & np.uint64(1) if iv >= 0 else np.uint64(0)
            viol += ((bu ^ bv) != parity)
        best = int(viol.argmin())
        total += int(viol[best])
        for v in comp:
            i = idx[v]
            coloring[v] = 0 if i < 0 else (best >> i) & 1
    return total, coloring


# --------------------------------------------------------------------------
# minor containment

def _pattern_order(pattern: Pattern, root_pattern_vertex: int) -> tuple[list[int], dict[int, Optional[int]]]:
    """BFS order per pattern component, root component first."""
    padj = pattern.adjacency()
    order: list[int] = []
    parent: dict[int, Optional[int]] = {}
    seen: set[int] = set()
    roots = [root_pattern_vertex] + [v for v in range(1, pattern.n + 1) if v != root_pattern_vertex]
    for r in roots:
        if r in seen:
            continue
        parent[r] = None
        seen.add(r)
        queue = [r]
        while queue:
            p = queue.pop(0)
            order.append(p)
            for q in padj[p]:
                if q not in seen:
                    seen.add(q)
                    parent[q] = p
                    queue.append(q)
    return order, parent


def minor_search(adj: dict[int, list[int]], pattern: Pattern,
                 root_vertex: Optional[int] = None,
                 root_pattern_vertex: int = 1,
                 cap: int = 2_000_000) -> Optional[dict[int, frozenset]]:
    """Branch-set search for a pattern minor in a small host graph.

    Returns {pattern vertex -> branch set} or None.  When root_vertex is
    given, the branch set of root_pattern_vertex must contain it.  Exhaustive
    up to the node cap (SearchBudgetExceeded beyond).
    """
    h = pattern.n
    if h == 0:
        return {}
    if len(adj) < h:
        return None
    padj = pattern.adjacency()
    max_pattern_deg = max((len(padj[p]) for p in padj), default=0)
    max_host_deg = max((len(adj[v]) for v in adj), default=0)
    if max_pattern_deg >= 3 and max_host_deg <= 2:
        return None  # connected sets in a path/cycle host have <= 2 neighbors
    if max_host_deg <= 2 and root_vertex is None:
        got = _minor_in_degree2_host(adj, pattern)
        if got is not NotImplemented:
            return got
    order, parent = _pattern_order(pattern, root_pattern_vertex)
    counter = [0]
    branch: dict[int, frozenset] = {}
    used: set[int] = set()

    def candidates(p: int) -> Iterator[frozenset]:
        free = {v for v in adj if v not in used}
        remaining_after = h - len(branch) - 1
        max_size = len(free) - remaining_after
        if max_size <= 0:
            return
        par = parent[p]
        if par is None:
            anchors = [root_vertex] if (root_vertex is not None and p == root_pattern_vertex) \
                else sorted(free)
            fixed = root_vertex is not None and p == root_pattern_vertex
        else:
            touch = set()
            for w in branch[par]:
                for u in adj[w]:
                    if u in free:
                        touch.add(u)
            anchors = sorted(touch)
            fixed = False
        for i, a in enumerate(anchors):
            if a not in free:
                continue
            allowed = free if fixed else free - set(anchors[:i])
            yield from enumerate_connected_sets(adj, a, allowed, max_size=max_size, cap=cap)

    def place(idx: int) -> bool:
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded("minor search cap hit")
        if idx == len(order):
            return True
        p = order[idx]
        earlier = set(order[:idx])
        needed = [q for q in padj[p] if q in earlier]
        for B in candidates(p):
            ok = True
            for q in needed:
                if not _sets_adjacent(adj, B, branch[q]):
                    ok = False
                    break
            if not ok:
                continue
            branch[p] = B
            used.update(B)
            if place(idx + 1):
                return True
            used.difference_update(B)
            del branch[p]
        return False

    if place(0):
        return dict(branch)
    return None


def _minor_in_degree2_host(adj: dict[int, list[int]], pattern: Pattern):
    """Closed-form minors in hosts of max degree <= 2 (paths and cycles).

    Handles connected path/cycle patterns; returns NotImplemented for shapes
    it does not cover so the generic engine can run.
    """
    h = pattern.n
    padj = pattern.adjacency()
    degs = sorted(len(padj[p]) for p in padj)
    is_path = h >= 1 and len(pattern.edges) == h - 1 and (h == 1 or degs[-1] <= 2) \
        and is_connected_set(padj, range(1, h + 1))
    is_cycle = h >= 3 and len(pattern.edges) == h and degs == [2] * h \
        and is_connected_set(padj, range(1, h + 1))
    if not (is_path or is_cycle):
        return NotImplemented

    def run_of(comp: list[int]) -> tuple[list[int], bool]:
        """Vertices of a path/cycle component in traversal order + cycle flag."""
        ends = [v for v in comp if len(adj[v]) <= 1]
        start = min(ends) if ends else min(comp)
        order = [start]
        prev = None
        cur = start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                return order, False
            nx = nxt[0]
            if nx == start:
                return order, True
            order.append(nx)
            prev, cur = cur, nx
            if len(order) > len(comp):  # safety on malformed input
                return order, False

    # map pattern vertices along their own path order
    if is_path:
        p_ends = [p for p in padj if len(padj[p]) <= 1]
        p_order = [min(p_ends)] if h > 1 else [1]
        while len(p_order) < h:
            nxt = [q for q in padj[p_order[-1]] if q not in p_order]
            p_order.append(nxt[0])
    else:
        p_order = [1]
        while len(p_order) < h:
            nxt = [q for q in padj[p_order[-1]] if q not in p_order]
            p_order.append(nxt[0])

    for comp in adj_components(adj):
        order, closed = run_of(comp)
        m = len(order)
        if is_path and m >= h:
            return {p_order[i]: frozenset([order[i]]) for i in range(h)}
        if is_cycle and closed and m >= h:
            branch = {p_order[i]: frozenset([order[i]]) for i in range(h - 1)}
            branch[p_order[h - 1]] = frozenset(order[h - 1:])
            return branch
    return None


def _sets_adjacent(adj: dict[int, list[int]], A: frozenset, B: frozenset) -> bool:
    small, big = (A, B) if len(A) <= len(B) else (B, A)
    for v in small:
        for u in adj[v]:
            if u in big:
                return True
    return False


def _connecting_edge(adj: dict[int, list[int]], A: frozenset, B: frozenset) -> tuple[int, int]:
    for v in sorted(A):
        for u in adj[v]:
            if u in B:
                return (v, u)
    raise AssertionError("sets not adjacent")


def witness_from_branch_sets(adj: dict[int, list[int]], pattern: Pattern,
                             branch: dict[int, frozenset]) -> MinorWitness:
    conn = []
    for a, b in pattern.edges:
        conn.append(((a, b), _connecting_edge(adj, branch[a], branch[b])))
    return MinorWitness(pattern,
                        tuple(branch[p] for p in range(1, pattern.n + 1)),
                        tuple(conn))


def exact_has_minor(graph: Graph, pattern: Pattern,
                    config: Config = DEFAULT) -> tuple[bool, Optional[MinorWitness]]:
    """Exact pattern-minor containment with a verifiable witness."""
    is_tree_pattern = len(pattern.edges) == pattern.n - 1 and \
        is_connected_set(pattern.adjacency(), range(1, pattern.n + 1)) if pattern.n else True
    limit = config.has_minor_max_tree_pattern if is_tree_pattern else config.has_minor_max_pattern
    if pattern.n > limit:
        raise InstanceTooLarge(f"pattern with {pattern.n} vertices exceeds limit {limit}")
    if graph.n > config.has_minor_max_host:
        raise InstanceTooLarge(f"host with {graph.n} vertices exceeds limit")
    adj = whole_adj(graph)
    branch = minor_search(adj, pattern, cap=config.minor_search_cap)
    if branch is None:
        return False, None
    return True, witness_from_branch_sets(adj, pattern, branch)


def has_minor_partition_check(graph: Graph, pattern: Pattern) -> bool:
    """Independent oracle: enumerate all vertex->{0..h} assignments directly."""
    n, h = graph.n, pattern.n
    if h == 0:
        return True
    if n < h:
        return False
    nbr_mask = [0] * (n + 1)
    for v in range(1, n + 1):
        m = 0
        for u in graph.adj(v):
            m |= 1 << u
        nbr_mask[v] = m

    def cls_connected(mask: int) -> bool:
        lowest = mask & -mask
        seen = lowest
        frontier = lowest
        while frontier:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                m ^= b
                nxt |= nbr_mask[b.bit_length() - 1]
            frontier = nxt & mask & ~seen
            seen |= frontier
        return seen == mask

    def classes_adjacent(ma: int, mb: int) -> bool:
        m = ma
        while m:
            b = m & -m
            m ^= b
            if nbr_mask[b.bit_length() - 1] & mb:
                return True
        return False

    assignment = [0] * (n + 1)

    def rec(v: int) -> bool:
        if v > n:
            masks = [0] * (h + 1)
            for x in range(1, n + 1):
                masks[assignment[x]] |= 1 << x
            for c in range(1, h + 1):
                if masks[c] == 0 or not cls_connected(masks[c]):
                    return False
            for a, b in pattern.edges:
                if not classes_adjacent(masks[a], masks[b]):
                    return False
            return True
        for c in range(0, h + 1):
            assignment[v] = c
            if rec(v + 1):
                return True
        assignment[v] = 0
        return False

    return rec(1)


def exact_distance_to_minor_free(graph: Graph, pattern: Pattern,
                                 config: Config = DEFAULT) -> int:
    """Minimum number of edge removals making the graph pattern-minor-free."""
    edges = list(graph.edges())
    if len(edges) > config.distance_minor_max_edges:
        raise InstanceTooLarge(f"{len(edges)} edges exceed subset-enumeration limit")
    base_adj = whole_adj(graph)
    for r in range(len(edges) + 1):
        for removed in combinations(range(len(edges)), r):
            rem = set(removed)
            adj: dict[int, list[int]] = {v: [] for v in base_adj}
            for i, e in enumerate(edges):
                if i in rem or e.u == e.v:
                    continue
                adj[e.u].append(e.v)
                adj[e.v].append(e.u)
            if minor_search(adj, pattern, cap=config.minor_search_cap) is None:
                return r
    return len(edges)


# --------------------------------------------------------------------------
# spots

def external_path_shorter_than(graph: Graph, S, u: int, v: int, bound: int) -> bool:
    """Is there a path u->v of length in [2, bound) whose interior avoids S?"""
    sset = set(S)
    # BFS over non-S vertices; level 1 = non-S neighbors of u
    dist: dict[int, int] = {}
    queue: list[int] = []
    for w in graph.adj(u):
        if w not in sset and w not in dist:
            dist[w] = 1
            queue.append(w)
    head = 0
    while head < len(queue):
        w = queue[head]
        head += 1
        dw = dist[w]
        if dw + 1 >= bound:
            continue
        for x in graph.adj(w):
            if x == v:
                if dw + 1 >= 2:
                    return True
                continue
            if x not in sset and x not in dist:
                dist[x] = dw + 1
                queue.append(x)
    return False


def spot_conditions(graph: Graph, S, k: int,
                    config: Config = DEFAULT) -> bool:
    """Definition check for a k-spot: C_k-minor-free induced subgraph,
    2-connected with |S| >= 3, all external paths between S-vertices >= 2k."""
    S = frozenset(S)
    if len(S) < 3:
        return False
    sub = induced_adj(graph, S)
    if not is_biconnected(sub, S):
        return False
    if find_cycle_at_least(sub, k, cap=config.long_cycle_cap) is not None:
        return False
    for u in sorted(S):
        for v in sorted(S):
            if u < v and external_path_shorter_than(graph, S, u, v, 2 * k):
                return False
    return True


def exact_spots(graph: Graph, k: int, config: Config = DEFAULT) -> list[frozenset]:
    """All k-spots, by subset enumeration (desk scale)."""
    if k < 4:
        raise ValueError("spots are defined for k >= 4")
    if graph.n > config.spots_max_n:
        raise InstanceTooLarge(f"spot enumeration limited to {config.spots_max_n} vertices")
    out = []
    for comp in graph.components():
        cs = sorted(comp)
        m = len(cs)
        for mask in range(1, 1 << m):
            if bin(mask).count("1") < 3:
                continue
            S = frozenset(cs[i] for i in range(m) if mask >> i & 1)
            if spot_conditions(graph, S, k, config):
                out.append(S)
    return sorted(out, key=lambda s: sorted(s))


# --------------------------------------------------------------------------
# local expansion

def ball(graph: Graph, s: int, radius: int) -> dict[int, int]:
    """Vertices within distance `radius` of s, mapped to their distance."""
    dist = {s: 0}
    queue = [s]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        if dist[v] >= radius:
            continue
        for u in graph.adj(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def cut_size(graph: Graph, S) -> int:
    sset = set(S)
    c = 0
    for v in sset:
        for u in graph.adj(v):
            if u not in sset:
                c += 1
    return c


def check_expansion(graph: Graph, s: int, radius: int, eps: float,
                    strict: bool = False,
                    config: Config = DEFAULT) -> tuple[bool, Optional[frozenset]]:
    """True iff every connected S within distance `radius` of s has cut at
    least (strictly greater than, if strict) eps*|S|*d edges."""
    reach = ball(graph, s, radius)
    if len(reach) > config.expansion_max_ball:
        raise InstanceTooLarge(f"{radius}-ball around {s} has {len(reach)} vertices")
    adj = induced_adj(graph, reach)  # connectivity inside the ball
    allowed = sorted(reach)
    for i, r in enumerate(allowed):
        for S in enumerate_connected_sets(adj, r, allowed[i:], cap=config.connected_enum_cap):
            c = cut_size(graph, S)
            bound = eps * len(S) * graph.d
            if (c <= bound) if strict else (c < bound):
                return False, S
    return True, None


def check_expansion_bitmask(graph: Graph, s: int, radius: int, eps: float,
                            strict: bool = False,
                            config: Config = DEFAULT) -> tuple[bool, Optional[frozenset]]:
    """Second, independently ordered enumerator (bitmasks) for cross-checking."""
    reach = sorted(ball(graph, s, radius))
    if len(reach) > config.expansion_max_ball:
        raise InstanceTooLarge(f"{radius}-ball around {s} has {len(reach)} vertices")
    adj = induced_adj(graph, reach)
    m = len(reach)
    for mask in range(1, 1 << m):
        S = frozenset(reach[i] for i in range(m) if mask >> i & 1)
        if not is_connected_set(adj, S):
            continue
        c = cut_size(graph, S)
        bound = eps * len(S) * graph.d
        if (c <= bound) if strict else (c < bound):
            return False, S
    return True, None
