"""Graph storage, the incidence-list query oracle, and lazy edge labelings.

Vertices are 1-indexed; 0 is the null answer for out-of-range neighbor
queries.  Graphs are immutable after construction and safely shareable;
oracles and labelings are single-owner per trial.
"""
from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Optional

import numpy as np

from .rng import Rng, label_bit


class GraphFormatError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """Raised when an oracle call would exceed the configured query budget."""


class CanonicalEdge(NamedTuple):
    u: int
    v: int
    mult: int = 0


def canonical_edge(u: int, v: int, mult: int = 0) -> CanonicalEdge:
    return CanonicalEdge(u, v, mult) if u <= v else CanonicalEdge(v, u, mult)


class Graph:
    """Immutable bounded-degree graph with ordered adjacency lists.

    Neighbor order within adj(v) is construction order; testers must not rely
    on it.  A self-loop (multigraphs only) appears once in adj(v).
    """

    __slots__ = ("n", "d", "_adj", "is_multigraph", "_csr")

    def __init__(self, n: int, d: int, adj, is_multigraph: bool = False, _validate: bool = True):
        self.n = n
        self.d = d
        self._adj = adj  # index 0 unused
        self.is_multigraph = is_multigraph
        self._csr = None
        if _validate:
            self._check_invariants()

    def _check_invariants(self) -> None:
        if len(self._adj) != self.n + 1:
            raise GraphFormatError("adjacency table size mismatch")
        counts = {}
        for v in range(1, self.n + 1):
            nbrs = self._adj[v]
            if len(nbrs) > self.d:
                raise GraphFormatError(f"degree bound violated at vertex {v}")
            for u in nbrs:
                if not 1 <= u <= self.n:
                    raise GraphFormatError(f"neighbor {u} of {v} out of range")
                if u == v and not self.is_multigraph:
                    raise GraphFormatError(f"self-loop at {v} in simple graph")
                counts[(v, u)] = counts.get((v, u), 0) + 1
        for (v, u), c in counts.items():
            if u != v and counts.get((u, v), 0) != c:
                raise GraphFormatError(f"asymmetric adjacency between {u} and {v}")
            if not self.is_multigraph and c > 1:
                raise GraphFormatError(f"parallel edges between {u} and {v} in simple graph")

    @classmethod
    def from_edges(cls, n: int, d: int, edges: Iterable[tuple[int, int]],
                   multigraph: bool = False) -> "Graph":
        adj = [[] for _ in range(n + 1)]
        for u, v in edges:
            if u == v:
                adj[u].append(v)
            else:
                adj[u].append(v)
                adj[v].append(u)
        return cls(n, d, [tuple(a) for a in adj], is_multigraph=multigraph)

    # -- structure access (no query accounting; testers go through QueryOracle)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbor(self, v: int, i: int) -> int:
        a = self._adj[v]
        return a[i - 1] if 1 <= i <= len(a) else 0

    def adj(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj[u].count(v)

    def edges(self) -> Iterator[CanonicalEdge]:
        """Canonical edges, each undirected edge once per multiplicity copy."""
        seen: dict[tuple[int, int], int] = {}
        for v in range(1, self.n + 1):
            for u in self._adj[v]:
                if u >= v:
                    key = (v, u)
                    m = seen.get(key, 0)
                    seen[key] = m + 1
                    yield CanonicalEdge(v, u, m)

    @property
    def num_edges(self) -> int:
        loops = sum(self._adj[v].count(v) for v in range(1, self.n + 1))
        return (sum(len(self._adj[v]) for v in range(1, self.n + 1)) - loops) // 2 + loops

    def components(self) -> list[list[int]]:
        seen = [False] * (self.n + 1)
        out = []
        for s in range(1, self.n + 1):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            stack = [s]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        stack.append(u)
            out.append(comp)
        return out

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) with 1-indexed vertices; indptr has n+2 slots."""
        if self._csr is None:
            indptr = np.zeros(self.n + 2, dtype=np.int64)
            for v in range(1, self.n + 1):
                indptr[v + 1] = indptr[v] + len(self._adj[v])
            indices = np.zeros(max(int(indptr[-1]), 1), dtype=np.int64)
            for v in range(1, self.n + 1):
                indices[indptr[v]:indptr[v + 1]] = self._adj[v]
            self._csr = (indptr, indices)
        return self._csr

    def shuffled_adjacency(self, seed: int) -> "Graph":
        """Same graph with each adjacency list independently permuted."""
        rng = Rng(seed)
        adj = [()]
        for v in range(1, self.n + 1):
            a = list(self._adj[v])
            rng.shuffle(a)
            adj.append(tuple(a))
        return Graph(self.n, self.d, adj, is_multigraph=self.is_multigraph, _validate=False)

    # -- text format: line 1 "N d [multi]", then one "u v" line per edge

    def dumps(self) -> str:
        head = f"{self.n} {self.d} multi" if self.is_multigraph else f"{self.n} {self.d}"
        lines = [head]
        for e in sorted(self.edges()):
            lines.append(f"{e.u} {e.v}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "Graph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError("empty graph file")
        head = lines[0].split()
        multi = False
        if len(head) == 3 and head[2] == "multi":
            multi = True
        elif len(head) != 2:
            raise GraphFormatError(f"bad header: {lines[0]!r}")
        try:
            n, d = int(head[0]), int(head[1])
        except ValueError as exc:
            raise GraphFormatError(f"bad header: {lines[0]!r}") from exc
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphFormatError(f"bad edge line: {ln!r}")
            u, v = int(parts[0]), int(parts[1])
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"edge endpoint out of range: {ln!r}")
            edges.append((u, v))
        if not multi:
            seen = set()
            for u, v in edges:
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise GraphFormatError(f"repeated edge {key} without multi flag")
                seen.add(key)
        return cls.from_edges(n, d, edges, multigraph=multi)

    @classmethod
    def load(cls, path) -> "Graph":
        with open(path) as f:
            return cls.loads(f.read())

    def __repr__(self) -> str:
        kind = "MultiGraph" if self.is_multigraph else "Graph"
        return f"<{kind} n={self.n} d={self.d} m={self.num_edges}>"


class QueryOracle:
    """The only access path testers may use; counts every query.

    When a budget is set, a call that would exceed it raises BudgetExhausted
    instead of returning data.
    """

    __slots__ = ("graph", "neighbor_queries", "degree_queries", "budget")

    def __init__(self, graph: Graph, budget: Optional[int] = None):
        self.graph = graph
        self.neighbor_queries = 0
        self.degree_queries = 0
        self.budget = budget

    @property
    def total_queries(self) -> int:
        return self.neighbor_queries + self.degree_queries

    @property
    def remaining_budget(self) -> Optional[int]:
        if self.budget is None:
            return None
        return self.budget - self.total_queries

    def _check(self, amount: int = 1) -> None:
        if self.budget is not None and self.total_queries + amount > self.budget:
            raise BudgetExhausted(f"query budget {self.budget} exhausted")

    def neighbor(self, v: int, i: int) -> int:
        self._check()
        self.neighbor_queries += 1
        return self.graph.neighbor(v, i)

    def degree(self, v: int) -> int:
        self._check()
        self.degree_queries += 1
        return self.graph.degree(v)

    def charge(self, neighbor: int = 0, degree: int = 0) -> None:
        """Account for queries performed on this oracle's behalf by a kernel."""
        self.neighbor_queries += neighbor
        self.degree_queries += degree
        if self.budget is not None and self.total_queries > self.budget:
            raise BudgetExhausted(f"query budget {self.budget} exhausted")


TAU = "tau"
LAMBDA = "lambda"


class EdgeLabeling:
    """Lazy random edge labels: tau in {1,2} or Lambda in {eq,neq}.

    Values derive from a keyed hash of (seed, canonical edge), so replay is
    deterministic and independent of query order.  The cache exists only to
    make repeated lookups cheap.
    """

    __slots__ = ("seed", "domain", "cache")

    def __init__(self, seed: int, domain: str):
        if domain not in (TAU, LAMBDA):
            raise ValueError(f"unknown labeling domain {domain!r}")
        self.seed = seed
        self.domain = domain
        self.cache: dict[CanonicalEdge, int] = {}

    def bit(self, a: int, b: int, mult: int = 0) -> int:
        e = canonical_edge(a, b, mult)
        got = self.cache.get(e)
        if got is None:
            got = label_bit(self.seed, e.u, e.v, e.mult)
            self.cache[e] = got
        return got

    def label(self, a: int, b: int, mult: int = 0):
        """tau domain: 1 or 2; lambda domain: 'eq' or 'neq'."""
        bit = self.bit(a, b, mult)
        if self.domain == TAU:
            return 1 + bit
        return "neq" if bit else "eq"

    def lambda_parity(self, a: int, b: int, mult: int = 0) -> int:
        """Generalized parity contribution: neq edges odd, eq edges even."""
        return self.bit(a, b, mult)

    def subdivided(self, a: int, b: int, mult: int = 0) -> bool:
        """tau domain: True iff tau(e)=2 (edge replaced by a 2-edge path)."""
        return self.bit(a, b, mult) == 1
