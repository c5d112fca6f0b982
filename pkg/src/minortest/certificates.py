"""Certificates carried by rejecting testers, their verifier, and verdicts.

The one-sided contract: a Reject verdict always carries a certificate that
verify_certificate accepts against the input graph.  Certificates serialize
to JSON so they can be re-checked standalone (`minortest verify`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .graphcore import Graph, LAMBDA, EdgeLabeling


@dataclass(frozen=True)
class Pattern:
    """A small pattern graph H with vertices 1..n (tree, cycle, or forest)."""
    n: int
    edges: tuple[tuple[int, int], ...]

    def degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def path_pattern(k: int) -> Pattern:
    """P_k: the path with k edges (k+1 vertices)."""
    return Pattern(k + 1, tuple((i, i + 1) for i in range(1, k + 1)))


def star_pattern(k: int) -> Pattern:
    """K_{1,k}: the star with k leaves; vertex 1 is the center."""
    return Pattern(k + 1, tuple((1, i) for i in range(2, k + 2)))


def cycle_pattern(k: int) -> Pattern:
    """C_k: the cycle on k vertices."""
    return Pattern(k, tuple((i, i + 1) for i in range(1, k)) + ((k, 1),))


def triangle_plus_edge_pattern() -> Pattern:
    """A triangle with one pendant edge attached at vertex 3."""
    return Pattern(4, ((1, 2), (2, 3), (3, 1), (3, 4)))


@dataclass(frozen=True)
class SimpleCycle:
    """A simple cycle, listed as distinct vertices in traversal order.

    When a labeling seed is attached the cycle additionally certifies odd
    generalized length (neq/unlabeled edges count 1, eq edges count 0).
    """
    vertices: tuple[int, ...]
    labeling_seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class MinorWitness:
    """Branch sets certifying that the pattern is a minor of the graph."""
    pattern: Pattern
    branch_sets: tuple[frozenset, ...]  # branch_sets[i] hosts pattern vertex i+1
    connecting_edges: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    # each entry: ((pattern_u, pattern_v), (graph_u, graph_v))


@dataclass(frozen=True)
class SparseCut:
    """A vertex set whose cut has at most zeta*|side|*d crossing edges."""
    side: frozenset
    crossing_edges: tuple[tuple[int, int], ...]
    zeta: float

    @property
    def sparsity_denominator(self) -> int:
        return len(self.side)


Certificate = object  # SimpleCycle | MinorWitness | SparseCut


@dataclass
class Verdict:
    accepted: bool
    certificate: Optional[Certificate] = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def accept(cls, **meta) -> "Verdict":
        return cls(True, None, meta)

    @classmethod
    def reject(cls, certificate: Certificate, **meta) -> "Verdict":
        return cls(False, certificate, meta)

    def __bool__(self) -> bool:
        return self.accepted


def verify_certificate(graph: Graph, cert: Certificate) -> tuple[bool, str]:
    """Check a certificate against a graph; returns (ok, reason)."""
    if isinstance(cert, SimpleCycle):
        return _verify_cycle(graph, cert)
    if isinstance(cert, MinorWitness):
        return _verify_minor(graph, cert)
    if isinstance(cert, SparseCut):
        return _verify_cut(graph, cert)
    return False, "unknown-certificate-kind"


def _verify_cycle(graph: Graph, cert: SimpleCycle) -> tuple[bool, str]:
    vs = cert.vertices
    t = len(vs)
    if len(set(vs)) != t:
        return False, "cycle-not-simple"
    if any(not 1 <= v <= graph.n for v in vs):
        return False, "cycle-vertex-out-of-range"
    if t < 3:
        # short cycles certify only multigraph defects
        if not graph.is_multigraph:
            return False, "cycle-too-short"
        if t == 1:
            if graph.multiplicity(vs[0], vs[0]) < 1:
                return False, "missing-self-loop"
            return True, "ok"
        if t == 2:
            if graph.multiplicity(vs[0], vs[1]) < 2:
                return False, "missing-parallel-edge"
            return True, "ok"
        return False, "empty-cycle"
    for i in range(t):
        u, v = vs[i], vs[(i + 1) % t]
        if not graph.has_edge(u, v):
            return False, f"missing-edge-{u}-{v}"
    if cert.labeling_seed is not None:
        lab = EdgeLabeling(cert.labeling_seed, LAMBDA)
        parity = 0
        for i in range(t):
            parity ^= lab.lambda_parity(vs[i], vs[(i + 1) % t])
        if parity != 1:
            return False, "generalized-length-even"
    return True, "ok"


def _verify_minor(graph: Graph, cert: MinorWitness) -> tuple[bool, str]:
    pat = cert.pattern
    if len(cert.branch_sets) != pat.n:
        return False, "branch-set-count-mismatch"
    used: set[int] = set()
    for i, bs in enumerate(cert.branch_sets):
        if not bs:
            return False, f"empty-branch-set-{i + 1}"
        if any(not 1 <= v <= graph.n for v in bs):
            return False, f"branch-set-{i + 1}-out-of-range"
        if used & bs:
            return False, "branch-sets-overlap"
        used |= bs
        if not _connected_in(graph, bs):
            return False, f"branch-set-{i + 1}-disconnected"
    listed = {}
    for (pu, pv), (gu, gv) in cert.connecting_edges:
        key = (min(pu, pv), max(pu, pv))
        listed[key] = (gu, gv)
    for a, b in pat.edges:
        key = (min(a, b), max(a, b))
        if key not in listed:
            return False, f"pattern-edge-{key}-unwitnessed"
        gu, gv = listed[key]
        if not graph.has_edge(gu, gv):
            return False, f"connecting-edge-{gu}-{gv}-missing"
        ba, bb = cert.branch_sets[a - 1], cert.branch_sets[b - 1]
        if not ((gu in ba and gv in bb) or (gu in bb and gv in ba)):
            return False, f"connecting-edge-{gu}-{gv}-wrong-sets"
    return True, "ok"


def _verify_cut(graph: Graph, cert: SparseCut) -> tuple[bool, str]:
    side = cert.side
    if not side:
        return False, "empty-cut-side"
    if any(not 1 <= v <= graph.n for v in side):
        return False, "cut-side-out-of-range"
    actual = []
    for v in side:
        for u in graph.adj(v):
            if u not in side:
                actual.append((v, u))
    actual_multi = sorted((min(a, b), max(a, b)) for a, b in actual)
    claimed_multi = sorted((min(a, b), max(a, b)) for a, b in cert.crossing_edges)
    if actual_multi != claimed_multi:
        return False, "crossing-set-mismatch"
    if len(actual_multi) > cert.zeta * len(side) * graph.d:
        return False, "cut-not-sparse"
    return True, "ok"


def _connected_in(graph: Graph, vs: frozenset) -> bool:
    it = iter(vs)
    start = next(it)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in graph.adj(v):
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vs)


# -- JSON round-trip ---------------------------------------------------------

def certificate_to_json(cert: Certificate) -> str:
    if isinstance(cert, SimpleCycle):
        obj = {"kind": "cycle", "vertices": list(cert.vertices)}
        if cert.labeling_seed is not None:
            obj["labeling_seed"] = cert.labeling_seed
    elif isinstance(cert, MinorWitness):
        obj = {
            "kind": "minor",
            "pattern": {"n": cert.pattern.n, "edges": [list(e) for e in cert.pattern.edges]},
            "branch_sets": [sorted(bs) for bs in cert.branch_sets],
            "connecting_edges": [[list(pe), list(ge)] for pe, ge in cert.connecting_edges],
        }
    elif isinstance(cert, SparseCut):
        obj = {
            "kind": "cut",
            "side": sorted(cert.side),
            "crossing_edges": [list(e) for e in cert.crossing_edges],
            "zeta": cert.zeta,
        }
    else:
        raise TypeError(f"not a certificate: {cert!r}")
    return json.dumps(obj, indent=2, sort_keys=True)


def certificate_from_json(text: str) -> Certificate:
    obj = json.loads(text)
    kind = obj.get("kind")
    if kind == "cycle":
        return SimpleCycle(tuple(obj["vertices"]), obj.get("labeling_seed"))
    if kind == "minor":
        pat = Pattern(obj["pattern"]["n"], tuple(tuple(e) for e in obj["pattern"]["edges"]))
        return MinorWitness(
            pat,
            tuple(frozenset(bs) for bs in obj["branch_sets"]),
            tuple((tuple(pe), tuple(ge)) for pe, ge in obj["connecting_edges"]),
        )
    if kind == "cut":
        return SparseCut(
            frozenset(obj["side"]),
            tuple(tuple(e) for e in obj["crossing_edges"]),
            float(obj["zeta"]),
        )
    raise ValueError(f"unknown certificate kind {kind!r}")
