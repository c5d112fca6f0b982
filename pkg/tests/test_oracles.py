from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minortest.certificates import (
    MinorWitness,
    Pattern,
    SimpleCycle,
    SparseCut,
    cycle_pattern,
    path_pattern,
    star_pattern,
    verify_certificate,
)
from minortest.errors import InstanceTooLarge
from minortest.graphcore import EdgeLabeling, Graph, LAMBDA
from minortest.oracles import (
    all_connected_sets,
    biconnected_components,
    check_expansion,
    check_expansion_bitmask,
    exact_distance_to_cycle_free,
    exact_distance_to_minor_free,
    exact_has_minor,
    exact_is_cycle_free,
    exact_min_violations,
    exact_spots,
    find_cycle_at_least,
    has_minor_partition_check,
    induced_adj,
    is_biconnected,
    whole_adj,
)

from conftest import complete_graph, cycle_graph, path_graph, star_graph, triangle


# -- cycle detection ---------------------------------------------------------

def test_cycle_free_path():
    ok, cert = exact_is_cycle_free(path_graph(5))
    assert ok and cert is None


def test_cycle_free_triangle(tri):
    ok, cert = exact_is_cycle_free(tri)
    assert not ok
    assert verify_certificate(tri, cert)[0]
    assert sorted(cert.vertices) == [1, 2, 3]


def test_cycle_free_two_trees():
    g = Graph.from_edges(6, 3, [(1, 2), (2, 3), (4, 5), (5, 6)])
    assert exact_is_cycle_free(g)[0]


def test_cycle_free_multigraph_defects():
    g = Graph.from_edges(2, 4, [(1, 2), (1, 2)], multigraph=True)
    ok, cert = exact_is_cycle_free(g)
    assert not ok and len(cert.vertices) == 2
    assert verify_certificate(g, cert)[0]
    g2 = Graph.from_edges(2, 4, [(1, 1)], multigraph=True)
    ok2, cert2 = exact_is_cycle_free(g2)
    assert not ok2 and len(cert2.vertices) == 1
    assert verify_certificate(g2, cert2)[0]


# -- distance to cycle-freeness ---------------------------------------------

def test_distance_triangle(tri):
    assert exact_distance_to_cycle_free(tri) == 1


def test_distance_k4_matches_enumeration():
    g = complete_graph(4)
    # independent oracle: enumerate all 3-subsets of edges, check forest
    edges = list(g.edges())
    def leaves_forest(removed):
        keep = [e for i, e in enumerate(edges) if i not in removed]
        h = Graph.from_edges(4, 3, [(e.u, e.v) for e in keep])
        return exact_is_cycle_free(h)[0]
    best = min(r for r in range(len(edges) + 1)
               for removed in combinations(range(len(edges)), r)
               if leaves_forest(set(removed)))
    assert best == 3
    assert exact_distance_to_cycle_free(g) == 3


def test_distance_forest_zero():
    assert exact_distance_to_cycle_free(path_graph(7)) == 0


# -- generalized 2-coloring ---------------------------------------------------

class FixedLabeling(EdgeLabeling):
    """Deterministic labeling for enumeration tests: parity from a dict."""

    def __init__(self, parities):
        super().__init__(0, LAMBDA)
        self._parities = {(min(a, b), max(a, b)): p for (a, b), p in parities.items()}

    def bit(self, a, b, mult=0):
        return self._parities[(min(a, b), max(a, b))]


def all_neq(graph):
    return FixedLabeling({(e.u, e.v): 1 for e in graph.edges()})


def brute_min_violations(graph, labeling):
    best = None
    n = graph.n
    for mask in range(1 << n):
        viol = 0
        for e in graph.edges():
            bu = mask >> (e.u - 1) & 1
            bv = mask >> (e.v - 1) & 1
            parity = labeling.lambda_parity(e.u, e.v, e.mult) if labeling else 1
            if (bu ^ bv) != parity:
                viol += 1
        best = viol if best is None else min(best, viol)
    return best


def test_min_violations_c6_all_neq():
    g = cycle_graph(6)
    count, coloring = exact_min_violations(g, all_neq(g))
    assert count == 0
    for e in g.edges():
        assert coloring[e.u] != coloring[e.v]


def test_min_violations_c5_all_neq():
    g = cycle_graph(5)
    assert brute_min_violations(g, all_neq(g)) == 1  # enumerate all 32 colorings
    assert exact_min_violations(g, all_neq(g))[0] == 1


def test_min_violations_c6_one_eq():
    g = cycle_graph(6)
    lab = FixedLabeling({(e.u, e.v): (0 if (e.u, e.v) == (1, 2) else 1)
                         for e in g.edges()})
    assert brute_min_violations(g, lab) == 1
    assert exact_min_violations(g, lab)[0] == 1


def test_min_violations_component_additive():
    g = Graph.from_edges(8, 3, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (7, 8)])
    count, _ = exact_min_violations(g, all_neq(g))
    assert count == 2  # one per triangle


def test_min_violations_too_large():
    g = path_graph(30)
    with pytest.raises(InstanceTooLarge):
        exact_min_violations(g, None)


# -- minor containment --------------------------------------------------------

def test_c5_has_c4_minor():
    got, wit = exact_has_minor(cycle_graph(5), cycle_pattern(4))
    assert got
    assert verify_certificate(cycle_graph(5), wit)[0]


def test_star_has_no_p3_minor():
    got, wit = exact_has_minor(star_graph(3), path_pattern(3))
    assert not got and wit is None


def test_k4_minus_edge_has_c4():
    g = Graph.from_edges(4, 3, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    got, wit = exact_has_minor(g, cycle_pattern(4))
    assert got and verify_certificate(g, wit)[0]
    assert has_minor_partition_check(g, cycle_pattern(4))


def test_distance_to_minor_free_examples():
    assert exact_distance_to_minor_free(triangle(), cycle_pattern(3)) == 1
    assert exact_distance_to_minor_free(complete_graph(4), cycle_pattern(4)) == 2
    assert exact_distance_to_minor_free(path_graph(6), star_pattern(3)) == 0


def test_distance_coincides_with_cycle_distance():
    # cycle-free == C3-minor-free: the two distances agree on small graphs
    cases = [triangle(), complete_graph(4), cycle_graph(5), path_graph(5),
             Graph.from_edges(6, 3, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)])]
    for g in cases:
        assert exact_distance_to_minor_free(g, cycle_pattern(3)) == \
            exact_distance_to_cycle_free(g)


def _connected_graphs(n_max, d=3):
    """All connected graphs up to isomorphism with <= n_max vertices and max
    degree <= d, via networkx atlas."""
    import networkx as nx

    out = []
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() > n_max or g.number_of_nodes() < 1:
            continue
        if not nx.is_connected(g) or g.number_of_nodes() == 0:
            continue
        if max((dd for _, dd in g.degree()), default=0) > d:
            continue
        out.append(g)
    return out


def _to_graph(nxg, d=3):
    nodes = sorted(nxg.nodes())
    idx = {v: i + 1 for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), d, [(idx[u], idx[v]) for u, v in nxg.edges()])


_PATTERNS_LE4 = [
    path_pattern(1), path_pattern(2), path_pattern(3), star_pattern(3),
    cycle_pattern(3), cycle_pattern(4), Pattern(4, ((1, 2), (2, 3), (3, 1), (3, 4))),
    Pattern(4, ((1, 2), (2, 3), (3, 1), (1, 4), (3, 4))),  # diamond
    Pattern(4, ((1, 2), (2, 3), (3, 1), (1, 4), (2, 4), (3, 4))),  # K4
]


def test_minor_engine_agrees_with_partition_oracle_small():
    hosts = [_to_graph(g, d=6) for g in _connected_graphs(6, d=6)]
    for g in hosts:
        for pat in _PATTERNS_LE4:
            got, wit = exact_has_minor(g, pat)
            assert got == has_minor_partition_check(g, pat), (g, pat)
            if got:
                assert verify_certificate(g, wit)[0]


def test_minor_engine_agrees_on_sampled_8_vertex_hosts():
    import networkx as nx

    from minortest.rng import Rng

    rng = Rng(20240)
    count = 0
    while count < 60:
        n = 8
        p = 0.3
        edges = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < p]
        nxg = nx.Graph(edges)
        nxg.add_nodes_from(range(1, n + 1))
        if not nx.is_connected(nxg) or max(d for _, d in nxg.degree()) > 7:
            continue
        g = Graph.from_edges(n, 7, edges)
        pat = _PATTERNS_LE4[count % len(_PATTERNS_LE4)]
        got, wit = exact_has_minor(g, pat)
        assert got == has_minor_partition_check(g, pat)
        if got:
            assert verify_certificate(g, wit)[0]
        count += 1


# -- spots --------------------------------------------------------------------

def test_spots_k4_isolated_k4():
    g = complete_graph(4)
    assert exact_spots(g, 5) == [frozenset({1, 2, 3, 4})]


def test_spots_triangle_k4(tri):
    assert exact_spots(tri, 4) == [frozenset({1, 2, 3})]


def test_spots_c6_empty():
    assert exact_spots(cycle_graph(6), 4) == []


def test_spot_claims_small():
    # diameter < k/2, u-w-v paths <= 2k-1, pairwise intersections <= 1,
    # size bound d^{k-1}: checked on a mixed instance
    g = Graph.from_edges(9, 4, [(1, 2), (2, 3), (1, 3),
                                (4, 5), (5, 6), (4, 6),
                                (3, 7), (7, 8), (8, 9), (9, 4)])
    for k in (4, 5):
        spots = exact_spots(g, k)
        for S in spots:
            sub = induced_adj(g, S)
            # diameter
            for s in S:
                dist = {s: 0}
                q = [s]
                while q:
                    x = q.pop(0)
                    for y in sub[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            q.append(y)
                assert max(dist.values()) < k / 2
            assert len(S) < g.d ** (k - 1)
        for i, a in enumerate(spots):
            for b in spots[i + 1:]:
                assert len(a & b) <= 1


def test_spots_instance_too_large():
    with pytest.raises(InstanceTooLarge):
        exact_spots(path_graph(40), 4)


# -- expansion ----------------------------------------------------------------

def test_expansion_singleton_violation():
    g = Graph.from_edges(2, 3, [(1, 2)])
    ok, bad = check_expansion(g, 1, 1, 0.9)
    assert not ok and bad is not None


def test_expansion_k4_singletons_fine():
    g = complete_graph(4)
    # every singleton has cut 3 >= 0.1*1*3; whole sets fail, so restrict radius
    ok, bad = check_expansion(g, 1, 0, 0.1)
    assert ok


def test_expansion_dual_enumerators_agree():
    from minortest.generators import gen_lower_bound_family

    g, _ = gen_lower_bound_family(14, seed=5)
    for eps in (0.05, 0.2, 0.5):
        a = check_expansion(g, 1, 2, eps)
        b = check_expansion_bitmask(g, 1, 2, eps)
        assert a[0] == b[0]


# -- helpers ------------------------------------------------------------------

def test_connected_set_enumeration_matches_bitmask():
    g = Graph.from_edges(6, 4, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6)])
    adj = whole_adj(g)
    enum = set(all_connected_sets(adj))
    brute = set()
    vs = list(range(1, 7))
    from minortest.oracles import is_connected_set
    for mask in range(1, 1 << 6):
        S = frozenset(vs[i] for i in range(6) if mask >> i & 1)
        if is_connected_set(adj, S):
            brute.add(S)
    assert enum == brute


def test_biconnected_components_and_flag():
    g = Graph.from_edges(7, 4, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (6, 7)])
    adj = whole_adj(g)
    blocks = {frozenset(b) for b in biconnected_components(adj)}
    assert frozenset({1, 2, 3}) in blocks
    assert frozenset({4, 5, 6}) in blocks
    assert is_biconnected(adj, {1, 2, 3})
    assert not is_biconnected(adj, {1, 2, 3, 4})


def test_find_cycle_at_least():
    g = cycle_graph(6)
    adj = whole_adj(g)
    assert find_cycle_at_least(adj, 6) is not None
    assert find_cycle_at_least(adj, 7) is None
    tri_adj = whole_adj(triangle())
    assert find_cycle_at_least(tri_adj, 4) is None


def test_verify_certificate_negative_cases(tri):
    assert not verify_certificate(tri, SimpleCycle((1, 2, 1)))[0]
    assert not verify_certificate(tri, SimpleCycle((1, 2)))[0]
    wit = MinorWitness(path_pattern(1), (frozenset([1]), frozenset([1])),
                       (((1, 2), (1, 2)),))
    assert not verify_certificate(tri, wit)[0]  # overlapping branch sets
    cut = SparseCut(frozenset([1]), ((1, 2),), 0.5)
    assert not verify_certificate(tri, cut)[0]  # crossing set wrong


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_has_minor_random_consistency(seed):
    from minortest.rng import Rng

    rng = Rng(seed)
    n = 5 + rng.below(3)
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rng.below(100) < 35]
    g = Graph.from_edges(n, n - 1, edges)
    pat = _PATTERNS_LE4[rng.below(len(_PATTERNS_LE4))]
    got, wit = exact_has_minor(g, pat)
    assert got == has_minor_partition_check(g, pat)
    if got:
        assert verify_certificate(g, wit)[0]
