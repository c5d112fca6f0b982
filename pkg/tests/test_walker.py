import math

import pytest

from minortest.certificates import SimpleCycle, verify_certificate
from minortest.config import DEFAULT
from minortest.graphcore import BudgetExhausted, EdgeLabeling, Graph, LAMBDA, QueryOracle
from minortest.oracles import exact_min_violations
from minortest.rng import Rng, derive_seed
from minortest.walker import (
    BaseView,
    WalkRecord,
    WalkerParams,
    extract_odd_cycle,
    run_walker,
    test_2colorable,
)

from conftest import cycle_graph, path_graph, triangle


def test_params_shapes():
    p = WalkerParams.derive(4096, 0.1)
    assert p.walks_per_start >= 1 and p.walk_length >= 1 and p.num_starts >= 1
    bigger = WalkerParams.derive(16384, 0.1)
    assert bigger.walks_per_start > p.walks_per_start


def test_c6_all_neq_always_accepts():
    g = cycle_graph(6)
    for seed in range(50):
        lab = EdgeLabeling(derive_seed(seed, 9), LAMBDA)
        v = test_2colorable(QueryOracle(g), 0.5, labeling=lab, seed=seed)
        # C6 is legally colorable under *any* labeling? no: only when the
        # generalized parity of the cycle is even; check against the oracle
        count, _ = exact_min_violations(g, lab)
        assert v.accepted == (count == 0)
        if not v.accepted:
            assert verify_certificate(g, v.certificate)[0]


def test_plain_bipartiteness_matches_oracle_on_small_graphs():
    cases = [cycle_graph(5), cycle_graph(6), path_graph(7), triangle()]
    for g in cases:
        count, _ = exact_min_violations(g, None)
        for seed in range(10):
            v = test_2colorable(QueryOracle(g), 0.4, seed=seed)
            assert v.accepted == (count == 0)


def test_certificate_has_odd_generalized_length():
    g = cycle_graph(5)
    lab = EdgeLabeling(77, LAMBDA)
    count, _ = exact_min_violations(g, lab)
    v = test_2colorable(QueryOracle(g), 0.5, labeling=lab, seed=3)
    assert v.accepted == (count == 0)
    if not v.accepted:
        cert = v.certificate
        assert cert.labeling_seed == lab.seed
        assert verify_certificate(g, cert)[0]


def test_extract_odd_cycle_triangle():
    rec_a = WalkRecord(1, [1, 2, 3], [0, 1, 0])
    rec_b = WalkRecord(1, [1, 3], [0, 1])
    cyc = extract_odd_cycle(rec_a, rec_b)
    assert sorted(cyc) == [1, 2, 3]


def test_extract_odd_cycle_with_shared_intermediate():
    # both prefixes pass through vertex 2; splice must stay simple and odd
    rec_a = WalkRecord(1, [1, 2, 4, 5], [0, 1, 0, 1])
    rec_b = WalkRecord(1, [1, 2, 5], [0, 1, 0])
    cyc = extract_odd_cycle(rec_a, rec_b)
    assert len(cyc) >= 3 and len(set(cyc)) == len(cyc)
    # odd generalized length relative to the recorded parities
    # (the extractor asserts this internally)


def test_extract_requires_opposite_parities():
    rec_a = WalkRecord(1, [1, 2], [0, 1])
    rec_b = WalkRecord(1, [1, 2], [0, 1])
    with pytest.raises(ValueError):
        extract_odd_cycle(rec_a, rec_b)


def test_one_sided_mass_runs():
    # absolute one-sidedness on legally colorable instances: zero rejections
    rejections = 0
    runs = 0
    for n, builder in ((9, path_graph), (8, cycle_graph), (12, path_graph)):
        g = builder(n)
        for seed in range(600):
            lab = EdgeLabeling(derive_seed(seed, n), LAMBDA)
            count, _ = exact_min_violations(g, lab)
            if count:
                continue
            v = test_2colorable(QueryOracle(g), 0.3, labeling=lab, seed=seed)
            runs += 1
            rejections += 0 if v.accepted else 1
    assert runs > 300
    assert rejections == 0


def test_budget_exhaustion_raises():
    g = cycle_graph(64)
    oracle = QueryOracle(g, budget=5)
    with pytest.raises(BudgetExhausted):
        test_2colorable(oracle, 0.2, seed=1)
    assert oracle.total_queries <= 5


def test_query_bound_matches_schedule():
    from minortest.generators import gen_far_from_cycle_free

    g, _ = gen_far_from_cycle_free(512, 3, 0.05, seed=4)
    oracle = QueryOracle(g)
    view = BaseView(oracle)
    params = WalkerParams.derive(g.n, 0.3, DEFAULT)
    res = run_walker(view, 0.3, Rng(11), DEFAULT, params=params)
    retry_cap = max(1, math.ceil(DEFAULT.retry_log_factor * math.log2(g.n)))
    bound = params.num_starts * (params.walks_per_start * params.walk_length + retry_cap)
    assert oracle.total_queries <= 2 * bound
