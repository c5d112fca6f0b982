"""Calibration constants and desk-scale enumeration limits.

The walker schedule constants keep the asymptotic shapes
L ~ c_L*log2(n)/eps^3, K ~ c_K*sqrt(n)*log2(n)/eps^2, T ~ c_T/eps and were
tuned once against the completeness acceptance suite (see README); exact
oracles fail loudly via InstanceTooLarge beyond their limits rather than
silently approximating.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Config:
    # bipartite-walker schedule knobs (calibrated defaults)
    c_L: float = 0.0025
    c_K: float = 4.0e-4
    c_T: float = 0.8
    # sampling retries: ceil(retry_log_factor * log2(n)) attempts, then the
    # trial accepts (one-sidedness preserved)
    retry_log_factor: float = 4.0
    # exhaustive fallback triggers when T*K*L >= n*d or when n*d is below
    # this floor (tiny instances are cheaper to read outright)
    exhaustive_floor: int = 512

    # cycle tester: proximity handed to the walker is c3 * eps / (2d)
    c3: float = 6.0
    # direct eq/neq route: walker proximity is c3_direct * eps
    c3_direct: float = 1.0

    # C_k tester: inner cycle-tester proximity is c_gprime * eps * d^-k;
    # None means 2 * d^k (collapsing to 2*eps), the calibrated default
    c_gprime: float | None = None
    k_max: int = 6

    # tree-family testers
    pk_trials_const: float = 4.0
    star_rounds_const: float = 4.0
    tree_rounds_const: float = 4.0
    explored_vertex_cap: int = 100_000

    # bounded exhaustive searches
    minor_search_cap: int = 2_000_000
    connected_enum_cap: int = 2_000_000
    long_cycle_cap: int = 2_000_000

    # exact-oracle size limits
    min_violations_max_component: int = 24
    has_minor_max_host: int = 20
    has_minor_max_pattern: int = 6
    has_minor_max_tree_pattern: int = 8
    distance_minor_max_edges: int = 16
    spots_max_n: int = 14
    expansion_max_ball: int = 18

    def with_overrides(self, **kwargs) -> "Config":
        return replace(self, **kwargs)


DEFAULT = Config()
